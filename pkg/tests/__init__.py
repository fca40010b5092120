# SkinLock Tests
