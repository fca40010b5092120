"""
SkinLock - steady states and natural-orbital locking in nonreciprocal
Gaussian open fermion chains.
"""

__version__ = "0.1.0"
