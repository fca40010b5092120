"""
Logging setup for the SkinLock command line.

Library modules only create module loggers; handlers are attached here,
once, by the entry point.
"""

import logging

LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"


def configure_logging(verbosity: int = 0) -> None:
    """
    Attach a stderr handler to the skinlock logger hierarchy.

    Args:
        verbosity: 0 shows warnings, 1 adds info, 2 or more adds debug
    """
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = logging.WARNING

    root = logging.getLogger("skinlock")
    root.setLevel(level)
    if not root.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(handler)
    logging.captureWarnings(True)
