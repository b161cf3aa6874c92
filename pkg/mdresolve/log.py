"""Logging setup driven by the MDRESOLVE_LOG environment variable."""

from __future__ import annotations

import logging
import os
import sys
from typing import Optional

ENV_VAR = "MDRESOLVE_LOG"
LEVELS = {
    "off": None,
    "info": logging.INFO,
    "trace": logging.DEBUG,
}
FORMAT = "%(levelname)s %(name)s: %(message)s"

_handler: Optional[logging.Handler] = None


def configure_logging(level: Optional[str] = None) -> Optional[int]:
    """
    Route mdresolve log records to stderr.

    Args:
        level: ``off``, ``info`` or ``trace``; read from MDRESOLVE_LOG when None.

    Returns:
        The numeric level in effect, or None when logging is off.
    """
    global _handler

    name = (level or os.environ.get(ENV_VAR) or "off").strip().lower()
    if name not in LEVELS:
        name = "off"
    numeric = LEVELS[name]

    logger = logging.getLogger("mdresolve")
    if _handler is not None:
        logger.removeHandler(_handler)
        _handler = None
    if numeric is None:
        # keeps the last-resort stderr handler quiet
        _handler = logging.NullHandler()
        logger.addHandler(_handler)
        logger.setLevel(logging.NOTSET)
        return None

    _handler = logging.StreamHandler(sys.stderr)
    _handler.setFormatter(logging.Formatter(FORMAT))
    logger.addHandler(_handler)
    logger.setLevel(numeric)
    return numeric
