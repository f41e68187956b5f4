# -*- coding: utf-8 -*-
# إعدادات المشروع: القيم الافتراضية ومتغيرات البيئة

import logging
import os

TOOL_VERSION = "0.3.0"

# --- Physical defaults ---
DEFAULT_N = 4
MAX_QUBITS = 10
DEFAULT_DELTA = 0.1      # meV, exchange scale of coupled quantum dots
DEFAULT_COUPLING = 0.05  # bath coupling g, same energy unit as Delta
DEFAULT_FIT_WINDOW = 0.05

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

logger = logging.getLogger(__name__)


def _int_from_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Ignoring {name}={raw!r}: not an integer, using {default}")
        return default
    if value < 1:
        logger.warning(f"Ignoring {name}={raw!r}: must be >= 1, using {default}")
        return default
    return value


LOG_LEVEL = os.getenv("SUPERCOHERENCE_LOG_LEVEL", "INFO").upper()
LOG_FILE = os.getenv("SUPERCOHERENCE_LOG_FILE")
WORKERS = _int_from_env("SUPERCOHERENCE_WORKERS", 1)


def source_date_epoch() -> int:
    """Timestamp written into result metadata (reproducible-builds convention)."""
    raw = os.getenv("SOURCE_DATE_EPOCH", "0")
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"Ignoring SOURCE_DATE_EPOCH={raw!r}, using 0")
        return 0


def setup_logging(verbose: bool = False) -> None:
    """Configure the root logger once, at the entry point."""
    handlers = [logging.StreamHandler()]
    if LOG_FILE:
        handlers.append(logging.FileHandler(LOG_FILE, encoding="utf-8"))
    level = logging.DEBUG if verbose else getattr(logging, LOG_LEVEL, logging.INFO)
    logging.basicConfig(format=LOG_FORMAT, level=level, handlers=handlers, force=True)
