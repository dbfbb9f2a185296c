"""Shared utility functions for gpdd."""
import logging
import math
import os
from typing import Any, Optional, Sequence

import numpy as np
from dotenv import load_dotenv

from src.config.config import ENV_PREFIX, THREADS_ENV
from src.utils.errors import DomainError

logger = logging.getLogger("gpdd.utils")

# .env in the working directory may carry GPDD_* settings
load_dotenv()


def safe_get_config(key: str, default: Any = None) -> Any:
    """Get configuration value from environment or return default."""
    return os.environ.get(f"{ENV_PREFIX}{key}", default)


def worker_count(requested: Optional[int] = None) -> int:
    """Number of worker processes: explicit request, then GPDD_THREADS, then CPU count."""
    if requested is not None:
        if requested < 1:
            raise ValueError(f"worker count must be >= 1, got {requested}")
        return requested
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            value = int(raw)
        except ValueError:
            logger.warning(f"Ignoring non-integer {THREADS_ENV}={raw!r}")
        else:
            if value >= 1:
                return value
            logger.warning(f"Ignoring {THREADS_ENV}={value}; must be >= 1")
    return os.cpu_count() or 1


def make_rng(seed: int, stream: Sequence[int] = ()) -> np.random.Generator:
    """Independent generator for (seed, *stream); same inputs give the same draws."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *(int(s) for s in stream)]))


def check_positive(name: str, value: float) -> float:
    """Return value as float if finite and > 0, else raise DomainError."""
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a real number, got {value!r}") from None
    if not math.isfinite(value) or value <= 0.0:
        raise DomainError(f"{name} must be finite and > 0, got {value!r}")
    return value


def format_error(e: Exception) -> str:
    """One-line rendering of an error for CLI output."""
    msg = str(e).strip().splitlines()[0] if str(e).strip() else ""
    return f"{type(e).__name__}: {msg}" if msg else type(e).__name__
