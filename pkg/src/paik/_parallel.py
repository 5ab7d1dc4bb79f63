"""Frequency-loop execution helper.

Per-frequency chain evaluation is scalar work, so the loop is serial by
default.  Setting PAIK_THREADS to an integer above 1 runs it on a thread
pool instead; results keep grid order either way.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

from .errors import ConfigError

_ENV_VAR = "PAIK_THREADS"


def thread_count() -> int:
    raw = os.environ.get(_ENV_VAR, "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{_ENV_VAR} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"{_ENV_VAR} must be a positive integer, got {raw!r}")
    return n


def map_frequencies(func: Callable[[float], complex], freqs: np.ndarray) -> np.ndarray:
    """Apply func to each frequency, preserving order."""
    n_threads = thread_count()
    if n_threads == 1 or freqs.size < 2 * n_threads:
        return np.array([func(float(f)) for f in freqs], dtype=complex)
    with ThreadPoolExecutor(max_workers=n_threads) as pool:
        values = list(pool.map(func, (float(f) for f in freqs)))
    return np.array(values, dtype=complex)
