"""Resource caps shared by the numerical routines.

All caps are read from the environment once per call so tests can patch them.
``EFFDIST_CELL_BUDGET`` bounds the number of quadrature cells / nodes,
``EFFDIST_MAX_BITS`` the working precision of elementary functions.
"""

from __future__ import annotations

import os

DEFAULT_CELL_BUDGET = 1 << 21
DEFAULT_MAX_BITS = 1 << 14
DEFAULT_SEARCH_CAP = 1 << 12
DEFAULT_GRID_CAP = 1 << 16


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    return int(raw)


def cell_budget() -> int:
    return _env_int("EFFDIST_CELL_BUDGET", DEFAULT_CELL_BUDGET)


def max_bits() -> int:
    return _env_int("EFFDIST_MAX_BITS", DEFAULT_MAX_BITS)


def search_cap() -> int:
    return _env_int("EFFDIST_SEARCH_CAP", DEFAULT_SEARCH_CAP)


def grid_cap() -> int:
    return _env_int("EFFDIST_GRID_CAP", DEFAULT_GRID_CAP)
