"""Global comparison tolerance shared by every numeric check."""
from __future__ import annotations

from contextlib import contextmanager

DEFAULT_TOL = 1e-9
_tol = DEFAULT_TOL


def get_tol() -> float:
    return _tol


def set_tol(value: float) -> None:
    global _tol
    if not value >= 0:
        raise ValueError(f"tolerance must be nonnegative, got {value!r}")
    _tol = float(value)


@contextmanager
def tolerance(value: float):
    old = _tol
    set_tol(value)
    try:
        yield
    finally:
        set_tol(old)


def lt(a: float, b: float) -> bool:
    """Strict a < b; values within tol of each other count as equal."""
    return a < b - _tol


def le(a: float, b: float) -> bool:
    return a <= b + _tol


def close(a: float, b: float) -> bool:
    return abs(a - b) <= _tol
