"""Scalar modes: exact rationals or IEEE doubles.

Every vector in the package holds either ``fractions.Fraction`` entries
(``"rational"`` mode) or ``float`` entries (``"float"`` mode).  Comparisons
in float mode go through the tolerances defined here.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union

Scalar = Union[Fraction, float]

RATIONAL = "rational"
FLOAT = "float"
MODES = (RATIONAL, FLOAT)

# float-mode tolerances
PMF_TOL = 1e-12
FEAS_TOL = 1e-9
PIVOT_TOL = 1e-11
GAP_TOL = 1e-6


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"unknown scalar mode {mode!r}; expected one of {MODES}")
    return mode


def to_scalar(x, mode: str) -> Scalar:
    """Convert ``x`` to the scalar type of ``mode``.

    Floats entering rational mode are read by their shortest decimal repr,
    so ``0.3`` becomes ``3/10`` rather than its binary expansion.  Strings
    of the form ``"p/q"`` are accepted in both modes.
    """
    if mode == RATIONAL:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, (int, Rational)):
            return Fraction(x)
        if isinstance(x, float):
            if not math.isfinite(x):
                raise ValueError(f"non-finite value {x!r}")
            return Fraction(repr(x))
        if isinstance(x, str):
            return Fraction(x.strip())
        try:
            return Fraction(str(x))
        except (TypeError, ValueError):
            return Fraction(float(x))
    if mode == FLOAT:
        if isinstance(x, str):
            v = float(Fraction(x.strip()))
        else:
            v = float(x)
        if not math.isfinite(v):
            raise ValueError(f"non-finite value {x!r}")
        return v
    raise ValueError(f"unknown scalar mode {mode!r}")


def to_vector(xs: Iterable, mode: str) -> tuple:
    return tuple(to_scalar(x, mode) for x in xs)


def join_modes(*modes: str) -> str:
    """Float wins whenever any operand is float."""
    return FLOAT if FLOAT in modes else RATIONAL


def zero(mode: str) -> Scalar:
    return Fraction(0) if mode == RATIONAL else 0.0


def one(mode: str) -> Scalar:
    return Fraction(1) if mode == RATIONAL else 1.0


def is_zero(x: Scalar, tol: float = FEAS_TOL) -> bool:
    if isinstance(x, Fraction):
        return x == 0
    return abs(x) <= tol


def leq(a: Scalar, b: Scalar, tol: float = FEAS_TOL) -> bool:
    """``a <= b``, exact for rationals and up to ``tol`` for floats."""
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a <= b
    return a <= b + tol


def eq(a: Scalar, b: Scalar, tol: float = FEAS_TOL) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(a - b) <= tol


def fmt(x: Scalar) -> str | float:
    """JSON-ready form: ``"p/q"`` (or ``"p"``) for rationals, float otherwise."""
    if isinstance(x, Fraction):
        return str(x)
    return float(x)
