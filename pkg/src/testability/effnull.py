"""E-variables and the effective null hypothesis.

An e-variable for ``P`` is a nonnegative function whose expectation is at
most one under every member of ``P``.  The effective null is the set of
nonnegative measures that every such e-variable integrates to at most one.
On a finite space it is exactly the set of sub-probabilities dominated,
atom by atom, by some member of the hull of ``P``.  Both descriptions are
implemented independently so each can check the other.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

from . import lp
from .errors import InputError, LpInfeasible, NoPoweredEVariable, ValidationError
from .hypotheses import HypothesisSet, support_value
from .measures import Pmf, SampleSpace, _Vector
from .minimax import minimax_risk, worst_case_level
from .scalar import FEAS_TOL, PMF_TOL, RATIONAL, Scalar, join_modes, one, zero

DEFAULT_CAPS = tuple(2**k for k in range(21))


class CapScheduleExhausted(UserWarning):
    """Polar optimum still rising (but <= 1) at the largest cap."""


class EVariable(_Vector):
    """Nonnegative payoff vector; entry ``i`` is the wealth multiplier at atom ``i``."""

    __slots__ = ()

    def _check(self):
        if any(x < 0 for x in self._v):
            raise ValidationError("e-variable must be nonnegative")


class SubProbability(_Vector):
    """Nonnegative measure with total mass at most one."""

    __slots__ = ()

    def _check(self):
        if any(x < 0 for x in self._v):
            raise ValidationError("sub-probability has a negative entry")
        total = sum(self._v, zero(self.mode))
        limit = 1 if self.mode == RATIONAL else 1 + PMF_TOL
        if total > limit:
            raise ValidationError(f"sub-probability has mass {total} > 1")

    @classmethod
    def zeros(cls, space: SampleSpace, mode: str = RATIONAL) -> "SubProbability":
        return cls(space, [0] * len(space), mode)


def _as_sub(mu) -> SubProbability:
    if isinstance(mu, SubProbability):
        return mu
    if isinstance(mu, _Vector):
        return SubProbability(mu.space, mu.values, mu.mode)
    raise InputError("expected a SubProbability or Pmf")


def is_e_variable(z, P: HypothesisSet) -> bool:
    """``z >= 0`` and ``sup_{mu in hull(P)} E_mu[z] <= 1``."""
    vals = z.values if isinstance(z, _Vector) else tuple(z)
    if any(v < 0 for v in vals):
        return False
    mode = join_modes(P.mode, z.mode if isinstance(z, _Vector) else RATIONAL)
    v = support_value(P.astype(mode), vals).value
    return v <= 1 if mode == RATIONAL else v <= 1 + FEAS_TOL


def in_effective_null_dom(mu, P: HypothesisSet) -> bool:
    """Is ``mu`` dominated atomwise by some member of the hull of ``P``?"""
    mu = _as_sub(mu)
    if mu.space != P.space:
        raise InputError("measure and hypothesis live on different spaces")
    mode = join_modes(mu.mode, P.mode)
    mu = mu.astype(mode)
    b = lp.LpBuilder(mode)
    member = P.astype(mode).add_member(b)
    for expr, m in zip(member, mu):
        if m:
            b.add_row(expr, ">=", m)
    return lp.solve(b.build()).optimal


@dataclass(frozen=True)
class PolarResult:
    member: bool
    optimum: Scalar
    cap: Scalar
    witness: EVariable
    exhausted: bool = False


def polar_sup(mu, P: HypothesisSet, caps: Sequence | None = None) -> PolarResult:
    """Largest ``E_mu[Z]`` over e-variables ``Z`` for ``P`` bounded by growing caps.

    Stops as soon as an optimum exceeds one (not a member), or two
    consecutive caps give the same optimum (the supremum is reached).
    """
    mu = _as_sub(mu)
    if mu.space != P.space:
        raise InputError("measure and hypothesis live on different spaces")
    caps = DEFAULT_CAPS if caps is None else tuple(caps)
    if not caps or any(a >= b for a, b in zip(caps, caps[1:])):
        raise InputError("cap schedule must be nonempty and strictly increasing")
    mode = join_modes(mu.mode, P.mode)
    mu = mu.astype(mode)
    P = P.astype(mode)
    o, z0 = one(mode), zero(mode)
    exceeds = (lambda v: v > 1) if mode == RATIONAL else (lambda v: v > 1 + FEAS_TOL)
    same = (lambda a, b: a == b) if mode == RATIONAL else (lambda a, b: abs(a - b) <= FEAS_TOL)
    prev = None
    result = None
    for cap in caps:
        b = lp.LpBuilder(mode)
        zs = b.add_vars(len(mu), lower=0, upper=cap)
        P.add_support_bound(b, [({j: o}, z0) for j in zs], ({}, o))
        b.set_cost({j: -m for j, m in zip(zs, mu) if m})
        sol = lp.solve(b.build())
        if not sol.optimal:
            raise LpInfeasible(f"polar program ended {sol.status}")
        val = -sol.objective
        witness = EVariable(mu.space, [max(sol.primal[j], z0) for j in zs], mode)
        result = PolarResult(not exceeds(val), val, witness=witness, cap=cap)
        if exceeds(val):
            return result
        if prev is not None and same(val, prev):
            return result
        prev = val
    warnings.warn(
        f"polar optimum still increasing at cap {caps[-1]}", CapScheduleExhausted, stacklevel=2
    )
    return PolarResult(True, result.optimum, result.cap, result.witness, exhausted=True)


def in_effective_null_polar(mu, P: HypothesisSet, cap_schedule: Sequence | None = None) -> bool:
    """Does every e-variable for ``P`` integrate to at most one under ``mu``?"""
    return polar_sup(mu, P, cap_schedule).member


def hull_membership_equiv(nu: Pmf, P: HypothesisSet) -> tuple[bool, bool]:
    """``(nu in hull(P), nu in effective null of P)`` for a probability ``nu``.

    For mass-one measures the two answers coincide.
    """
    if not isinstance(nu, Pmf):
        raise InputError("hull_membership_equiv needs a probability (Pmf)")
    return P.contains(nu), in_effective_null_dom(nu, P)


def make_powered_e_variable(P: HypothesisSet, Q: HypothesisSet) -> tuple[EVariable, Scalar]:
    """A bounded e-variable for ``P`` whose expectation exceeds one on all of ``Q``.

    Built from a minimax optimal test ``phi`` with worst-case level ``c``:
    ``1 + phi`` when ``c`` is zero, otherwise ``phi / c``.  Returns the
    e-variable and ``inf_{nu in hull(Q)} E_nu[Z]``.
    """
    report = minimax_risk(P, Q)
    mode = report.mode
    if (report.tv == 0) if mode == RATIONAL else (report.tv <= FEAS_TOL):
        raise NoPoweredEVariable("hulls of null and alternative are at distance zero")
    phi = report.optimal_test
    P, Q = P.astype(mode), Q.astype(mode)
    c = worst_case_level(phi, P)
    if (c == 0) if mode == RATIONAL else (c <= FEAS_TOL):
        z = [1 + x for x in phi]
    else:
        z = [x / c for x in phi]
    Z = EVariable(phi.space, z, mode)
    inf_power = -support_value(Q, [-x for x in Z]).value
    return Z, inf_power


def e_value(z: EVariable, atom: int | str) -> Scalar:
    """Observed e-value when ``atom`` is drawn."""
    i = atom if isinstance(atom, int) else z.space.index(atom)
    return z[i]

