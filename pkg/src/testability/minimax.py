"""Minimax risk, optimal tests and TV-closest pairs between hulls.

On a finite sample space the minimax risk of testing ``P`` against ``Q``
equals one minus the total variation distance between their hulls.  Both
sides are computed by separate linear programs:

* the risk program minimizes ``t + s`` over tests ``phi`` subject to
  ``sup_P E[phi] <= t`` and ``sup_Q E[1 - phi] <= s``; for polytope classes
  each inner supremum is replaced by the feasibility system of its LP dual,
  so the whole problem stays a single LP;
* the distance program minimizes ``sum |mu - nu| / 2`` over hull members.

:func:`minimax_risk` returns both and refuses to report a nonzero gap.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from . import lp
from .errors import DimensionMismatch, DualityGapExceeded, LpInfeasible, NumericBreakdown
from .hypotheses import HypothesisSet, _clean_pmf, _eval, support_value
from .measures import Pmf, TestFn, expectation, tv_distance
from .scalar import FLOAT, GAP_TOL, RATIONAL, Scalar, join_modes, one, zero


class ClosestPair(NamedTuple):
    mu: Pmf
    nu: Pmf
    tv: Scalar


@dataclass(frozen=True)
class RiskReport:
    risk: Scalar
    optimal_test: TestFn
    worst_level: Scalar
    worst_power: Scalar
    tv: Scalar
    closest_pair: tuple[Pmf, Pmf]
    duality_gap: Scalar

    @property
    def mode(self) -> str:
        return self.optimal_test.mode


@dataclass(frozen=True)
class CertificateVerdict:
    valid: bool
    risk_of_phi: Scalar
    tv_of_pair: Scalar
    membership_ok: tuple[bool, bool]
    gap: Scalar


def _common(P: HypothesisSet, Q: HypothesisSet):
    if P.space != Q.space:
        raise DimensionMismatch("null and alternative live on different sample spaces")
    mode = join_modes(P.mode, Q.mode)
    return P.astype(mode), Q.astype(mode), mode


def _gap_ok(gap: Scalar, tol: float) -> bool:
    return gap == 0 if not isinstance(gap, float) else abs(gap) <= tol


def worst_case_level(phi: TestFn, P: HypothesisSet) -> Scalar:
    """``sup_{mu in hull(P)} E_mu[phi]``."""
    return support_value(P, phi.values).value


def worst_case_power(phi: TestFn, Q: HypothesisSet) -> Scalar:
    """``inf_{nu in hull(Q)} E_nu[phi]``."""
    return one(phi.mode) - support_value(Q, phi.complement().values).value


def optimal_test(P: HypothesisSet, Q: HypothesisSet) -> tuple[TestFn, Scalar]:
    """Solve the risk program alone; returns ``(phi, risk)``."""
    P, Q, mode = _common(P, Q)
    n = len(P.space)
    z, o = zero(mode), one(mode)
    b = lp.LpBuilder(mode)
    phi = b.add_vars(n, lower=0, upper=1)
    t = b.add_var(lower=None)
    s = b.add_var(lower=None)
    P.add_support_bound(b, [({j: o}, z) for j in phi], ({t: o}, z))
    Q.add_support_bound(b, [({j: -o}, o) for j in phi], ({s: o}, z))
    b.set_cost({t: o, s: o})
    sol = lp.solve(b.build())
    if not sol.optimal:
        raise LpInfeasible(f"risk program ended {sol.status}")
    vals = [sol.primal[j] for j in phi]
    if mode == FLOAT:
        vals = [min(max(v, 0.0), 1.0) for v in vals]
    return TestFn(P.space, vals, mode), sol.objective


def closest_pair(P: HypothesisSet, Q: HypothesisSet) -> ClosestPair:
    """A pair of hull members at minimal total variation distance."""
    P, Q, mode = _common(P, Q)
    n = len(P.space)
    b = lp.LpBuilder(mode)
    mu = P.add_member(b)
    nu = Q.add_member(b)
    e = b.add_vars(n)
    o = one(mode)
    for i in range(n):
        diff = dict(mu[i])
        for j, v in nu[i].items():
            diff[j] = diff.get(j, zero(mode)) - v
        b.add_row({e[i]: o, **{j: -v for j, v in diff.items()}}, ">=", 0)
        b.add_row({e[i]: o, **diff}, ">=", 0)
    b.set_cost({j: o / 2 for j in e})
    sol = lp.solve(b.build())
    if not sol.optimal:
        raise LpInfeasible(f"closest-pair program ended {sol.status}")
    x = sol.primal
    mu_star = _clean_pmf(P.space, [_eval(m, x, mode) for m in mu], mode)
    nu_star = _clean_pmf(P.space, [_eval(m, x, mode) for m in nu], mode)
    tv = sol.objective
    if mode == RATIONAL and tv != tv_distance(mu_star, nu_star):  # pragma: no cover
        raise NumericBreakdown("closest-pair objective disagrees with its own pair")
    return ClosestPair(mu_star, nu_star, tv)


def minimax_risk(P: HypothesisSet, Q: HypothesisSet, gap_tol: float = GAP_TOL) -> RiskReport:
    """Minimax risk with an optimal test and a TV-closest pair.

    Raises :class:`DualityGapExceeded` if ``risk + tv`` is not one
    (exactly in rational mode, within ``gap_tol`` in float mode).
    """
    P, Q, mode = _common(P, Q)
    phi, risk = optimal_test(P, Q)
    level = worst_case_level(phi, P)
    power = worst_case_power(phi, Q)
    if not _gap_ok(level + one(mode) - power - risk, gap_tol):
        raise DualityGapExceeded(
            f"optimal test attains {level + 1 - power}, program reported {risk}"
        )
    pair = closest_pair(P, Q)
    gap = risk + pair.tv - one(mode)
    if not _gap_ok(gap, gap_tol):
        raise DualityGapExceeded(f"risk {risk} + tv {pair.tv} - 1 = {gap}")
    return RiskReport(risk, phi, level, power, pair.tv, (pair.mu, pair.nu), gap)


def verify_strong_duality(P: HypothesisSet, Q: HypothesisSet) -> Scalar:
    """``risk + tv - 1`` from two independent programs (no tolerance check)."""
    _, risk = optimal_test(P, Q)
    return risk + closest_pair(P, Q).tv - 1


def check_saddle_certificate(
    phi: TestFn,
    mu: Pmf,
    nu: Pmf,
    P: HypothesisSet,
    Q: HypothesisSet,
    tol: float = GAP_TOL,
) -> CertificateVerdict:
    """Audit a claimed optimal test together with a claimed closest pair.

    The certificate is valid when both measures lie in their hulls and the
    test's worst-case risk equals one minus their distance; weak duality
    then forces all three to be optimal.
    """
    mode = join_modes(phi.mode, mu.mode, nu.mode, P.mode, Q.mode)
    phi, mu, nu = phi.astype(mode), mu.astype(mode), nu.astype(mode)
    P, Q = P.astype(mode), Q.astype(mode)
    risk = worst_case_level(phi, P) + one(mode) - worst_case_power(phi, Q)
    tv = tv_distance(mu, nu)
    members = (P.contains(mu), Q.contains(nu))
    gap = risk - (one(mode) - tv)
    valid = all(members) and _gap_ok(gap, tol)
    return CertificateVerdict(valid, risk, tv, members, gap)


def pair_risk(phi: TestFn, mu: Pmf, nu: Pmf) -> Scalar:
    """Risk of ``phi`` for the simple pair ``mu`` versus ``nu``."""
    return expectation(mu, phi) + expectation(nu, phi.complement())
