"""Named reproductions of the classic testability examples.

Each example builds its null and alternative on a finite grid, runs the
minimax and closest-pair programs, and compares against the known closed
form where one exists.  Limits that only exist for infinite spaces (mass
escaping to infinity, grids refining towards a continuum) are approached
through sequences of finite truncations and extrapolated; those estimates
are approximations and are labelled as such in the report notes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Mapping, Sequence

from .errors import InvalidParams, UnknownExample
from .hypotheses import Generators, HypothesisSet, mean_at_least, mean_at_most, symmetric_null, tv_ball
from .measures import Pmf, SampleSpace, TestFn, tv_distance
from .minimax import check_saddle_certificate, minimax_risk
from .scalar import GAP_TOL, RATIONAL, Scalar, check_mode, eq, one, to_scalar, zero


@dataclass
class StepRecord:
    step: Any
    risk: Scalar
    tv: Scalar
    gap: Scalar
    optimal_test: tuple
    closest_pair: tuple
    worst_level: Scalar
    worst_power: Scalar
    expected: dict = field(default_factory=dict)
    ok: bool = True


@dataclass
class ExperimentReport:
    name: str
    parameters: dict
    records: list[StepRecord]
    quantity: str
    limit_estimate: Scalar | None
    expected_limit: Scalar | None
    passed: bool
    trend: str = "single"
    notes: list[str] = field(default_factory=list)


@dataclass
class _Instance:
    P: HypothesisSet
    Q: HypothesisSet
    expected: dict  # closed-form values for this step, keyed by report field


def _frac_grid(n: int) -> list[Fraction]:
    return [Fraction(i, n - 1) for i in range(n)]


def _param(params: Mapping, key: str, default, kind: Callable = None):
    v = params.get(key, default)
    if kind is not None:
        try:
            v = kind(v)
        except (TypeError, ValueError) as exc:
            raise InvalidParams(f"parameter {key!r}: {exc}") from None
    return v


def _positive_int(lo: int):
    def conv(v):
        try:
            k = int(v) if isinstance(v, str) else v
            ok = not isinstance(k, bool) and int(k) == k and int(k) >= lo
        except (TypeError, ValueError):
            ok = False
        if not ok:
            raise InvalidParams(f"expected an integer >= {lo}, got {v!r}")
        return int(k)

    return conv


# -- instance builders -------------------------------------------------------


def _mean_separation(params, mode, size=None):
    if size is not None:
        grid = _frac_grid(_positive_int(2)(size))
    else:
        grid = [to_scalar(g, RATIONAL) for g in params.get("grid", [0, Fraction(1, 2), 1])]
    m1 = to_scalar(params.get("m1", Fraction(3, 10)), mode)
    m2 = to_scalar(params.get("m2", Fraction(7, 10)), mode)
    if not m1 < m2:
        raise InvalidParams("mean-separation needs m1 < m2")
    if any(g < 0 or g > 1 for g in grid) or 0 not in grid or 1 not in grid:
        raise InvalidParams("mean-separation grid must lie in [0, 1] and contain 0 and 1")
    space = SampleSpace.from_values(grid)
    P = mean_at_most(space, m1, mode)
    Q = mean_at_least(space, m2, mode)
    return _Instance(P, Q, {"risk": m1 + 1 - m2, "tv": m2 - m1})


def _dirac_vs_uniform(params, mode, size=None):
    n = _positive_int(1)(size if size is not None else params.get("n", 10))
    space = SampleSpace.from_values(_frac_grid(n) if n > 1 else [0])
    P = Generators.diracs(space, mode=mode)
    Q = Generators([Pmf.uniform(space, mode)])
    return _Instance(P, Q, {"risk": one(mode), "tv": zero(mode)})


def _half_split(params, mode, size=None):
    n = _positive_int(1)(size if size is not None else params.get("n", 2))
    left = [Fraction(i, 2 * n) for i in range(n)]
    right = [1 - x for x in reversed(left)]
    space = SampleSpace.from_values(left + right)
    P = Generators.diracs(space, range(n), mode)
    Q = Generators.diracs(space, range(n, 2 * n), mode)
    return _Instance(P, Q, {"risk": zero(mode), "tv": one(mode), "worst_level": zero(mode), "worst_power": one(mode)})


def escaping_mass_generators(N: int, mode: str = RATIONAL) -> tuple[SampleSpace, list[Pmf]]:
    """Truncation at ``N`` of ``(1/2 - 1/n) delta_0 + (1/2 + 1/n) delta_n``, ``n >= 2``."""
    space = SampleSpace.from_values(list(range(N + 1)))
    gens = []
    for n in range(2, N + 1):
        mass = [Fraction(0)] * (N + 1)
        mass[0] = Fraction(1, 2) - Fraction(1, n)
        mass[n] += Fraction(1, 2) + Fraction(1, n)
        gens.append(Pmf(space, mass, mode))
    return space, gens


def _escaping_mass(params, mode, size=None):
    N = _positive_int(2)(size if size is not None else params.get("N", 8))
    space, gens = escaping_mass_generators(N, mode)
    P = Generators(gens, mode)
    Q = Generators([Pmf.dirac(space, 0, mode)])
    tv = to_scalar(Fraction(1, 2) + Fraction(1, N), mode)
    return _Instance(P, Q, {"tv": tv, "risk": 1 - tv})


def _default_centers(n: int, mode: str):
    total = n * (n + 1) // 2
    up = [Fraction(i + 1, total) for i in range(n)]
    return up, list(reversed(up))


def _tv_balls(params, mode, size=None, radius=None):
    if size is not None:
        n = _positive_int(2)(size)
        c1, c2 = _default_centers(n, RATIONAL)
    else:
        n = _positive_int(2)(params.get("n", 3))
        d1, d2 = _default_centers(n, RATIONAL)
        c1 = params.get("c1", d1)
        c2 = params.get("c2", d2)
    space = SampleSpace.labelled(len(c1), "a")
    try:
        p1, p2 = Pmf(space, c1, mode), Pmf(space, c2, mode)
    except Exception as exc:
        raise InvalidParams(f"tv-balls centers: {exc}") from None
    r = to_scalar(radius if radius is not None else params.get("r", Fraction(1, 10)), mode)
    d = tv_distance(p1, p2)
    dist = max(d - 2 * r, zero(mode))
    return _Instance(tv_ball(p1, r, mode), tv_ball(p2, r, mode), {"tv": dist, "risk": 1 - dist})


def _symmetric_null(params, mode, size=None):
    n = _positive_int(1)(size if size is not None else params.get("n", 2))
    vals = list(range(-n, n + 1))
    space = SampleSpace.from_values(vals)
    pairing = [(n - k, n + k) for k in range(1, n + 1)]
    P = symmetric_null(space, pairing, mode)
    alt = _param(params, "alternative", len(vals) - 1, _positive_int(0))
    if alt >= len(vals):
        raise InvalidParams("alternative atom index out of range")
    Q = Generators([Pmf.dirac(space, alt, mode)])
    return _Instance(P, Q, {})


EXAMPLES: dict[str, Callable] = {
    "mean-separation": _mean_separation,
    "dirac-vs-uniform": _dirac_vs_uniform,
    "half-split": _half_split,
    "escaping-mass": _escaping_mass,
    "tv-balls": _tv_balls,
    "symmetric-null": _symmetric_null,
}

_QUANTITY = {
    "mean-separation": "risk",
    "dirac-vs-uniform": "risk",
    "half-split": "risk",
    "escaping-mass": "tv",
    "tv-balls": "risk",
    "symmetric-null": "risk",
}


def _record(step, inst: _Instance, mode: str) -> StepRecord:
    rep = minimax_risk(inst.P, inst.Q)
    rec = StepRecord(
        step=step,
        risk=rep.risk,
        tv=rep.tv,
        gap=rep.duality_gap,
        optimal_test=rep.optimal_test.values,
        closest_pair=(rep.closest_pair[0].values, rep.closest_pair[1].values),
        worst_level=rep.worst_level,
        worst_power=rep.worst_power,
        expected=dict(inst.expected),
    )
    checks = [eq(rep.risk + rep.tv, one(mode), GAP_TOL)]
    for key, want in inst.expected.items():
        checks.append(eq(getattr(rec, key), want, GAP_TOL))
    rec.ok = all(checks)
    return rec


def _trend(values: Sequence) -> str:
    if len(values) < 2:
        return "single"
    diffs = [b - a for a, b in zip(values, values[1:])]
    tol = 0 if all(isinstance(v, Fraction) for v in values) else GAP_TOL
    if all(abs(d) <= tol for d in diffs):
        return "constant"
    if all(d < -tol for d in diffs):
        return "decreasing"
    if all(d > tol for d in diffs):
        return "increasing"
    if all(d <= tol for d in diffs):
        return "nonincreasing"
    if all(d >= -tol for d in diffs):
        return "nondecreasing"
    return "mixed"


def _richardson(records: Sequence[StepRecord], key: str):
    """Extrapolate ``a + b / N`` through the last two records."""
    if len(records) < 2:
        return getattr(records[-1], key)
    r1, r2 = records[-2], records[-1]
    n1, n2 = r1.step, r2.step
    return (n2 * getattr(r2, key) - n1 * getattr(r1, key)) / (n2 - n1)


def _finish(name, params, records, mode, notes=None) -> ExperimentReport:
    quantity = _QUANTITY[name]
    values = [getattr(r, quantity) for r in records]
    expected_limit = None
    if name == "escaping-mass":
        limit = _richardson(records, "tv")
        expected_limit = to_scalar(Fraction(1, 2), mode)
        limit_ok = abs(limit - expected_limit) <= Fraction(1, 50)
        notes = (notes or []) + [
            "finite truncations only; the limiting infimum 1/2 is not attained at any N",
            "limit extrapolated from the last two steps assuming tv = a + b/N",
        ]
    else:
        limit = values[-1]
        if records[-1].expected.get(quantity) is not None and name != "tv-balls":
            expected_limit = records[-1].expected[quantity]
        limit_ok = True
    if name == "symmetric-null":
        notes = (notes or []) + ["no closed form; only the duality invariant is checked"]
    passed = limit_ok and all(r.ok for r in records)
    if name == "tv-balls":
        passed = passed and _trend(values) in ("increasing", "nondecreasing", "constant", "single")
    return ExperimentReport(
        name=name,
        parameters=dict(params),
        records=records,
        quantity=quantity,
        limit_estimate=limit,
        expected_limit=expected_limit,
        passed=passed,
        trend=_trend(values),
        notes=notes or [],
    )


def run_example(name: str, params: Mapping | None = None) -> ExperimentReport:
    """Build and solve one named example.

    ``params`` may carry ``mode`` (``"rational"`` default) plus the
    example's own keys: ``grid``/``m1``/``m2`` (mean-separation), ``n``
    (dirac-vs-uniform, half-split, symmetric-null, tv-balls), ``N``
    (escaping-mass), ``c1``/``c2``/``r``/``radii`` (tv-balls).
    """
    if name not in EXAMPLES:
        raise UnknownExample(f"unknown example {name!r}; choose from {sorted(EXAMPLES)}")
    params = dict(params or {})
    mode = check_mode(params.get("mode", RATIONAL))
    build = EXAMPLES[name]
    notes: list[str] = []
    if name == "escaping-mass":
        N = _positive_int(2)(params.get("N", 8))
        steps = [N // 2, N] if N // 2 >= 2 else [N]
        records = [_record(s, build(params, mode, size=s), mode) for s in steps]
    elif name == "tv-balls" and "radii" in params:
        radii = [to_scalar(r, mode) for r in params["radii"]]
        if sorted(radii) != radii:
            raise InvalidParams("radii must be sorted")
        records = [_record(r, _tv_balls(params, mode, radius=r), mode) for r in radii]
    else:
        inst = build(params, mode)
        records = [_record(None, inst, mode)]
        if name == "mean-separation":
            ok = _mean_certificate(inst, mode)
            records[0].ok = records[0].ok and ok
            notes.append(f"identity test with Bernoulli pair certificate valid: {ok}")
    return _finish(name, params, records, mode, notes)


def _mean_certificate(inst: _Instance, mode: str) -> bool:
    space = inst.P.space
    phi = TestFn(space, space.embedding(mode), mode)
    m1 = inst.P.constraints[0].rhs
    m2 = inst.Q.constraints[0].rhs
    verdict = check_saddle_certificate(
        phi, Pmf.bernoulli(space, m1, mode), Pmf.bernoulli(space, m2, mode), inst.P, inst.Q
    )
    return verdict.valid


def refinement_sweep(name: str, sizes: Sequence[int], params: Mapping | None = None) -> ExperimentReport:
    """Run ``name`` at each size (grid points, atoms or truncation level)."""
    if name not in EXAMPLES:
        raise UnknownExample(f"unknown example {name!r}; choose from {sorted(EXAMPLES)}")
    if not sizes:
        raise InvalidParams("sweep needs at least one size")
    params = dict(params or {})
    mode = check_mode(params.get("mode", RATIONAL))
    build = EXAMPLES[name]
    records = [_record(s, build(params, mode, size=s), mode) for s in sizes]
    return _finish(name, {**params, "sizes": list(sizes)}, records, mode)
