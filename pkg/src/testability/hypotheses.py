"""Hypothesis classes on a finite sample space.

A class is either a finite family of generator pmfs (its hull is the set of
mixtures) or a polytope cut out of the probability simplex by linear
constraints, possibly over extra auxiliary variables.  Both kinds know how
to write their membership constraints and the dual of their support
function into an :class:`~testability.lp.LpBuilder`, which is how the
minimax, closest-pair and e-variable programs are assembled.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import lp
from .errors import (
    DimensionMismatch,
    EmptyHypothesis,
    InputError,
    InvalidGenerator,
    LpInfeasible,
    LpUnbounded,
)
from .measures import Pmf, SampleSpace, expectation
from .scalar import FEAS_TOL, FLOAT, RATIONAL, Scalar, check_mode, leq, one, to_scalar, to_vector, zero

RELATIONS = ("<=", "=", ">=")


@dataclass(frozen=True)
class LinearConstraint:
    """``coefficients @ (mu, aux) rel rhs``."""

    coefficients: tuple
    relation: str
    rhs: Scalar

    def __post_init__(self):
        rel = "=" if self.relation == "==" else self.relation
        if rel not in RELATIONS:
            raise InputError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "relation", rel)
        object.__setattr__(self, "coefficients", tuple(self.coefficients))

    def astype(self, mode: str) -> "LinearConstraint":
        return LinearConstraint(to_vector(self.coefficients, mode), self.relation, to_scalar(self.rhs, mode))

    def holds(self, point: Sequence, tol: float = FEAS_TOL) -> bool:
        z = Fraction(0) if isinstance(self.rhs, Fraction) else 0.0
        lhs = sum((a * x for a, x in zip(self.coefficients, point)), z)
        if self.relation == "<=":
            return leq(lhs, self.rhs, tol)
        if self.relation == ">=":
            return leq(self.rhs, lhs, tol)
        return leq(lhs, self.rhs, tol) and leq(self.rhs, lhs, tol)


@dataclass(frozen=True)
class SupportQuery:
    value: Scalar
    maximizer: Pmf


class HypothesisSet:
    """Base class; use :class:`Generators` or :class:`Polytope`."""

    space: SampleSpace
    mode: str

    def astype(self, mode: str) -> "HypothesisSet":
        raise NotImplementedError

    def validate(self) -> None:
        raise NotImplementedError

    def add_member(self, b: lp.LpBuilder) -> list[dict]:
        """Add variables constraining a hull member; return its atom masses.

        Each returned entry is a sparse linear expression ``{var: coef}``
        over builder variables giving the mass of one atom.
        """
        raise NotImplementedError

    def add_support_bound(self, b: lp.LpBuilder, f: Sequence[tuple], bound: tuple) -> None:
        """Constrain ``sup_{mu in hull} sum_i f_i mu_i <= bound``.

        ``f`` holds one affine expression ``(coeffs, const)`` per atom and
        ``bound`` is another affine expression, all over builder variables.
        """
        raise NotImplementedError

    def support_value(self, f: Sequence) -> SupportQuery:
        raise NotImplementedError

    def contains(self, mu: Pmf) -> bool:
        raise NotImplementedError

    def _check_dim(self, v):
        if len(v) != len(self.space):
            raise DimensionMismatch(f"vector of length {len(v)} on a {len(self.space)}-atom space")


def _affine_sub(b: lp.LpBuilder, pieces: Iterable[tuple], rel: str):
    """Add ``sum(coef * expr) rel 0`` where pieces are ``(coef, (coeffs, const))``."""
    coeffs: dict = {}
    const = zero(b.mode)
    for w, (e, c) in pieces:
        if not w:
            continue
        for j, v in e.items():
            coeffs[j] = coeffs.get(j, zero(b.mode)) + w * v
        const += w * c
    return b.add_row(coeffs, rel, -const)


def _clean_pmf(space: SampleSpace, vals: Sequence, mode: str) -> Pmf:
    if mode == FLOAT:
        vals = [max(float(v), 0.0) for v in vals]
        total = sum(vals)
        vals = [v / total for v in vals]
    return Pmf(space, vals, mode)


def _eval(expr: dict, x: Sequence, mode: str) -> Scalar:
    s = zero(mode)
    for j, v in expr.items():
        s += v * x[j]
    return s


class Generators(HypothesisSet):
    """Hull of a finite, nonempty list of pmfs."""

    def __init__(self, pmfs: Sequence[Pmf], mode: str | None = None):
        pmfs = list(pmfs)
        if not pmfs:
            raise EmptyHypothesis("generator family is empty")
        space = pmfs[0].space
        if any(p.space != space for p in pmfs):
            raise InvalidGenerator("generators live on different sample spaces")
        if mode is None:
            mode = FLOAT if any(p.mode == FLOAT for p in pmfs) else RATIONAL
        self.space = space
        self.mode = check_mode(mode)
        self.pmfs = tuple(p.astype(self.mode) for p in pmfs)

    @classmethod
    def from_rows(cls, space: SampleSpace, rows: Sequence[Sequence], mode: str = RATIONAL) -> "Generators":
        return cls([Pmf(space, r, mode) for r in rows], mode)

    @classmethod
    def diracs(cls, space: SampleSpace, atoms: Iterable | None = None, mode: str = RATIONAL) -> "Generators":
        atoms = range(len(space)) if atoms is None else atoms
        return cls([Pmf.dirac(space, a, mode) for a in atoms], mode)

    def __len__(self):
        return len(self.pmfs)

    def __repr__(self):
        return f"Generators({len(self.pmfs)} pmfs on {len(self.space)} atoms, mode={self.mode!r})"

    def astype(self, mode: str) -> "Generators":
        return self if mode == self.mode else Generators(self.pmfs, mode)

    def validate(self) -> None:
        for k, p in enumerate(self.pmfs):
            if not isinstance(p, Pmf):
                raise InvalidGenerator(f"generator {k} is not a pmf")

    def add_member(self, b: lp.LpBuilder) -> list[dict]:
        lam = b.add_vars(len(self.pmfs))
        b.add_row({j: 1 for j in lam}, "=", 1)
        exprs = []
        for i in range(len(self.space)):
            exprs.append({j: p[i] for j, p in zip(lam, self.pmfs) if p[i]})
        return exprs

    def add_support_bound(self, b, f, bound) -> None:
        o = one(b.mode)
        for p in self.pmfs:
            pieces = [(p[i], f[i]) for i in range(len(self.space))]
            pieces.append((-o, bound))
            _affine_sub(b, pieces, "<=")

    def support_value(self, f: Sequence) -> SupportQuery:
        self._check_dim(f)
        best = None
        best_k = 0
        for k, p in enumerate(self.pmfs):
            v = expectation(p, f)
            if best is None or v > best:
                best, best_k = v, k
        return SupportQuery(best, self.pmfs[best_k])

    def contains(self, mu: Pmf) -> bool:
        self._check_dim(mu)
        mode = FLOAT if FLOAT in (self.mode, mu.mode) else RATIONAL
        H = self.astype(mode)
        mu = mu.astype(mode)
        for p in H.pmfs:
            if p == mu:
                return True
        b = lp.LpBuilder(mode)
        exprs = H.add_member(b)
        for i, e in enumerate(exprs):
            b.add_row(e, "=", mu[i])
        return lp.solve(b.build()).optimal


class Polytope(HypothesisSet):
    """``{mu in simplex : exists aux with constraints(mu, aux)}``.

    The simplex constraints are implicit.  Auxiliary variables are free.
    """

    def __init__(
        self,
        space: SampleSpace,
        constraints: Sequence[LinearConstraint],
        aux_count: int = 0,
        mode: str = RATIONAL,
    ):
        if aux_count < 0:
            raise InputError("aux_count must be nonnegative")
        self.space = space
        self.mode = check_mode(mode)
        self.aux_count = int(aux_count)
        width = len(space) + self.aux_count
        cons = []
        for k, c in enumerate(constraints):
            if len(c.coefficients) != width:
                raise DimensionMismatch(
                    f"constraint {k} has {len(c.coefficients)} coefficients, expected {width}"
                )
            cons.append(c.astype(self.mode))
        self.constraints = tuple(cons)

    def __repr__(self):
        return (
            f"Polytope({len(self.constraints)} constraints, {self.aux_count} aux, "
            f"{len(self.space)} atoms, mode={self.mode!r})"
        )

    def astype(self, mode: str) -> "Polytope":
        if mode == self.mode:
            return self
        return Polytope(self.space, self.constraints, self.aux_count, mode)

    def _add_vars(self, b: lp.LpBuilder):
        n = len(self.space)
        mu = b.add_vars(n)
        aux = b.add_vars(self.aux_count, lower=None)
        b.add_row({j: 1 for j in mu}, "=", 1)
        cols = list(mu) + list(aux)
        for c in self.constraints:
            b.add_row({cols[k]: a for k, a in enumerate(c.coefficients) if a}, c.relation, c.rhs)
        return mu

    def add_member(self, b: lp.LpBuilder) -> list[dict]:
        return [{j: 1} for j in self._add_vars(b)]

    def add_support_bound(self, b, f, bound) -> None:
        # dual of  max f.mu  s.t. constraints, sum(mu) = 1, mu >= 0, aux free
        n = len(self.space)
        o = one(b.mode)
        ys = []
        for c in self.constraints:
            if c.relation == "<=":
                ys.append(b.add_var(lower=0))
            elif c.relation == ">=":
                ys.append(b.add_var(lower=None, upper=0))
            else:
                ys.append(b.add_var(lower=None))
        z = b.add_var(lower=None)
        for i in range(n):
            coeffs = {y: c.coefficients[i] for y, c in zip(ys, self.constraints) if c.coefficients[i]}
            coeffs[z] = o
            _affine_sub(b, [(o, (coeffs, zero(b.mode))), (-o, f[i])], ">=")
        for k in range(self.aux_count):
            coeffs = {y: c.coefficients[n + k] for y, c in zip(ys, self.constraints) if c.coefficients[n + k]}
            if coeffs:
                b.add_row(coeffs, "=", 0)
        obj = {y: c.rhs for y, c in zip(ys, self.constraints) if c.rhs}
        obj[z] = o
        _affine_sub(b, [(o, (obj, zero(b.mode))), (-o, bound)], "<=")

    def validate(self) -> None:
        b = lp.LpBuilder(self.mode)
        self._add_vars(b)
        sol = lp.solve(b.build())
        if not sol.optimal:
            raise EmptyHypothesis("polytope hypothesis contains no probability vector")

    def support_value(self, f: Sequence) -> SupportQuery:
        self._check_dim(f)
        mode = self.mode
        f = to_vector(f, mode)
        b = lp.LpBuilder(mode)
        mu = self._add_vars(b)
        b.set_cost({j: -fi for j, fi in zip(mu, f) if fi})
        sol = lp.solve(b.build())
        if sol.status == lp.INFEASIBLE:
            raise LpInfeasible("support query on an empty polytope")
        if sol.status == lp.UNBOUNDED:  # pragma: no cover - simplex is bounded
            raise LpUnbounded("support query unbounded")
        m = _clean_pmf(self.space, [sol.primal[j] for j in mu], mode)
        return SupportQuery(expectation(m, f), m)

    def contains(self, mu: Pmf, tol: float = FEAS_TOL) -> bool:
        self._check_dim(mu)
        mode = FLOAT if FLOAT in (self.mode, mu.mode) else RATIONAL
        H = self.astype(mode)
        x = mu.astype(mode).values
        if H.aux_count == 0:
            return all(c.holds(x, tol) for c in H.constraints)
        n = len(H.space)
        b = lp.LpBuilder(mode)
        aux = b.add_vars(H.aux_count, lower=None)
        for c in H.constraints:
            fixed = sum((a * xi for a, xi in zip(c.coefficients[:n], x)), zero(mode))
            coeffs = {aux[k]: a for k, a in enumerate(c.coefficients[n:]) if a}
            if not coeffs:
                if not c.holds(list(x) + [zero(mode)] * H.aux_count, tol):
                    return False
                continue
            b.add_row(coeffs, c.relation, c.rhs - fixed)
        return lp.solve(b.build()).optimal


def validate(H: HypothesisSet) -> None:
    """Raise :class:`EmptyHypothesis` / :class:`InvalidGenerator` if ``H`` is unusable."""
    H.validate()


def support_value(H: HypothesisSet, f: Sequence) -> SupportQuery:
    """``sup_{mu in hull(H)} E_mu[f]`` with a maximizing pmf."""
    if H.mode == RATIONAL and any(isinstance(x, float) for x in f):
        H = H.astype(FLOAT)
    return H.support_value(f)


def contains(H: HypothesisSet, mu: Pmf) -> bool:
    """Is ``mu`` in the hull of ``H``?"""
    return H.contains(mu)


def _embedding(space: SampleSpace, mode: str) -> tuple:
    if space.values is None:
        raise InputError("mean constraints need numeric embedding values on the sample space")
    return space.embedding(mode)


def mean_at_most(space: SampleSpace, m, mode: str = RATIONAL) -> Polytope:
    """All pmfs whose mean (under the space embedding) is at most ``m``."""
    vals = _embedding(space, mode)
    return Polytope(space, [LinearConstraint(vals, "<=", to_scalar(m, mode))], 0, mode)


def mean_at_least(space: SampleSpace, m, mode: str = RATIONAL) -> Polytope:
    vals = _embedding(space, mode)
    return Polytope(space, [LinearConstraint(vals, ">=", to_scalar(m, mode))], 0, mode)


def symmetric_null(space: SampleSpace, pairing: Sequence[Sequence[int]], mode: str = RATIONAL) -> Polytope:
    """Pmfs giving equal mass to each paired atom; unpaired atoms are free."""
    n = len(space)
    seen: set[int] = set()
    cons = []
    for pair in pairing:
        if len(pair) != 2:
            raise InputError(f"pairing entry {pair!r} is not a pair")
        i, j = (int(x) for x in pair)
        for k in (i, j):
            if not 0 <= k < n:
                raise InputError(f"pairing index {k} out of range for {n} atoms")
            if k in seen:
                raise InputError(f"atom {k} paired twice")
            seen.add(k)
        if i == j:
            raise InputError(f"atom {i} paired with itself")
        coeffs = [0] * n
        coeffs[i], coeffs[j] = 1, -1
        cons.append(LinearConstraint(to_vector(coeffs, mode), "=", zero(mode)))
    return Polytope(space, cons, 0, mode)


def tv_ball(center: Pmf, radius, mode: str | None = None) -> Polytope:
    """Pmfs within total variation ``radius`` of ``center`` (lifted by ``|mu - c|``)."""
    mode = mode or center.mode
    r = to_scalar(radius, mode)
    if r < 0 or r > 1:
        raise InputError(f"tv radius {radius} outside [0, 1]")
    c = center.astype(mode)
    n = len(c)
    cons = []
    for i in range(n):
        lo = [0] * (2 * n)
        lo[n + i], lo[i] = 1, -1  # u_i - mu_i >= -c_i
        cons.append(LinearConstraint(to_vector(lo, mode), ">=", -c[i]))
        hi = [0] * (2 * n)
        hi[n + i], hi[i] = 1, 1  # u_i + mu_i >= c_i
        cons.append(LinearConstraint(to_vector(hi, mode), ">=", c[i]))
    total = [0] * n + [1] * n
    cons.append(LinearConstraint(to_vector(total, mode), "<=", 2 * r))
    return Polytope(c.space, cons, n, mode)
