"""Dense two-phase simplex over exact rationals or floats.

Problems are stated in general form::

    minimize    c @ x
    subject to  A_eq @ x == b_eq
                A_ub @ x <= b_ub
                lower <= x <= upper      (None = unbounded side)

:func:`solve` converts to standard form, runs phase one on artificial
variables and phase two on the real cost.  Rational mode uses Bland's
rule throughout.  Float mode prices by the most negative reduced cost with
a two-pass (Harris) ratio test and switches to Bland's rule after
``STALL_PIVOTS`` pivots without objective progress.
Row multipliers come back in ``LpSolution.dual`` (equality rows first,
then inequality rows; inequality multipliers are <= 0).  :func:`check_solution`
audits any primal/dual pair against the KKT conditions without touching
solver internals.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import _kernel
from .errors import InputError, MaxIterationsExceeded, NumericBreakdown
from .scalar import FEAS_TOL, FLOAT, PIVOT_TOL, RATIONAL, Scalar, check_mode, to_scalar, zero

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

# float mode: degenerate pivots tolerated before switching to Bland's rule
STALL_PIVOTS = 20


@dataclass(frozen=True)
class LpProblem:
    c: tuple
    A_eq: tuple = ()
    b_eq: tuple = ()
    A_ub: tuple = ()
    b_ub: tuple = ()
    lower: tuple | None = None
    upper: tuple | None = None
    mode: str = RATIONAL

    def __post_init__(self):
        mode = check_mode(self.mode)
        conv = lambda v: tuple(to_scalar(x, mode) for x in v)  # noqa: E731
        n = len(self.c)
        object.__setattr__(self, "c", conv(self.c))
        for a_name, b_name in (("A_eq", "b_eq"), ("A_ub", "b_ub")):
            A = tuple(conv(row) for row in getattr(self, a_name))
            b = conv(getattr(self, b_name))
            if len(A) != len(b):
                raise InputError(f"{a_name} has {len(A)} rows but {b_name} has {len(b)}")
            if any(len(row) != n for row in A):
                raise InputError(f"{a_name} rows must have {n} columns")
            object.__setattr__(self, a_name, A)
            object.__setattr__(self, b_name, b)
        lower = (0,) * n if self.lower is None else self.lower
        upper = (None,) * n if self.upper is None else self.upper
        if len(lower) != n or len(upper) != n:
            raise InputError("bounds must have one entry per variable")
        lower = tuple(None if x is None else to_scalar(x, mode) for x in lower)
        upper = tuple(None if x is None else to_scalar(x, mode) for x in upper)
        for lo, hi in zip(lower, upper):
            if lo is not None and hi is not None and lo > hi:
                raise InputError(f"empty bound interval [{lo}, {hi}]")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def n_vars(self) -> int:
        return len(self.c)

    @property
    def n_rows(self) -> int:
        return len(self.A_eq) + len(self.A_ub)


@dataclass
class LpSolution:
    status: str
    primal: tuple | None = None
    dual: tuple | None = None
    objective: Scalar | None = None
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


@dataclass
class Residuals:
    primal_feasibility: Scalar
    dual_feasibility: Scalar
    complementary_slackness: Scalar
    duality_gap: Scalar
    primal_objective: Scalar
    dual_objective: Scalar

    def worst(self) -> Scalar:
        return max(
            self.primal_feasibility,
            self.dual_feasibility,
            self.complementary_slackness,
            self.duality_gap,
        )

    def ok(self, tol: float = FEAS_TOL) -> bool:
        w = self.worst()
        return w == 0 if not isinstance(w, float) else w <= tol


def _dot(a, b, z):
    s = z
    for x, y in zip(a, b):
        if x and y:
            s += x * y
    return s


def check_solution(p: LpProblem, primal: Sequence, dual: Sequence) -> Residuals:
    """KKT residuals of a claimed optimal ``(primal, dual)`` pair for ``p``.

    Reduced costs are rebuilt from the row multipliers, so a third-party
    solution can be audited as long as it follows the sign convention
    (inequality multipliers <= 0 for a minimization).
    """
    mode = p.mode
    z = zero(mode)
    x = tuple(to_scalar(v, mode) for v in primal)
    y = tuple(to_scalar(v, mode) for v in dual)
    m_eq = len(p.A_eq)
    if len(x) != p.n_vars or len(y) != p.n_rows:
        raise InputError("solution dimensions do not match the problem")
    y_eq, y_ub = y[:m_eq], y[m_eq:]

    pf = z
    for row, b in zip(p.A_eq, p.b_eq):
        pf = max(pf, abs(_dot(row, x, z) - b))
    slacks = []
    for row, b in zip(p.A_ub, p.b_ub):
        s = b - _dot(row, x, z)
        slacks.append(s)
        pf = max(pf, -s)
    for xj, lo, hi in zip(x, p.lower, p.upper):
        if lo is not None:
            pf = max(pf, lo - xj)
        if hi is not None:
            pf = max(pf, xj - hi)

    df = max((v for v in y_ub), default=z)
    df = max(df, z)
    cs = max((abs(v * s) for v, s in zip(y_ub, slacks)), default=z)
    dual_obj = _dot(p.b_eq, y_eq, z) + _dot(p.b_ub, y_ub, z)
    for j in range(p.n_vars):
        r = p.c[j]
        for i, row in enumerate(p.A_eq):
            if row[j]:
                r -= row[j] * y_eq[i]
        for i, row in enumerate(p.A_ub):
            if row[j]:
                r -= row[j] * y_ub[i]
        z_lo = max(r, z)
        z_hi = max(-r, z)
        lo, hi = p.lower[j], p.upper[j]
        if lo is None:
            df = max(df, z_lo)
        else:
            cs = max(cs, abs(z_lo * (x[j] - lo)))
            dual_obj += lo * z_lo
        if hi is None:
            df = max(df, z_hi)
        else:
            cs = max(cs, abs(z_hi * (hi - x[j])))
            dual_obj -= hi * z_hi
    primal_obj = _dot(p.c, x, z)
    return Residuals(pf, df, cs, abs(primal_obj - dual_obj), primal_obj, dual_obj)


class _StandardForm:
    """``min c'x' s.t. A'x' = b', x' >= 0`` with ``b' >= 0`` and a starting basis."""

    def __init__(self, p: LpProblem):
        mode = p.mode
        z = zero(mode)
        self.mode = mode
        cols = []  # (user variable, sign)
        shift = []
        bound_rows = []
        for j, (lo, hi) in enumerate(zip(p.lower, p.upper)):
            if lo is not None:
                cols.append((j, 1))
                shift.append(lo)
                if hi is not None:
                    bound_rows.append((len(cols) - 1, hi - lo))
            elif hi is not None:
                cols.append((j, -1))
                shift.append(hi)
            else:
                cols.append((j, 1))
                cols.append((j, -1))
                shift.append(z)
        self.cols = cols
        self.shift = shift
        n_struct = len(cols)

        rows = []  # (coeffs over structural columns, rhs, is_ub)
        for A, b, is_ub in ((p.A_eq, p.b_eq, False), (p.A_ub, p.b_ub, True)):
            for arow, bi in zip(A, b):
                coeffs = [arow[j] * s if arow[j] else z for j, s in cols]
                rhs = bi - _dot(arow, shift, z)
                rows.append((coeffs, rhs, is_ub))
        for k, width in bound_rows:
            coeffs = [z] * n_struct
            coeffs[k] = coeffs[k] + 1
            rows.append((coeffs, width, True))

        m = len(rows)
        n_slack = sum(1 for r in rows if r[2])
        self.m = m
        self.n_struct = n_struct
        self.n_enter = n_struct + n_slack
        self.n_user_rows = p.n_rows

        sign = []
        init_col = []
        body = []
        art = 0
        slack = 0
        n_art = sum(1 for coeffs, rhs, is_ub in rows if not (is_ub and rhs >= 0))
        width = n_struct + n_slack + n_art
        for coeffs, rhs, is_ub in rows:
            line = list(coeffs) + [z] * (n_slack + n_art) + [rhs]
            if is_ub:
                line[n_struct + slack] = z + 1
                slack_col = n_struct + slack
                slack += 1
            s = 1
            if rhs < 0:
                line = [-v if v else v for v in line]
                s = -1
            if is_ub and s == 1:
                init_col.append(slack_col)
            else:
                col = self.n_enter + art
                line[col] = z + 1
                init_col.append(col)
                art += 1
            sign.append(s)
            body.append(line)
        self.sign = sign
        self.init_col = init_col
        self.n_art = n_art
        self.width = width
        self.rows = body
        self.cost = [p.c[j] * s if p.c[j] else z for j, s in cols]
        self.const = _dot(p.c, shift, z)


class _Simplex:
    def __init__(self, sf: _StandardForm, kernel=None):
        self.sf = sf
        self.exact = sf.mode == RATIONAL
        k = kernel or _kernel
        m, w = sf.m, sf.width
        z = zero(sf.mode)
        self.rhs = w
        self.p2 = m
        self.p1 = m + 1
        obj2 = list(sf.cost) + [z] * (w - sf.n_struct) + [z]
        obj1 = [z] * (w + 1)
        for i, line in enumerate(sf.rows):
            if sf.init_col[i] >= sf.n_enter:
                for j in range(sf.n_enter):
                    if line[j]:
                        obj1[j] -= line[j]
                obj1[w] -= line[w]
        rows = [list(r) for r in sf.rows] + [obj2, obj1]
        if self.exact:
            self.T = rows
            self._entering = lambda row, n: k.q_entering(row, n)
            self._leaving = lambda col: k.q_leaving(self.T, col, self.rhs, self.basis, m)
            self._pivot = lambda r, c: k.q_pivot(self.T, r, c)
        else:
            self.T = np.ascontiguousarray(np.array(rows, dtype=np.float64))
            self._pivot = self._float_pivot
            self._kernel = k
        self.basis = list(sf.init_col)
        self.iterations = 0
        self.cap = 50 * (m + w)

    def _float_pivot(self, r, c):
        if abs(self.T[r, c]) < PIVOT_TOL:
            raise NumericBreakdown(f"pivot element {self.T[r, c]!r} below {PIVOT_TOL}")
        self._kernel.f_pivot(self.T, r, c)

    def _row(self, i):
        return self.T[i]

    def _step(self, r, c):
        self.iterations += 1
        if self.iterations > self.cap:
            raise MaxIterationsExceeded(f"simplex exceeded {self.cap} pivots")
        self._pivot(r, c)
        self.basis[r] = c

    def _run(self, obj: int) -> bool:
        """Pivot until optimal (True) or an unbounded ray is found (False)."""
        if not self.exact:
            return self._run_float(obj)
        n = self.sf.n_enter
        while True:
            c = self._entering(self._row(obj), n)
            if c < 0:
                return True
            r = self._leaving(c)
            if r < 0:
                return False
            self._step(r, c)

    def _run_float(self, obj: int) -> bool:
        # Rounding breaks Bland's guarantee and its pivots can be tiny, so
        # price by most negative reduced cost with a two-pass ratio test and
        # fall back to Bland only while the objective is stalled.
        k, T, n, m = self._kernel, self.T, self.sf.n_enter, self.sf.m
        stalled, last = 0, T[obj, self.rhs]
        while True:
            bland = stalled >= STALL_PIVOTS
            if bland:
                c = k.f_entering(T[obj], n, FEAS_TOL)
            else:
                c = k.f_entering_dantzig(T[obj], n, FEAS_TOL)
            if c < 0:
                return True
            if bland:
                r = k.f_leaving(T, c, self.rhs, self.basis, m, PIVOT_TOL)
            else:
                r = k.f_leaving_harris(T, c, self.rhs, self.basis, m, PIVOT_TOL, FEAS_TOL)
            if r < 0:
                return False
            self._step(r, c)
            v = T[obj, self.rhs]
            if abs(v - last) > FEAS_TOL:
                stalled, last = 0, v
            else:
                stalled += 1

    def _value(self, i, j):
        return self.T[i][j] if self.exact else float(self.T[i, j])

    def solve(self) -> LpSolution:
        sf = self.sf
        if sf.n_art:
            self._run(self.p1)
            infeas = -self._value(self.p1, self.rhs)
            if (infeas > 0) if self.exact else (infeas > FEAS_TOL):
                return LpSolution(INFEASIBLE, iterations=self.iterations)
            for i in range(sf.m):
                if self.basis[i] >= sf.n_enter:
                    for j in range(sf.n_enter):
                        v = self._value(i, j)
                        if (v != 0) if self.exact else (abs(v) > PIVOT_TOL):
                            self._step(i, j)
                            break
        if not self._run(self.p2):
            return LpSolution(UNBOUNDED, iterations=self.iterations)
        if not self.exact and not np.all(np.isfinite(self.T)):
            raise NumericBreakdown("non-finite tableau entries")
        return self._extract()

    def _extract(self) -> LpSolution:
        sf = self.sf
        z = zero(sf.mode)
        xs = [z] * sf.n_struct
        for i, b in enumerate(self.basis):
            if b < sf.n_struct:
                xs[b] = self._value(i, self.rhs)
        n_user = max((j for j, _ in sf.cols), default=-1) + 1
        x = list(sf.shift)
        for k, (j, s) in enumerate(sf.cols):
            if xs[k]:
                x[j] = x[j] + s * xs[k]
        y = [-self._value(self.p2, sf.init_col[i]) * sf.sign[i] for i in range(sf.n_user_rows)]
        if sf.mode == FLOAT:
            x = [float(v) for v in x]
            y = [float(v) + 0.0 for v in y]
        obj = sf.const + _dot(sf.cost, xs, z)
        assert len(x) == n_user
        return LpSolution(OPTIMAL, tuple(x), tuple(y), obj, self.iterations)


def solve(p: LpProblem, kernel=None) -> LpSolution:
    """Solve ``p``; ``kernel`` optionally overrides the pivot backend module."""
    if p.n_vars == 0:
        return _solve_empty(p)
    sf = _StandardForm(p)
    return _Simplex(sf, kernel).solve()


def _solve_empty(p: LpProblem) -> LpSolution:
    z = zero(p.mode)
    ok = all(b == 0 for b in p.b_eq) and all(b >= 0 for b in p.b_ub)
    if p.mode == FLOAT:
        ok = all(abs(b) <= FEAS_TOL for b in p.b_eq) and all(b >= -FEAS_TOL for b in p.b_ub)
    if not ok:
        return LpSolution(INFEASIBLE)
    return LpSolution(OPTIMAL, (), (z,) * p.n_rows, z)


@dataclass
class RowRef:
    """Where a builder row landed: equality or inequality block, and sign."""

    block: str
    index: int
    sign: int


@dataclass
class LpBuilder:
    """Incremental construction of an :class:`LpProblem` from sparse rows.

    ``">="`` rows are stored negated in the inequality block; :meth:`dual_of`
    undoes the sign so callers read the multiplier of the row they wrote.
    """

    mode: str = RATIONAL
    lower: list = field(default_factory=list)
    upper: list = field(default_factory=list)
    cost: dict = field(default_factory=dict)
    eq_rows: list = field(default_factory=list)
    ub_rows: list = field(default_factory=list)

    @property
    def n_vars(self) -> int:
        return len(self.lower)

    def add_vars(self, count: int, lower=0, upper=None) -> range:
        start = len(self.lower)
        lo = None if lower is None else to_scalar(lower, self.mode)
        hi = None if upper is None else to_scalar(upper, self.mode)
        self.lower.extend([lo] * count)
        self.upper.extend([hi] * count)
        return range(start, start + count)

    def add_var(self, lower=0, upper=None) -> int:
        return self.add_vars(1, lower, upper)[0]

    def add_row(self, coeffs: Mapping[int, object], rel: str, rhs) -> RowRef:
        rhs = to_scalar(rhs, self.mode)
        coeffs = {j: to_scalar(v, self.mode) for j, v in coeffs.items()}
        coeffs = {j: v for j, v in coeffs.items() if v}
        if rel in ("=", "=="):
            self.eq_rows.append((coeffs, rhs))
            return RowRef("eq", len(self.eq_rows) - 1, 1)
        if rel == "<=":
            self.ub_rows.append((coeffs, rhs))
            return RowRef("ub", len(self.ub_rows) - 1, 1)
        if rel == ">=":
            self.ub_rows.append(({j: -v for j, v in coeffs.items()}, -rhs))
            return RowRef("ub", len(self.ub_rows) - 1, -1)
        raise InputError(f"unknown relation {rel!r}")

    def set_cost(self, coeffs: Mapping[int, object]):
        self.cost = {j: to_scalar(v, self.mode) for j, v in coeffs.items()}

    def build(self) -> LpProblem:
        n = self.n_vars
        z = zero(self.mode)

        def dense(coeffs):
            row = [z] * n
            for j, v in coeffs.items():
                row[j] += v
            return row

        return LpProblem(
            c=dense(self.cost),
            A_eq=[dense(c) for c, _ in self.eq_rows],
            b_eq=[b for _, b in self.eq_rows],
            A_ub=[dense(c) for c, _ in self.ub_rows],
            b_ub=[b for _, b in self.ub_rows],
            lower=self.lower,
            upper=self.upper,
            mode=self.mode,
        )

    def dual_of(self, sol: LpSolution, ref: RowRef) -> Scalar:
        offset = 0 if ref.block == "eq" else len(self.eq_rows)
        return sol.dual[offset + ref.index] * ref.sign

