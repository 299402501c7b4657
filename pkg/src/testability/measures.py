"""Finite sample spaces, pmfs, signed measures and tests."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, InputError, ValidationError
from .scalar import (
    FLOAT,
    PMF_TOL,
    RATIONAL,
    Scalar,
    check_mode,
    join_modes,
    one,
    to_scalar,
    to_vector,
    zero,
)


@dataclass(frozen=True)
class SampleSpace:
    """Ordered finite set of atom labels, optionally embedded in the reals."""

    atoms: tuple[str, ...]
    values: tuple | None = None

    def __post_init__(self):
        atoms = tuple(str(a) for a in self.atoms)
        if not atoms:
            raise InputError("sample space needs at least one atom")
        if len(set(atoms)) != len(atoms):
            raise InputError("atom labels must be unique")
        object.__setattr__(self, "atoms", atoms)
        if self.values is not None:
            values = tuple(self.values)
            if len(values) != len(atoms):
                raise DimensionMismatch(
                    f"{len(values)} embedding values for {len(atoms)} atoms"
                )
            object.__setattr__(self, "values", values)

    @classmethod
    def from_values(cls, values: Sequence) -> "SampleSpace":
        """Atoms labelled by their own values, e.g. a grid on [0, 1]."""
        return cls(tuple(str(v) for v in values), tuple(values))

    @classmethod
    def labelled(cls, n: int, prefix: str = "w") -> "SampleSpace":
        return cls(tuple(f"{prefix}{i}" for i in range(n)))

    def __len__(self) -> int:
        return len(self.atoms)

    @property
    def size(self) -> int:
        return len(self.atoms)

    def index(self, atom: str) -> int:
        return self.atoms.index(str(atom))

    def embedding(self, mode: str) -> tuple:
        if self.values is None:
            raise InputError("sample space has no numeric embedding values")
        return to_vector(self.values, mode)


class _Vector:
    """Shared plumbing for the atom-indexed vector types."""

    __slots__ = ("space", "_v", "mode")

    def __init__(self, space: SampleSpace, entries: Iterable, mode: str = RATIONAL):
        check_mode(mode)
        v = to_vector(entries, mode)
        if len(v) != len(space):
            raise DimensionMismatch(
                f"{type(self).__name__} has {len(v)} entries, space has {len(space)} atoms"
            )
        self.space = space
        self.mode = mode
        self._v = v
        self._check()

    def _check(self):
        pass

    def __iter__(self):
        return iter(self._v)

    def __len__(self):
        return len(self._v)

    def __getitem__(self, i):
        return self._v[i]

    @property
    def values(self) -> tuple:
        return self._v

    def astype(self, mode: str):
        if mode == self.mode:
            return self
        return type(self)(self.space, self._v, mode)

    def __eq__(self, other):
        return (
            type(other) is type(self)
            and other.space == self.space
            and other._v == self._v
        )

    def __hash__(self):
        return hash((type(self).__name__, self.space, self._v))

    def __repr__(self):
        body = ", ".join(str(x) for x in self._v)
        return f"{type(self).__name__}([{body}], mode={self.mode!r})"


class SignedMeasure(_Vector):
    __slots__ = ()


class Pmf(_Vector):
    """Probability mass function on a :class:`SampleSpace`.

    Rational mode demands an exact total of one.  Float mode renormalizes
    totals within ``PMF_TOL`` of one and rejects anything further off.
    """

    __slots__ = ()

    def _check(self):
        if any(x < 0 for x in self._v):
            raise ValidationError("pmf has a negative entry")
        total = sum(self._v, zero(self.mode))
        if self.mode == RATIONAL:
            if total != 1:
                raise ValidationError(f"pmf sums to {total}, not 1")
        else:
            if abs(total - 1.0) > PMF_TOL:
                raise ValidationError(f"pmf sums to {total!r}, not 1")
            self._v = tuple(x / total for x in self._v)

    @classmethod
    def dirac(cls, space: SampleSpace, atom: int | str, mode: str = RATIONAL) -> "Pmf":
        i = atom if isinstance(atom, int) else space.index(atom)
        return cls(space, [1 if j == i else 0 for j in range(len(space))], mode)

    @classmethod
    def uniform(cls, space: SampleSpace, mode: str = RATIONAL) -> "Pmf":
        n = len(space)
        w = Fraction(1, n) if mode == RATIONAL else 1.0 / n
        return cls(space, [w] * n, mode)

    @classmethod
    def bernoulli(cls, space: SampleSpace, p, mode: str = RATIONAL) -> "Pmf":
        """Mass ``1 - p`` on the first atom and ``p`` on the last."""
        p = to_scalar(p, mode)
        n = len(space)
        if n < 2:
            raise InputError("bernoulli pmf needs at least two atoms")
        mass = [zero(mode)] * n
        mass[0] = one(mode) - p
        mass[-1] = p
        return cls(space, mass, mode)

    def support(self) -> frozenset[int]:
        return frozenset(i for i, x in enumerate(self._v) if x != 0)


class TestFn(_Vector):
    """A [0, 1]-valued test; entry ``i`` is the rejection probability at atom ``i``."""

    __slots__ = ()
    __test__ = False  # not a pytest class

    def _check(self):
        if any(x < 0 or x > 1 for x in self._v):
            raise ValidationError("test values must lie in [0, 1]")

    @classmethod
    def indicator(cls, space: SampleSpace, atoms: Iterable, mode: str = RATIONAL) -> "TestFn":
        idx = {a if isinstance(a, int) else space.index(a) for a in atoms}
        return cls(space, [1 if i in idx else 0 for i in range(len(space))], mode)

    @classmethod
    def constant(cls, space: SampleSpace, c, mode: str = RATIONAL) -> "TestFn":
        return cls(space, [c] * len(space), mode)

    def complement(self) -> "TestFn":
        o = one(self.mode)
        return TestFn(self.space, [o - x for x in self._v], self.mode)


def _entries(x, mode: str) -> tuple:
    if isinstance(x, _Vector):
        return x.astype(mode).values
    return to_vector(x, mode)


def _mode_of(*xs) -> str:
    return join_modes(*(x.mode for x in xs if isinstance(x, _Vector)))


def _same_space(items: Sequence) -> SampleSpace:
    spaces = {x.space for x in items if isinstance(x, _Vector)}
    if len(spaces) > 1:
        raise DimensionMismatch("operands live on different sample spaces")
    return next(iter(spaces)) if spaces else None


def mix(weights: Sequence, pmfs: Sequence[Pmf]) -> Pmf:
    """Convex combination ``sum_k weights[k] * pmfs[k]``."""
    if not pmfs:
        raise InputError("mix needs at least one pmf")
    if len(weights) != len(pmfs):
        raise DimensionMismatch(f"{len(weights)} weights for {len(pmfs)} pmfs")
    space = _same_space(pmfs)
    mode = join_modes(_mode_of(*pmfs), *(FLOAT for w in weights if isinstance(w, float)))
    w = to_vector(weights, mode)
    if any(x < 0 for x in w):
        raise ValidationError("mixture weights must be nonnegative")
    total = sum(w, zero(mode))
    if (mode == RATIONAL and total != 1) or (mode == FLOAT and abs(total - 1) > PMF_TOL):
        raise ValidationError(f"mixture weights sum to {total}, not 1")
    mass = [zero(mode)] * len(space)
    for wk, p in zip(w, pmfs):
        if wk == 0:
            continue
        for i, x in enumerate(p.astype(mode)):
            mass[i] += wk * x
    return Pmf(space, mass, mode)


def expectation(m, f) -> Scalar:
    """``sum_i m_i f_i`` for a measure and a test or plain vector."""
    mode = _mode_of(m, f)
    if isinstance(m, _Vector) and isinstance(f, _Vector) and m.space != f.space:
        raise DimensionMismatch("measure and function live on different spaces")
    a = _entries(m, mode)
    b = _entries(f, mode)
    if len(a) != len(b):
        raise DimensionMismatch(f"dimension mismatch: {len(a)} vs {len(b)}")
    return sum((x * y for x, y in zip(a, b)), zero(mode))


def _pair(mu: Pmf, nu: Pmf):
    if mu.space != nu.space:
        raise DimensionMismatch("pmfs live on different sample spaces")
    mode = join_modes(mu.mode, nu.mode)
    return mu.astype(mode), nu.astype(mode), mode


def tv_distance(mu: Pmf, nu: Pmf) -> Scalar:
    """Half the L1 distance between two pmfs."""
    mu, nu, mode = _pair(mu, nu)
    s = sum((abs(a - b) for a, b in zip(mu, nu)), zero(mode))
    return s / 2


def tv_witness_test(mu: Pmf, nu: Pmf) -> TestFn:
    """Indicator of the atoms where ``mu`` outweighs ``nu`` (ties get 0).

    Its expectation gap ``E_mu - E_nu`` equals :func:`tv_distance`.
    """
    mu, nu, mode = _pair(mu, nu)
    return TestFn(mu.space, [1 if a > b else 0 for a, b in zip(mu, nu)], mode)


def risk_of_test(phi: TestFn, levels: Sequence[Pmf], powers: Sequence[Pmf]) -> Scalar:
    """Worst type-I error over ``levels`` plus worst type-II error over ``powers``."""
    if not levels or not powers:
        raise InputError("risk_of_test needs nonempty null and alternative families")
    _same_space([phi, *levels, *powers])
    mode = _mode_of(phi, *levels, *powers)
    phi = phi.astype(mode)
    comp = phi.complement()
    type1 = max(expectation(p, phi) for p in levels)
    type2 = max(expectation(q, comp) for q in powers)
    return type1 + type2
