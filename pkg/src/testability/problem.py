"""JSON problem files.

Layout (``schema_version`` 1)::

    {
      "schema_version": 1,
      "space": {"atoms": ["lo", "mid", "hi"], "values": [0, 0.5, 1]},
      "hypotheses": {
        "P": {"mean_at_most": 0.3},
        "Q": {"generators": [[0, 0, 1], ["1/2", 0, "1/2"]]},
        "B": {"tv_ball": {"center": [0.2, 0.3, 0.5], "radius": 0.1}},
        "S": {"symmetric": [[0, 2]]},
        "C": {"constraints": [{"coeffs": [1, -1, 0], "rel": "<=", "rhs": 0}], "aux": 0}
      },
      "null": "P",
      "alternative": "Q",
      "measure": [0.1, 0.2, 0.3]
    }

Numbers may be JSON numbers or ``"p/q"`` strings.  In rational mode JSON
decimals are read as the decimal they spell (``0.3`` is ``3/10``).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import EmptyHypothesis, InputError, ProblemSyntaxError, SchemaError, ValidationError
from .hypotheses import (
    Generators,
    HypothesisSet,
    LinearConstraint,
    Polytope,
    mean_at_least,
    mean_at_most,
    symmetric_null,
    tv_ball,
)
from .measures import Pmf, SampleSpace
from .scalar import RATIONAL, check_mode, to_scalar

SCHEMA_VERSION = 1
_BUILDERS = ("generators", "constraints", "mean_at_most", "mean_at_least", "tv_ball", "symmetric")


@dataclass
class ProblemFile:
    space: SampleSpace
    hypotheses: dict[str, HypothesisSet]
    null: str | None = None
    alternative: str | None = None
    measure: tuple | None = None
    mode: str = RATIONAL
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def P(self) -> HypothesisSet:
        if self.null is None:
            raise SchemaError("problem names no null hypothesis", path="null")
        return self.hypotheses[self.null]

    @property
    def Q(self) -> HypothesisSet:
        if self.alternative is None:
            raise SchemaError("problem names no alternative hypothesis", path="alternative")
        return self.hypotheses[self.alternative]


def _number(x, path: str, mode: str):
    if isinstance(x, bool) or not isinstance(x, (int, float, str)):
        raise SchemaError(f"expected a number or 'p/q' string, got {type(x).__name__}", path)
    if isinstance(x, float) and not math.isfinite(x):
        raise SchemaError("numbers must be finite", path)
    try:
        return to_scalar(x, mode)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad number {x!r}: {exc}", path) from None


def _vector(xs, path: str, mode: str, length: int | None = None) -> list:
    if not isinstance(xs, list):
        raise SchemaError("expected a list of numbers", path)
    if length is not None and len(xs) != length:
        raise SchemaError(f"expected {length} entries, got {len(xs)}", path)
    return [_number(x, f"{path}[{i}]", mode) for i, x in enumerate(xs)]


def _object(x, path: str) -> dict:
    if not isinstance(x, dict):
        raise SchemaError("expected an object", path)
    return x


def parse_space(obj, path: str = "space") -> SampleSpace:
    obj = _object(obj, path)
    atoms = obj.get("atoms")
    if not isinstance(atoms, list) or not atoms:
        raise SchemaError("atoms must be a nonempty list", f"{path}.atoms")
    if not all(isinstance(a, (str, int)) and not isinstance(a, bool) for a in atoms):
        raise SchemaError("atom labels must be strings", f"{path}.atoms")
    values = obj.get("values")
    if values is not None:
        values = _vector(values, f"{path}.values", RATIONAL, len(atoms))
    try:
        return SampleSpace(tuple(str(a) for a in atoms), None if values is None else tuple(values))
    except InputError as exc:
        raise SchemaError(str(exc), path) from None


def parse_pmf(xs, space: SampleSpace, path: str, mode: str) -> Pmf:
    vals = _vector(xs, path, mode, len(space))
    try:
        return Pmf(space, vals, mode)
    except ValidationError as exc:
        raise ValidationError(str(exc), path) from None


def parse_hypothesis(obj, space: SampleSpace, path: str, mode: str) -> HypothesisSet:
    obj = _object(obj, path)
    kinds = [k for k in _BUILDERS if k in obj]
    if len(kinds) != 1:
        raise SchemaError(f"hypothesis needs exactly one of {', '.join(_BUILDERS)}", path)
    kind = kinds[0]
    sub = f"{path}.{kind}"
    try:
        if kind == "generators":
            rows = obj[kind]
            if not isinstance(rows, list) or not rows:
                raise SchemaError("generators must be a nonempty list of pmfs", sub)
            H = Generators([parse_pmf(r, space, f"{sub}[{i}]", mode) for i, r in enumerate(rows)], mode)
        elif kind == "constraints":
            aux = obj.get("aux", 0)
            if isinstance(aux, bool) or not isinstance(aux, int) or aux < 0:
                raise SchemaError("aux must be a nonnegative integer", f"{path}.aux")
            rows = obj[kind]
            if not isinstance(rows, list):
                raise SchemaError("constraints must be a list", sub)
            cons = []
            for i, c in enumerate(rows):
                cp = f"{sub}[{i}]"
                c = _object(c, cp)
                coeffs = _vector(c.get("coeffs"), f"{cp}.coeffs", mode)
                if len(coeffs) != len(space) + aux:
                    raise SchemaError(
                        f"coeffs has {len(coeffs)} entries, expected atoms + aux = {len(space) + aux}",
                        f"{cp}.coeffs",
                    )
                rel = c.get("rel")
                if rel not in ("<=", "=", "==", ">="):
                    raise SchemaError("rel must be one of '<=', '=', '>='", f"{cp}.rel")
                cons.append(LinearConstraint(coeffs, rel, _number(c.get("rhs"), f"{cp}.rhs", mode)))
            H = Polytope(space, cons, aux, mode)
        elif kind in ("mean_at_most", "mean_at_least"):
            if space.values is None:
                raise SchemaError("mean constraints need space.values", sub)
            m = _number(obj[kind], sub, mode)
            H = (mean_at_most if kind == "mean_at_most" else mean_at_least)(space, m, mode)
        elif kind == "tv_ball":
            ball = _object(obj[kind], sub)
            center = parse_pmf(ball.get("center"), space, f"{sub}.center", mode)
            H = tv_ball(center, _number(ball.get("radius"), f"{sub}.radius", mode), mode)
        else:
            pairs = obj[kind]
            if not isinstance(pairs, list) or not all(
                isinstance(p, list) and len(p) == 2 and all(isinstance(i, int) for i in p) for p in pairs
            ):
                raise SchemaError("symmetric must be a list of [i, j] index pairs", sub)
            H = symmetric_null(space, pairs, mode)
    except (SchemaError, ValidationError):
        raise
    except EmptyHypothesis as exc:
        raise EmptyHypothesis(f"{path}: {exc}") from None
    except InputError as exc:
        raise ValidationError(str(exc), sub) from None
    try:
        H.validate()
    except EmptyHypothesis as exc:
        raise EmptyHypothesis(f"{path}: {exc}") from None
    return H


def parse_problem(text: str | bytes, mode: str = RATIONAL) -> ProblemFile:
    """Parse and validate a problem file; errors carry the JSON path."""
    check_mode(mode)
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ProblemSyntaxError(f"not UTF-8: {exc}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemSyntaxError(f"invalid JSON: {exc}") from None
    obj = _object(obj, "$")
    version = obj.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {version!r}", "schema_version")
    space = parse_space(obj.get("space"))
    hyps = _object(obj.get("hypotheses"), "hypotheses")
    if not hyps:
        raise SchemaError("at least one hypothesis is required", "hypotheses")
    parsed = {name: parse_hypothesis(h, space, f"hypotheses.{name}", mode) for name, h in hyps.items()}
    names = {}
    for key in ("null", "alternative"):
        name = obj.get(key)
        if name is not None and name not in parsed:
            raise SchemaError(f"unknown hypothesis {name!r}", key)
        names[key] = name
    measure = obj.get("measure")
    if measure is not None:
        measure = tuple(_vector(measure, "measure", mode, len(space)))
    return ProblemFile(space, parsed, names["null"], names["alternative"], measure, mode, obj)


def parse_certificate(text: str, space: SampleSpace, mode: str = RATIONAL) -> dict:
    """``{"phi": [...], "mu": [...], "nu": [...]}`` as raw vectors (validated later)."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemSyntaxError(f"invalid certificate JSON: {exc}") from None
    obj = _object(obj, "certificate")
    out = {}
    for key in ("phi", "mu", "nu"):
        if key not in obj:
            raise SchemaError("missing field", f"certificate.{key}")
        out[key] = _vector(obj[key], f"certificate.{key}", mode, len(space))
    return out

