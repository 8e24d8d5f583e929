"""Probability tables for two three-valued observables ``a`` and ``b``.

Index convention (used throughout the package): ``l`` runs over the
outcomes of ``b``, ``i, j, k`` over the outcomes of ``a``. Arrays are
zero-based; identifiers shown to humans are one-based.

Pair-conditional probabilities ``P(b = l | a in {i, j})`` are stored in a
``(3, 3)`` array whose columns follow :data:`PAIRS`, so the unordered-pair
symmetry holds by construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import NamedTuple

import jsonschema
import numpy as np

from . import _jsonio
from .errors import ParseError, SchemaError

#: Unordered pairs of ``a``-outcomes, zero-based; column order of ``pair_cond``.
PAIRS: tuple[tuple[int, int], ...] = ((0, 1), (0, 2), (1, 2))
PAIR_LABELS: tuple[str, ...] = ("12", "13", "23")

DEFAULT_TOL = 1e-9


def pair_index(i: int, j: int) -> int:
    """Column of ``pair_cond`` holding the unordered pair ``{i, j}``."""
    if i == j or not (0 <= i < 3 and 0 <= j < 3):
        raise ValueError(f"invalid pair ({i}, {j})")
    return PAIRS.index((min(i, j), max(i, j)))


def _frozen(x, shape: tuple[int, ...], name: str) -> np.ndarray:
    arr = np.array(x, dtype=float)
    if arr.shape != shape:
        raise ValueError(f"{name} must have shape {shape}, got {arr.shape}")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class ProbabilityData:
    """All measured probabilities.

    Attributes
    ----------
    p_b : (3,) array
        ``P(b = l)``.
    p_a : (3,) array
        ``P(a = i)``.
    cond : (3, 3) array
        ``cond[l, i] = P(b = l | a = i)``; columns are distributions.
    pair_cond : (3, 3) array
        ``pair_cond[l, p] = P(b = l | a in PAIRS[p])``.
    """

    p_b: np.ndarray
    p_a: np.ndarray
    cond: np.ndarray
    pair_cond: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p_b", _frozen(self.p_b, (3,), "p_b"))
        object.__setattr__(self, "p_a", _frozen(self.p_a, (3,), "p_a"))
        object.__setattr__(self, "cond", _frozen(self.cond, (3, 3), "cond"))
        object.__setattr__(self, "pair_cond", _frozen(self.pair_cond, (3, 3), "pair_cond"))

    def pair(self, l: int, i: int, j: int) -> float:
        return float(self.pair_cond[l, pair_index(i, j)])

    def replace(self, **changes) -> "ProbabilityData":
        fields = dict(p_b=self.p_b, p_a=self.p_a, cond=self.cond, pair_cond=self.pair_cond)
        fields.update(changes)
        return ProbabilityData(**fields)

    def __eq__(self, other):
        if not isinstance(other, ProbabilityData):
            return NotImplemented
        return all(
            np.array_equal(getattr(self, n), getattr(other, n))
            for n in ("p_b", "p_a", "cond", "pair_cond")
        )

    __hash__ = None

    @classmethod
    def uniform(cls) -> "ProbabilityData":
        third = np.full((3, 3), 1 / 3)
        return cls(np.full(3, 1 / 3), np.full(3, 1 / 3), third, third)

    def to_dict(self) -> dict:
        return {
            "p_b": self.p_b.tolist(),
            "p_a": self.p_a.tolist(),
            "cond": self.cond.tolist(),
            "pair_cond": {lab: self.pair_cond[:, p].tolist() for p, lab in enumerate(PAIR_LABELS)},
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ProbabilityData":
        _check_schema(doc)
        pc = np.column_stack([doc["pair_cond"][lab] for lab in PAIR_LABELS])
        return cls(doc["p_b"], doc["p_a"], doc["cond"], pc)


class Violation(NamedTuple):
    constraint: str
    residual: float
    tolerance: float


@dataclass(frozen=True)
class ValidationOutcome:
    violations: tuple[Violation, ...] = ()
    residuals: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "violations": [v._asdict() for v in self.violations],
            "residuals": dict(self.residuals),
        }


def _range_excess(x: float) -> float:
    return max(-x, x - 1.0, 0.0)


def validate(data: ProbabilityData, tol: float = DEFAULT_TOL) -> ValidationOutcome:
    """Check normalization of every distribution and that entries lie in [0, 1].

    Violations carry the residual ``|sum - 1|`` or the distance outside
    the unit interval. Nothing is raised for bad data.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    checks: list[tuple[str, float]] = [
        ("p_b.sum", abs(data.p_b.sum() - 1.0)),
        ("p_a.sum", abs(data.p_a.sum() - 1.0)),
    ]
    for i in range(3):
        checks.append((f"cond.col[{i + 1}].sum", abs(data.cond[:, i].sum() - 1.0)))
    for p, lab in enumerate(PAIR_LABELS):
        checks.append((f"pair_cond[{lab}].sum", abs(data.pair_cond[:, p].sum() - 1.0)))

    for name in ("p_b", "p_a"):
        for l, x in enumerate(getattr(data, name)):
            checks.append((f"{name}[{l + 1}].range", _range_excess(x)))
    for l in range(3):
        for i in range(3):
            checks.append((f"cond[{l + 1}][{i + 1}].range", _range_excess(data.cond[l, i])))
        for p, lab in enumerate(PAIR_LABELS):
            checks.append((f"pair_cond[{lab}][{l + 1}].range", _range_excess(data.pair_cond[l, p])))

    violations = tuple(Violation(name, float(r), tol) for name, r in checks if not r <= tol)
    residuals = {name: float(r) for name, r in checks if name.endswith(".sum")}
    return ValidationOutcome(violations, residuals)


def check_double_stochastic(data: ProbabilityData, tol: float = DEFAULT_TOL) -> ValidationOutcome:
    """Row sums of ``cond`` must also be 1 (needed when both observables are matched)."""
    checks = [(f"cond.row[{l + 1}].sum", abs(data.cond[l].sum() - 1.0)) for l in range(3)]
    violations = tuple(Violation(n, float(r), tol) for n, r in checks if not r <= tol)
    return ValidationOutcome(violations, {n: float(r) for n, r in checks})


# -- JSON interchange --------------------------------------------------------

_PROB = {"type": "number", "minimum": 0.0, "maximum": 1.0}
_VEC3 = {"type": "array", "items": _PROB, "minItems": 3, "maxItems": 3}

SCHEMA = {
    "type": "object",
    "required": ["p_b", "p_a", "cond", "pair_cond"],
    "properties": {
        "p_b": _VEC3,
        "p_a": _VEC3,
        "cond": {"type": "array", "items": _VEC3, "minItems": 3, "maxItems": 3},
        "pair_cond": {
            "type": "object",
            "required": list(PAIR_LABELS),
            "properties": {lab: _VEC3 for lab in PAIR_LABELS},
        },
    },
}

_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


def _check_schema(doc) -> None:
    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = "/".join(str(p) for p in err.absolute_path)
        if err.validator == "required":
            missing = [k for k in err.validator_value if k not in err.instance]
            path = "/".join([path, missing[0]]) if path else missing[0]
        raise SchemaError(path, err.message)
    # json.loads accepts NaN/Infinity, which slip past numeric bounds
    for key in ("p_b", "p_a"):
        for n, x in enumerate(doc[key]):
            if not np.isfinite(x):
                raise SchemaError(f"{key}/{n}", "non-finite number")
    for l, row in enumerate(doc["cond"]):
        for n, x in enumerate(row):
            if not np.isfinite(x):
                raise SchemaError(f"cond/{l}/{n}", "non-finite number")
    for lab in PAIR_LABELS:
        for n, x in enumerate(doc["pair_cond"][lab]):
            if not np.isfinite(x):
                raise SchemaError(f"pair_cond/{lab}/{n}", "non-finite number")


def loads_document(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc


def load(text: str) -> ProbabilityData:
    """Parse a probability document; extra top-level keys are ignored."""
    return ProbabilityData.from_dict(loads_document(text))


def save(data: ProbabilityData) -> str:
    return _jsonio.dumps(data.to_dict())
