"""Interference coefficients and the total-probability identities built on them.

For an outcome ``l`` of ``b`` and a pair ``{i, j}`` of ``a``-outcomes the
coefficient is

    lam[l, ij] = ((p_a[i] + p_a[j]) * P(l | ij) - (A[l, i] + A[l, j]))
                 / (2 * sqrt(A[l, i] * A[l, j])),

with ``A[l, i] = p_a[i] * cond[l, i]``. For data produced by a pure state
it equals the cosine of the phase difference between the two
sub-amplitudes contributing to ``b = l``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateContextError, DomainError, UndefinedLambdaError
from .prob_model import DEFAULT_TOL, PAIR_LABELS, PAIRS, ProbabilityData, ValidationOutcome, Violation, pair_index

#: Below this value of ``A[l, i] * A[l, j]`` a coefficient is left undefined.
DENOMINATOR_FLOOR = 1e-300


@dataclass(frozen=True, eq=False)
class InterferenceTable:
    """Nine coefficients, indexed ``lam[l, p]`` with ``p`` a column of :data:`PAIRS`.

    ``weight[l, i] = p_a[i] * cond[l, i]`` is the squared modulus of the
    sub-amplitude; the phase solver uses it to decide which phases are free
    when some coefficients are undefined. Undefined entries hold ``nan`` in
    ``lam`` and ``False`` in ``defined``.
    """

    lam: np.ndarray
    defined: np.ndarray
    weight: np.ndarray

    def __post_init__(self):
        for name, dtype in (("lam", float), ("defined", bool), ("weight", float)):
            arr = np.array(getattr(self, name), dtype=dtype)
            if arr.shape != (3, 3):
                raise ValueError(f"{name} must have shape (3, 3)")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @classmethod
    def from_values(cls, lam, defined=None, weight=None) -> "InterferenceTable":
        """Hand-built table; ``lam`` rows are ``(lam_12, lam_13, lam_23)``."""
        lam = np.array(lam, dtype=float)
        if defined is None:
            defined = np.isfinite(lam)
        lam = np.where(defined, lam, np.nan)
        if weight is None:
            weight = np.ones((3, 3))
        return cls(lam, defined, weight)

    def get(self, l: int, i: int, j: int) -> float:
        p = pair_index(i, j)
        if not self.defined[l, p]:
            raise UndefinedLambdaError(f"lambda[{l + 1},{PAIR_LABELS[p]}] is undefined")
        return float(self.lam[l, p])

    def row(self, l: int) -> tuple[float, float, float]:
        """``(lam_12, lam_13, lam_23)`` for outcome ``l``."""
        return tuple(float(x) for x in self.lam[l])

    def to_dict(self) -> dict:
        out = {}
        for p, lab in enumerate(PAIR_LABELS):
            out[lab] = [float(x) if d else None for x, d in zip(self.lam[:, p], self.defined[:, p])]
        return out


def _weights(p_a: np.ndarray, cond: np.ndarray) -> np.ndarray:
    return cond * p_a[None, :]


def interference_coefficients(data: ProbabilityData) -> InterferenceTable:
    A = _weights(data.p_a, data.cond)
    lam = np.full((3, 3), np.nan)
    defined = np.zeros((3, 3), dtype=bool)
    for p, (i, j) in enumerate(PAIRS):
        for l in range(3):
            prod = A[l, i] * A[l, j]
            if not prod >= DENOMINATOR_FLOOR:
                continue
            num = (data.p_a[i] + data.p_a[j]) * data.pair_cond[l, p] - (A[l, i] + A[l, j])
            lam[l, p] = num / (2.0 * np.sqrt(prod))
            defined[l, p] = True
    return InterferenceTable(lam, defined, A)


def boundedness_check(table: InterferenceTable, tol=DEFAULT_TOL) -> ValidationOutcome:
    """Every defined coefficient must satisfy ``|lam| <= 1 + tol``.

    ``tol`` may be a scalar or a ``(3, 3)`` array of per-entry tolerances.
    """
    tol = np.broadcast_to(np.asarray(tol, dtype=float), (3, 3))
    violations = []
    worst = 0.0
    for l in range(3):
        for p, lab in enumerate(PAIR_LABELS):
            if not table.defined[l, p]:
                continue
            mag = abs(table.lam[l, p])
            worst = max(worst, mag)
            if not mag <= 1.0 + tol[l, p]:
                violations.append(Violation(f"lambda[{l + 1},{lab}].bound", float(mag), float(1.0 + tol[l, p])))
    return ValidationOutcome(tuple(violations), {"lambda_abs_max": float(worst)})


def ftp_with_interference(data: ProbabilityData, table: InterferenceTable, l: int) -> float:
    """Total probability of ``b = l`` including the three interference terms."""
    A = _weights(data.p_a, data.cond)
    total = A[l].sum()
    for i, j in PAIRS:
        total += 2.0 * table.get(l, i, j) * np.sqrt(A[l, i] * A[l, j])
    return float(total)


def sorkin_residual(data: ProbabilityData) -> np.ndarray:
    """``p_b`` minus its reconstruction from single- and pair-slit probabilities.

    Zero for any data generated by a pure state; nonzero values measure
    third-order interference. No tolerance is applied.
    """
    p_a, cond = data.p_a, data.cond
    q = lambda i, j: data.pair_cond[:, pair_index(i, j)]  # noqa: E731
    recon = (
        p_a[0] * (q(0, 1) + q(0, 2) - cond[:, 0])
        + p_a[1] * (q(0, 1) + q(1, 2) - cond[:, 1])
        + p_a[2] * (q(0, 2) + q(1, 2) - cond[:, 2])
    )
    return data.p_b - recon


def triple_prob_from_lambda(p_a, cond, table: InterferenceTable, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Pair-conditional probabilities implied by ``p_a``, ``cond`` and coefficients.

    Exact inverse of :func:`interference_coefficients`. Undefined
    coefficients contribute no interference term. Returns a ``(3, 3)``
    array in ``pair_cond`` layout.
    """
    p_a = np.asarray(p_a, dtype=float)
    cond = np.asarray(cond, dtype=float)
    bad = table.defined & ~(np.abs(np.nan_to_num(table.lam)) <= 1.0 + tol)
    if bad.any():
        l, p = map(int, np.argwhere(bad)[0])
        raise DomainError(f"|lambda[{l + 1},{PAIR_LABELS[p]}]| = {abs(table.lam[l, p]):.6g} exceeds 1")
    A = _weights(p_a, cond)
    out = np.empty((3, 3))
    for p, (i, j) in enumerate(PAIRS):
        mass = p_a[i] + p_a[j]
        if not mass > 0.0:
            raise DegenerateContextError(f"context {PAIR_LABELS[p]} has zero probability")
        lam = np.where(table.defined[:, p], np.nan_to_num(table.lam[:, p]), 0.0)
        out[:, p] = (A[:, i] + A[:, j] + 2.0 * lam * np.sqrt(A[:, i] * A[:, j])) / mass
    return out


def lambda_normalization_residual(data: ProbabilityData, table: InterferenceTable) -> np.ndarray:
    """``sum_l lam[l, jk] * sqrt(cond[l, j] * cond[l, k])`` for each pair.

    Must vanish when every pair context is normalized. A row whose
    coefficient is undefined contributes nothing if its ``cond`` factor is
    zero; otherwise the pair's residual is ``nan`` (not computable).
    """
    out = np.full(3, np.nan)
    for p, (j, k) in enumerate(PAIRS):
        scale = np.sqrt(data.cond[:, j] * data.cond[:, k])
        defined = table.defined[:, p]
        if np.any(~defined & (scale > 0.0)):
            continue
        out[p] = np.sum(np.where(defined, np.nan_to_num(table.lam[:, p]), 0.0) * scale)
    return out


def lambda_tolerance(data: ProbabilityData, tol: float) -> np.ndarray:
    """First-order bound on the error of each coefficient.

    Assumes every input probability (``p_a``, ``cond``, ``pair_cond``) may
    be off by up to ``tol`` and sums the absolute partial derivatives.
    Useful for sampled data, where a tolerance in probability units is
    far too tight in coefficient units when amplitudes are small. Undefined
    entries get ``inf``.
    """
    out = np.full((3, 3), np.inf)
    A = _weights(data.p_a, data.cond)
    for p, (i, j) in enumerate(PAIRS):
        for l in range(3):
            prod = A[l, i] * A[l, j]
            if not prod >= DENOMINATOR_FLOOR:
                continue
            D = 2.0 * np.sqrt(prod)
            P = data.pair_cond[l, p]
            lam = ((data.p_a[i] + data.p_a[j]) * P - A[l, i] - A[l, j]) / D
            partials = [(data.p_a[i] + data.p_a[j]) / D]
            for n in (i, j):
                partials.append(data.p_a[n] / D + abs(lam) / (2.0 * data.cond[l, n]))
                partials.append(abs(P - data.cond[l, n]) / D + abs(lam) / (2.0 * data.p_a[n]))
            out[l, p] = tol * float(np.sum(np.abs(partials)))
    return out
