"""Recover sub-amplitude phases from their pairwise cosines.

Each row ``l`` has three unknown phases ``phi[l, 0..2]`` and three
equations ``cos(phi_i - phi_j) = lam[l, ij]``. Fixing ``phi[l, 0]`` to a
gauge anchor ``nu`` leaves

    phi_1 = nu + s1 * arccos(lam_12),   phi_2 = nu + s2 * arccos(lam_13),

and the third equation forces ``s1 * s2`` to the sign for which
``lam_12 * lam_13 + s1 * s2 * sqrt((1 - lam_12**2) * (1 - lam_13**2))``
equals ``lam_23``. A consistent row therefore has one solution and its
mirror image about ``nu``; branch ``+1`` is the first of the two in the
order ``s1 = -1`` before ``s1 = +1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InconsistentRowError
from .interference import InterferenceTable, boundedness_check
from .prob_model import DEFAULT_TOL, PAIRS, pair_index

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class BranchReport:
    row: int
    consistent: bool
    lhs_candidates: tuple[float, float]  # (plus, minus)
    target: float
    matched_sign: int  # +1, -1, or 0 when neither candidate matches

    @property
    def residual(self) -> float:
        return float(min(abs(c - self.target) for c in self.lhs_candidates))


@dataclass(frozen=True, eq=False)
class PhaseSolution:
    """Nine phases ``phi[l, i]`` in ``[0, 2*pi)``.

    ``free[l, i]`` marks phases left unconstrained because the matching
    sub-amplitude vanishes; they are set to the row's gauge anchor.
    """

    phi: np.ndarray
    gauge: np.ndarray
    branches: tuple[int, int, int]
    free: np.ndarray

    def to_dict(self) -> dict:
        return {
            "phi": self.phi.tolist(),
            "gauge": self.gauge.tolist(),
            "branches": list(self.branches),
            "free": self.free.tolist(),
        }


def _check_domain(value: float, name: str, tol: float) -> None:
    if not abs(value) <= 1.0 + tol:
        raise DomainError(f"|{name}| = {abs(value):.6g} exceeds 1")


#: Coefficients this close to +-1 are treated as exactly +-1.
SNAP = 64 * np.finfo(float).eps


def _snap(x: float) -> float:
    """Absorb rounding at the boundary.

    ``sqrt(1 - lam**2)`` turns an error ``e`` near ``|lam| = 1`` into about
    ``sqrt(2 e)``, so a few ulps of rounding can break an exact row.
    """
    return float(np.sign(x)) if abs(abs(x) - 1.0) <= SNAP else float(x)


def _arccos(x: float) -> float:
    return float(np.arccos(np.clip(x, -1.0, 1.0)))


def _candidates(lam_12: float, lam_13: float) -> tuple[float, float]:
    c12, c13 = np.clip(lam_12, -1, 1), np.clip(lam_13, -1, 1)
    root = np.sqrt(max((1.0 - c12 * c12) * (1.0 - c13 * c13), 0.0))
    base = c12 * c13
    return float(base + root), float(base - root)


def row_consistency(lam_12: float, lam_13: float, lam_23: float, tol: float = DEFAULT_TOL, row: int = 0, domain_tol: float | None = None) -> BranchReport:
    """Does ``lam_23`` agree with one of the two values allowed by ``lam_12, lam_13``?

    ``domain_tol`` (default ``tol``) is the slack allowed on ``|lam| <= 1``.
    """
    domain_tol = tol if domain_tol is None else domain_tol
    _check_domain(lam_12, "lambda_12", domain_tol)
    _check_domain(lam_13, "lambda_13", domain_tol)
    lam_12, lam_13 = _snap(lam_12), _snap(lam_13)
    plus, minus = _candidates(lam_12, lam_13)
    dp, dm = abs(plus - lam_23), abs(minus - lam_23)
    if min(dp, dm) <= tol:
        sign = 1 if dp <= dm else -1
    else:
        sign = 0
    return BranchReport(row, sign != 0, (plus, minus), float(lam_23), sign)


def row_tolerance(lam_12: float, lam_13: float, err: tuple[float, float, float]) -> float:
    """Consistency tolerance for a row whose coefficients carry errors ``err``.

    ``err`` bounds the errors of ``(lam_12, lam_13, lam_23)``. The spread of
    each candidate over the corners of the error box around
    ``(lam_12, lam_13)`` is added to the error of ``lam_23``; no
    linearization, so rows near ``|lam| = 1`` are handled.
    """
    e12, e13, e23 = (float(e) for e in err)
    base = _candidates(lam_12, lam_13)
    spread = 0.0
    for s12, s13 in itertools.product((-1.0, 0.0, 1.0), repeat=2):
        cand = _candidates(lam_12 + s12 * e12, lam_13 + s13 * e13)
        spread = max(spread, abs(cand[0] - base[0]), abs(cand[1] - base[1]))
    return spread + e23


def _wrap(phi) -> np.ndarray:
    out = np.mod(np.asarray(phi, dtype=float), TWO_PI)
    # fold values that rounded up to 2*pi back to 0
    return np.where(np.isclose(out, TWO_PI, rtol=0.0, atol=1e-15), 0.0, out)


def _same_angles(a: np.ndarray, b: np.ndarray, atol: float = 1e-12) -> bool:
    d = np.angle(np.exp(1j * (a - b)))
    return bool(np.all(np.abs(d) <= atol))


def _mirror_pair(nu: float, offsets: np.ndarray) -> list[np.ndarray]:
    first = _wrap(nu + offsets)
    second = _wrap(nu - offsets)
    return [first] if _same_angles(first, second) else [first, second]


def solve_row(lam_12: float, lam_13: float, lam_23: float, nu: float = 0.0, tol: float = DEFAULT_TOL, row: int = 0, domain_tol: float | None = None) -> list[np.ndarray]:
    """All phase triples ``(phi_0, phi_1, phi_2)`` with ``phi_0 = nu`` solving the row.

    At most two are returned; the second is the mirror image of the first.
    Raises :class:`InconsistentRowError` if no sign pairing reproduces
    ``lam_23`` within ``tol``.
    """
    report = row_consistency(lam_12, lam_13, lam_23, tol, row, domain_tol)
    if not report.consistent:
        raise InconsistentRowError(
            row,
            f"lambda_23 = {lam_23:.12g} matches neither {report.lhs_candidates[0]:.12g} "
            f"nor {report.lhs_candidates[1]:.12g}",
        )
    a12, a13 = _arccos(_snap(lam_12)), _arccos(_snap(lam_13))
    # s1 = -1 fixes the first branch; s2 follows from the matched sign
    offsets = np.array([0.0, -a12, -report.matched_sign * a13])
    return _mirror_pair(nu, offsets)


def _active_indices(table: InterferenceTable, l: int) -> list[int]:
    """Indices whose phase is constrained; drops the weakest until all pairs are defined."""
    active = [0, 1, 2]
    while len(active) > 1:
        undefined = [
            (i, j) for i, j in itertools.combinations(active, 2) if not table.defined[l, pair_index(i, j)]
        ]
        if not undefined:
            break
        # smallest weight goes first; ties drop the higher index
        drop = min(active, key=lambda i: (table.weight[l, i], -i))
        active.remove(drop)
    return active


def _solve_row_general(table: InterferenceTable, l: int, nu: float, tol: float, domain_tol: float) -> tuple[list[np.ndarray], np.ndarray]:
    active = _active_indices(table, l)
    free = np.ones(3, dtype=bool)
    free[active] = False
    if len(active) == 3:
        return solve_row(*table.row(l), nu=nu, tol=tol, row=l, domain_tol=domain_tol), free
    phi = np.zeros(3)
    if len(active) == 2:
        i, j = active
        lam = table.lam[l, pair_index(i, j)]
        _check_domain(lam, f"lambda[{l + 1},{i + 1}{j + 1}]", domain_tol)
        phi[j] = -_arccos(_snap(lam))
    return _mirror_pair(nu, phi), free


def solve_all(table: InterferenceTable, gauge=(0.0, 0.0, 0.0), tol=DEFAULT_TOL, lambda_tol=None) -> list[PhaseSolution]:
    """Every combination of per-row branches, in lexicographic branch order (+1 before -1).

    ``tol`` is the row-consistency tolerance, a scalar or one value per row.
    ``lambda_tol`` (scalar or ``(3, 3)``, default ``tol`` per row) is the
    slack on ``|lam| <= 1``.
    """
    row_tol = np.broadcast_to(np.asarray(tol, dtype=float), (3,))
    if lambda_tol is None:
        lambda_tol = np.repeat(row_tol[:, None], 3, axis=1)
    lambda_tol = np.broadcast_to(np.asarray(lambda_tol, dtype=float), (3, 3))
    bounded = boundedness_check(table, lambda_tol)
    if not bounded.passed:
        v = bounded.violations[0]
        raise DomainError(f"{v.constraint}: |lambda| = {v.residual:.6g}")
    gauge = np.asarray(gauge, dtype=float)
    if gauge.shape != (3,):
        raise ValueError("gauge must hold three angles")

    per_row = []
    free = np.zeros((3, 3), dtype=bool)
    for l in range(3):
        dom = float(np.max(np.where(table.defined[l], lambda_tol[l], 0.0)))
        sols, free[l] = _solve_row_general(table, l, float(gauge[l]), float(row_tol[l]), dom)
        per_row.append(list(zip((1, -1), sols)))

    out = []
    for combo in itertools.product(*per_row):
        branches = tuple(b for b, _ in combo)
        phi = np.vstack([p for _, p in combo])
        phi.flags.writeable = False
        out.append(PhaseSolution(phi, _wrap(gauge), branches, free.copy()))
    return out
