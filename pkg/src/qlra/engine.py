"""Assemble a complex amplitude from probability data and check it.

Given phases ``phi[l, i]`` the sub-amplitudes are
``sqrt(p_a[i] * cond[l, i]) * exp(1j * phi[l, i])`` and the state is their
row sum. The ``a``-basis uses the same phases on ``sqrt(cond)``, which fixes
the free column phases of the ``a``-eigenvectors to zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import QLRAError
from .interference import (
    boundedness_check,
    interference_coefficients,
    lambda_normalization_residual,
    lambda_tolerance,
    sorkin_residual,
)
from .phase_solver import PhaseSolution, row_consistency, row_tolerance, solve_all
from .prob_model import (
    DEFAULT_TOL,
    PAIR_LABELS,
    PAIRS,
    ProbabilityData,
    ValidationOutcome,
    Violation,
    check_double_stochastic,
    validate,
)
from . import _jsonio

#: Orthonormality of the a-basis is judged at this multiple of the base tolerance.
UNITARITY_FACTOR = 10.0


@dataclass(frozen=True, eq=False)
class AmplitudeModel:
    psi: np.ndarray
    a_basis: np.ndarray
    sub_amplitudes: np.ndarray
    solution: PhaseSolution | None = None

    def unitarity_defect(self) -> float:
        """``max |U^H U - I|`` for the a-basis."""
        u = self.a_basis
        return float(np.abs(u.conj().T @ u - np.eye(3)).max())

    def probabilities(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(p_b, p_a, cond)`` predicted by Born's rule."""
        p_b = np.abs(self.psi) ** 2
        p_a = np.abs(self.a_basis.conj().T @ self.psi) ** 2
        cond = np.abs(self.a_basis) ** 2
        return p_b, p_a, cond

    def to_dict(self) -> dict:
        out = {
            "psi": _jsonio.complex_to_json(self.psi),
            "a_basis": _jsonio.complex_to_json(self.a_basis),
            "sub_amplitudes": _jsonio.complex_to_json(self.sub_amplitudes),
        }
        if self.solution is not None:
            out["branches"] = list(self.solution.branches)
        return out


def _complete_null_column(data: ProbabilityData, solution: PhaseSolution) -> PhaseSolution:
    """Fix the phases of an a-eigenvector that carries no probability.

    If ``p_a[i] = 0`` none of the data constrains column ``i``; when it is
    the only such column it is the unique (up to phase) vector orthogonal
    to the other two.
    """
    null = np.flatnonzero(solution.free.all(axis=0))
    if len(null) != 1:
        return solution
    i = int(null[0])
    j, k = [n for n in range(3) if n != i]
    amp = np.sqrt(data.cond)
    u = amp * np.exp(1j * solution.phi)
    w = np.conj(np.cross(u[:, j], u[:, k]))
    phi = solution.phi.copy()
    phi[:, i] = np.where(np.abs(w) > 0, np.angle(w), phi[:, i]) % (2 * np.pi)
    return PhaseSolution(phi, solution.gauge, solution.branches, solution.free)


def build_amplitude(data: ProbabilityData, solution: PhaseSolution) -> AmplitudeModel:
    phase = np.exp(1j * solution.phi)
    sub = np.sqrt(data.p_a[None, :] * data.cond) * phase
    a_basis = np.sqrt(data.cond) * phase
    return AmplitudeModel(sub.sum(axis=1), a_basis, sub, solution)


def unitarity_residuals(model: AmplitudeModel) -> np.ndarray:
    """Overlap ``sum_m sqrt(cond[m,i] cond[m,j]) exp(1j (phi[m,i] - phi[m,j]))`` per pair.

    Entries follow :data:`PAIRS`; all vanish exactly when the a-basis
    columns are orthogonal.
    """
    gram = model.a_basis.conj().T @ model.a_basis
    return np.array([gram[j, i] for i, j in PAIRS])


def _model_slack(model: AmplitudeModel, data: ProbabilityData, table) -> tuple[np.ndarray, np.ndarray]:
    """Largest Born-rule mismatch explained by the model's own imperfections.

    For ``p_b``: the fitted phase differences need not reproduce every
    coefficient exactly. For ``p_a``: a non-orthogonal a-basis mixes the
    coefficients through ``G = U^H U``. Both bounds are exact identities
    of the construction, not estimates.
    """
    A = data.p_a[None, :] * data.cond
    phi = model.solution.phi if model.solution is not None else np.angle(model.sub_amplitudes)
    slack_b = np.zeros(3)
    for p, (i, j) in enumerate(PAIRS):
        lam = np.where(table.defined[:, p], np.nan_to_num(table.lam[:, p]), 0.0)
        slack_b += 2.0 * np.sqrt(A[:, i] * A[:, j]) * np.abs(np.cos(phi[:, i] - phi[:, j]) - lam)
    gram_err = np.abs(model.a_basis.conj().T @ model.a_basis - np.eye(3))
    c = np.sqrt(data.p_a)
    leak = gram_err @ c
    slack_a = 2.0 * c * leak + leak**2
    return slack_b, slack_a


def born_verify(model: AmplitudeModel, data: ProbabilityData, tol: float = DEFAULT_TOL, single_observable: bool = False, slack: tuple | None = None) -> ValidationOutcome:
    """Compare Born-rule predictions of ``model`` against ``data``.

    Checks ``|psi[l]|^2 = p_b[l]``; unless ``single_observable``, also
    ``|<e_a[i], psi>|^2 = p_a[i]`` and ``|<e_a[i], e_b[l]>|^2 = cond[l, i]``.
    ``slack``, a pair of arrays for ``p_b`` and ``p_a``, widens the
    tolerance entry by entry.
    """
    p_b, p_a, cond = model.probabilities()
    checks = {"p_b": np.abs(p_b - data.p_b)}
    tols = {"p_b": np.full(3, float(tol))}
    if not single_observable:
        checks["p_a"] = np.abs(p_a - data.p_a)
        checks["cond"] = np.abs(cond - data.cond)
        tols["p_a"] = np.full(3, float(tol))
        tols["cond"] = np.full((3, 3), float(tol))
    if slack is not None:
        tols["p_b"] = tols["p_b"] + slack[0]
        if "p_a" in tols:
            tols["p_a"] = tols["p_a"] + slack[1]
    violations = []
    residuals = {}
    for name, diff in checks.items():
        residuals[name] = float(diff.max())
        t = tols[name]
        for idx in zip(*np.nonzero(~(diff <= t))):
            label = "".join(f"[{n + 1}]" for n in idx)
            violations.append(Violation(f"born.{name}{label}", float(diff[idx]), float(t[idx])))
    return ValidationOutcome(tuple(violations), residuals)


@dataclass
class FeasibilityReport:
    """Outcome of every gate of :func:`run_qlra`.

    ``born_ok`` is true when at least one branch that passed the unitarity
    filter also reproduces the data. ``errors`` collects messages from
    stages that could not run.
    """

    normalization_ok: bool = False
    lambda_bounded: bool = False
    rows_consistent: bool = False
    sorkin_ok: bool = False
    lambda_norm_ok: bool = False
    double_stochastic_ok: bool = False
    unitarity_ok: bool = False
    born_ok: bool = False
    single_observable: bool = False
    tol: float = DEFAULT_TOL
    residuals: dict = field(default_factory=dict)
    n_candidates: int = 0
    n_surviving: int = 0
    selected_solution: PhaseSolution | None = None
    errors: list = field(default_factory=list)

    GATES = (
        "normalization_ok",
        "lambda_bounded",
        "sorkin_ok",
        "lambda_norm_ok",
        "double_stochastic_ok",
        "rows_consistent",
        "unitarity_ok",
        "born_ok",
    )

    @property
    def feasible(self) -> bool:
        return all(getattr(self, g) for g in self.GATES)

    def failed_gates(self) -> list[str]:
        return [g for g in self.GATES if not getattr(self, g)]

    def to_dict(self) -> dict:
        out = {"feasible": self.feasible}
        out.update({g: getattr(self, g) for g in self.GATES})
        out.update(
            single_observable=self.single_observable,
            tol=self.tol,
            residuals=dict(self.residuals),
            n_candidates=self.n_candidates,
            n_surviving=self.n_surviving,
            selected_solution=None if self.selected_solution is None else self.selected_solution.to_dict(),
            errors=list(self.errors),
        )
        return out


def _max_abs(values) -> float:
    arr = np.abs(np.asarray(values, dtype=float))
    arr = arr[np.isfinite(arr)]
    return float(arr.max()) if arr.size else 0.0


def _propagated_tolerances(data: ProbabilityData, table, tol: float):
    """Coefficient, row-consistency and coefficient-normalization tolerances
    implied by an error of ``tol`` on every input probability."""
    lam_tol = lambda_tolerance(data, tol)
    row_tol = np.full(3, float(tol))
    for l in range(3):
        if table.defined[l].all():
            row_tol[l] = row_tolerance(table.lam[l, 0], table.lam[l, 1], lam_tol[l])
    norm_tol = np.zeros(3)
    for p, (j, k) in enumerate(PAIRS):
        for l in range(3):
            cj, ck = data.cond[l, j], data.cond[l, k]
            if not table.defined[l, p]:
                continue
            d_scale = 0.5 * tol * (np.sqrt(ck / cj) + np.sqrt(cj / ck))
            norm_tol[p] += lam_tol[l, p] * np.sqrt(cj * ck) + abs(table.lam[l, p]) * d_scale
    return lam_tol, row_tol, float(norm_tol.max())


def run_qlra(data: ProbabilityData, tol: float = DEFAULT_TOL, gauge=(0.0, 0.0, 0.0), single_observable: bool = False, lambda_tol=None) -> tuple[FeasibilityReport, list[AmplitudeModel]]:
    """Full pipeline from data to amplitudes.

    Stages: coefficients, their boundedness, the Sorkin (total probability)
    identity, coefficient normalization, double stochasticity, per-row
    phase solving over all branches, an orthonormality filter on the
    a-basis, and a Born-rule check of every surviving branch.

    In ``single_observable`` mode only ``b`` is matched: double
    stochasticity, the orthonormality filter and the ``a``-side Born checks
    are skipped. The returned model list is empty unless every gate passes.

    ``tol`` is in probability units. By default the coefficient gates
    (boundedness, normalization, row consistency) use it unchanged, which
    suits exact data. ``lambda_tol="auto"`` instead propagates an error of
    ``tol`` on each input probability into coefficient space; use it for
    sampled frequencies; the Born check then also allows for the model's
    own residual non-orthogonality and phase mismatch. A number sets the
    coefficient tolerance directly.
    """
    rep = FeasibilityReport(single_observable=single_observable, tol=tol)
    res = rep.residuals

    norm = validate(data, tol)
    rep.normalization_ok = norm.passed
    res["normalization_abs_max"] = _max_abs(list(norm.residuals.values()))

    table = interference_coefficients(data)
    if isinstance(lambda_tol, str):
        if lambda_tol != "auto":
            raise ValueError(f"lambda_tol must be a number, None or 'auto', not {lambda_tol!r}")
        lam_tol, row_tol, norm_tol = _propagated_tolerances(data, table, tol)
        propagate = True
    else:
        propagate = False
        lt = tol if lambda_tol is None else float(lambda_tol)
        lam_tol, row_tol, norm_tol = np.full((3, 3), lt), np.full(3, lt), lt
    bounded = boundedness_check(table, lam_tol)
    rep.lambda_bounded = bounded.passed
    res["lambda_abs_max"] = bounded.residuals["lambda_abs_max"]
    res["lambda_undefined"] = int((~table.defined).sum())

    sorkin = sorkin_residual(data)
    res["sorkin_abs_max"] = _max_abs(sorkin)
    rep.sorkin_ok = res["sorkin_abs_max"] <= tol

    lam_norm = lambda_normalization_residual(data, table)
    res["lambda_norm_abs_max"] = _max_abs(lam_norm)
    rep.lambda_norm_ok = res["lambda_norm_abs_max"] <= norm_tol
    if np.isnan(lam_norm).any():
        rep.errors.append(
            "lambda normalization not computable for pair(s) "
            + ", ".join(PAIR_LABELS[p] for p in np.flatnonzero(np.isnan(lam_norm)))
        )

    if single_observable:
        rep.double_stochastic_ok = True
    else:
        ds = check_double_stochastic(data, tol)
        rep.double_stochastic_ok = ds.passed
        res["double_stochastic_abs_max"] = _max_abs(list(ds.residuals.values()))

    if not rep.lambda_bounded:
        rep.errors.append("phase solving skipped: coefficients outside [-1, 1]")
        return rep, []

    row_res = []
    for l in range(3):
        if table.defined[l].all():
            rep_l = row_consistency(*table.row(l), tol=row_tol[l], row=l, domain_tol=float(lam_tol[l].max()))
            row_res.append(rep_l.residual)
    res["row_consistency_abs_max"] = max(row_res, default=0.0)

    try:
        solutions = solve_all(table, gauge, row_tol, lam_tol)
    except QLRAError as exc:
        rep.errors.append(str(exc))
        return rep, []
    rep.rows_consistent = True
    rep.n_candidates = len(solutions)

    survivors = []
    defects = []
    for sol in solutions:
        model = build_amplitude(data, _complete_null_column(data, sol))
        defect = model.unitarity_defect()
        defects.append(defect)
        if single_observable or defect <= UNITARITY_FACTOR * tol:
            survivors.append(model)
    res["unitarity_defect_min"] = min(defects)
    rep.unitarity_ok = bool(survivors)
    rep.n_surviving = len(survivors)

    verified = []
    born_res = []
    for model in survivors:
        slack = _model_slack(model, data, table) if propagate else None
        check = born_verify(model, data, tol, single_observable, slack)
        born_res.append(max(check.residuals.values()))
        if check.passed:
            verified.append(model)
    res["born_abs_max_best"] = min(born_res, default=float("nan"))
    rep.born_ok = bool(verified)
    if verified:
        rep.selected_solution = verified[0].solution

    return rep, (verified if rep.feasible else [])
