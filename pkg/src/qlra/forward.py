"""Exact probability data from quantum inputs.

Conventions: ``psi`` holds the coordinates of the state in the canonical
``b``-basis, and column ``i`` of the unitary ``u`` is the ``a``-eigenvector
for outcome ``i``. Inner products conjugate the first argument, so

    c_i = <u[:, i], psi> = (u^H psi)_i,     sub[l, i] = u[l, i] * c_i,

and ``psi[l] = sum_i sub[l, i]``. Only moduli and phase differences
enter the probabilities, so the opposite convention gives the same data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateContextError, DomainError
from .interference import DENOMINATOR_FLOOR, InterferenceTable, triple_prob_from_lambda
from .phase_solver import row_consistency
from .prob_model import PAIR_LABELS, PAIRS, ProbabilityData

INSTANCE_TOL = 1e-12
CONTEXT_FLOOR = DENOMINATOR_FLOOR


@dataclass(frozen=True, eq=False)
class QuantumInstance:
    psi: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        psi = np.array(self.psi, dtype=complex)
        u = np.array(self.u, dtype=complex)
        if psi.shape != (3,) or u.shape != (3, 3):
            raise ValueError("psi must have shape (3,) and u shape (3, 3)")
        if abs(np.linalg.norm(psi) - 1.0) > INSTANCE_TOL:
            raise ValueError(f"psi is not normalized (norm {np.linalg.norm(psi):.17g})")
        defect = np.abs(u.conj().T @ u - np.eye(3)).max()
        if defect > INSTANCE_TOL:
            raise ValueError(f"u is not unitary (max |u^H u - I| = {defect:.3g})")
        psi.flags.writeable = False
        u.flags.writeable = False
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "u", u)

    def a_coefficients(self) -> np.ndarray:
        return self.u.conj().T @ self.psi

    def sub_amplitudes(self) -> np.ndarray:
        return self.u * self.a_coefficients()[None, :]


def random_instance(seed=None) -> QuantumInstance:
    """Haar-distributed state and unitary from a seed."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    psi = z / np.linalg.norm(z)
    g = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    u = q * (d / np.abs(d))[None, :]
    return QuantumInstance(psi, u)


def generate(instance: QuantumInstance, allow_degenerate: bool = False) -> ProbabilityData:
    """Born-rule probabilities for every single-, pair- and full-slit context.

    A pair context whose total probability ``p_a[i] + p_a[j]`` is zero has
    no conditional distribution. By default this raises
    :class:`DegenerateContextError`; with ``allow_degenerate=True`` the
    context gets the equal mixture of the two single-slit columns. Any
    choice there leaves every identity in the package intact because the
    context carries zero weight.
    """
    c = instance.a_coefficients()
    sub = instance.sub_amplitudes()
    p_b = np.abs(instance.psi) ** 2
    p_a = np.abs(c) ** 2
    cond = np.abs(instance.u) ** 2
    pair_cond = np.empty((3, 3))
    for p, (i, j) in enumerate(PAIRS):
        mass = p_a[i] + p_a[j]
        if not mass >= CONTEXT_FLOOR:
            if not allow_degenerate:
                raise DegenerateContextError(f"context {PAIR_LABELS[p]} has probability {mass:.3g}")
            pair_cond[:, p] = 0.5 * (cond[:, i] + cond[:, j])
            continue
        pair_cond[:, p] = np.abs(sub[:, i] + sub[:, j]) ** 2 / mass
    return ProbabilityData(p_b, p_a, cond, pair_cond)


# -- mutually unbiased family ------------------------------------------------

OMEGA = np.exp(2j * np.pi / 3)

#: Columns are the three a-eigenvectors, each unbiased to the canonical basis.
MUB_BASIS = np.array(
    [
        [1, 1, 1],
        [OMEGA, OMEGA.conjugate(), 1],
        [1, OMEGA.conjugate(), OMEGA],
    ]
) / np.sqrt(3)


def mub_instance(gamma1: float, gamma2: float) -> QuantumInstance:
    psi = np.array([1.0, np.exp(1j * gamma1), np.exp(1j * gamma2)]) / np.sqrt(3)
    return QuantumInstance(psi, MUB_BASIS)


def mub_marginals_closed_form(gamma1: float, gamma2: float) -> np.ndarray:
    """Trigonometric closed form of ``p_a`` for :func:`mub_instance`."""
    c, s, r3 = np.cos, np.sin, np.sqrt(3.0)
    g1, g2, d = gamma1, gamma2, gamma1 - gamma2
    return np.array(
        [
            3 - c(g1) - c(d) + 2 * c(g2) + r3 * s(g1) + r3 * s(d),
            3 - c(g1) + 2 * c(d) - c(g2) - r3 * s(g1) - r3 * s(g2),
            3 + 2 * c(g1) - c(d) - c(g2) - r3 * s(d) + r3 * s(g2),
        ]
    ) / 9.0


# -- one-parameter family with unbiased cond and uniform p_b -----------------


def ansatz_mu_roots(x: float, y: float) -> tuple[float, float]:
    """Roots ``(plus, minus)`` of ``2 mu^2 + (x - y) mu - 1 = 0``.

    ``mu`` is the common value of ``lam_12 = -lam_13`` (with
    ``lam_23 = 1 - 2 mu^2``) that makes unbiased data with uniform ``p_b``
    satisfy the Born constraint.
    """
    if not (x > 0 and y > 0):
        raise ValueError("x and y must be positive")
    disc = np.sqrt((x - y) ** 2 + 8.0)
    return float(((y - x) + disc) / 4.0), float(((y - x) - disc) / 4.0)


def admissible_mu_roots(x: float, y: float) -> tuple[bool, bool]:
    """Which roots keep every coefficient inside (-1, 1), by the sign of ``x - y``.

    Both when ``|x - y| < 1``; only the plus root when ``x - y > 1``; only
    the minus root when ``y - x > 1``. At ``|x - y| = 1`` exactly the
    excluded root sits at ``|mu| = 1``.
    """
    d = x - y
    if abs(d) < 1:
        return True, True
    return d > 0, d < 0


def ansatz_probabilities(x: float, y: float) -> np.ndarray:
    """``p_a`` with ``sqrt(p1/p2) = x`` and ``sqrt(p1/p3) = y``."""
    den = x * x * y * y + x * x + y * y
    return np.array([x * x * y * y, y * y, x * x]) / den


@dataclass(frozen=True)
class AnsatzParams:
    """Parameters of the family solved for ``lam_12`` given ``lam_13 = v``.

    ``v``, ``sign12`` and ``sign23`` may be scalars (same for all rows) or
    length-3 sequences (one per outcome of ``b``). ``sign12`` picks the
    root for ``lam_12``; ``sign23``, if given, is the branch that ``lam_23``
    must lie on and is checked rather than imposed.
    """

    x: float
    y: float
    v: float | tuple[float, float, float]
    sign12: int | tuple[int, int, int] = 1
    sign23: int | tuple[int, int, int] | None = None

    def __post_init__(self):
        if not (self.x > 0 and self.y > 0):
            raise ValueError("x and y must be positive")
        if np.any(np.abs(np.asarray(self.v, dtype=float)) > 1):
            raise ValueError("|v| must not exceed 1")


def ansatz_lambda12(x: float, y: float, v: float, sign: int = 1) -> float:
    """``lam_12`` solving the Born constraint jointly with the row-consistency relation."""
    den = y * y + 1.0 + 2.0 * y * v
    if den == 0.0:
        raise DomainError("y^2 + 1 + 2 y v vanishes")
    radicand = (v * v - 1.0) * (v * v * x * x - y * y - 1.0 - 2.0 * y * v)
    if radicand < 0.0:
        raise DomainError(f"negative radicand {radicand:.6g} for (x, y, v) = ({x}, {y}, {v})")
    return float((-x * v * (y + v) + np.sign(sign) * np.sqrt(radicand)) / den)


def ansatz_family(params: AnsatzParams, tol: float = 1e-9) -> tuple[InterferenceTable, ProbabilityData]:
    """Coefficient table and data for unbiased ``cond`` and uniform ``p_b``.

    ``lam_23`` is taken from ``y lam_12 + x lam_13 + lam_23 = 0``. With the
    same ``v`` in every row the pair contexts are generally not normalized;
    pass per-row values of ``v`` to build normalized data.
    """
    x, y = float(params.x), float(params.y)
    v = np.broadcast_to(np.asarray(params.v, dtype=float), (3,))
    s12 = np.broadcast_to(np.asarray(params.sign12), (3,))
    s23 = None if params.sign23 is None else np.broadcast_to(np.asarray(params.sign23), (3,))

    lam = np.empty((3, 3))
    for l in range(3):
        l12 = ansatz_lambda12(x, y, v[l], s12[l])
        l13 = v[l]
        l23 = -y * l12 - x * l13
        for name, val in (("lambda_12", l12), ("lambda_23", l23)):
            if abs(val) > 1.0 + tol:
                raise DomainError(f"row {l + 1}: |{name}| = {abs(val):.6g} exceeds 1")
        if s23 is not None:
            rep = row_consistency(l12, l13, l23, tol=tol, row=l)
            if rep.matched_sign != int(np.sign(s23[l])):
                raise DomainError(f"row {l + 1}: lambda_23 = {l23:.6g} is not on the requested branch")
        lam[l] = (l12, l13, l23)

    p_a = ansatz_probabilities(x, y)
    scale = np.array([x + 1 / x, y + 1 / y, x / y + y / x])
    pair_cond = 1 / 3 + 2 * lam / (3 * scale[None, :])
    third = np.full((3, 3), 1 / 3)
    data = ProbabilityData(np.full(3, 1 / 3), p_a, third, pair_cond)
    weight = third * p_a[None, :]
    return InterferenceTable(lam, np.ones((3, 3), dtype=bool), weight), data


def example1(mu: float = 1 / np.sqrt(2)) -> tuple[InterferenceTable, ProbabilityData]:
    """Unbiased, uniform data whose coefficients follow a cyclic pattern.

    Rows ``(lam_12, lam_13, lam_23)`` are ``(mu, 0, -mu)``, ``(-mu, mu, 0)``
    and ``(0, -mu, mu)``; every probability in ``p_a``, ``p_b`` and ``cond``
    is 1/3 and ``pair_cond`` follows from the coefficients. Only
    ``mu = +-1/sqrt(2)`` makes all three rows consistent.
    """
    lam = np.array([[mu, 0.0, -mu], [-mu, mu, 0.0], [0.0, -mu, mu]])
    third = np.full((3, 3), 1 / 3)
    table = InterferenceTable(lam, np.ones((3, 3), dtype=bool), third / 3)
    pair_cond = triple_prob_from_lambda(np.full(3, 1 / 3), third, table)
    return table, ProbabilityData(np.full(3, 1 / 3), np.full(3, 1 / 3), third, pair_cond)
