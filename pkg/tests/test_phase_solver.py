import numpy as np
import pytest
from hypothesis import given, strategies as st

from qlra import (
    DomainError,
    InconsistentRowError,
    InterferenceTable,
    example1,
    generate,
    interference_coefficients,
    random_instance,
    row_consistency,
    solve_all,
    solve_row,
)
from qlra.phase_solver import row_tolerance
from qlra.prob_model import PAIRS

import oracles
from conftest import quantum_data, seeds

R2 = 1 / np.sqrt(2)


def _same(a, b, atol=1e-12):
    return np.all(np.abs(np.angle(np.exp(1j * (np.asarray(a) - np.asarray(b))))) <= atol)


def _check_cosines(phi, lam_row, tol=1e-9):
    for p, (i, j) in enumerate(PAIRS):
        assert np.cos(phi[i] - phi[j]) == pytest.approx(lam_row[p], abs=tol)


@given(st.floats(-1, 1))
def test_ansatz_row_is_consistent(mu):
    rep = row_consistency(mu, -mu, 1 - 2 * mu * mu)
    assert rep.consistent
    plus, minus = rep.lhs_candidates
    assert plus == pytest.approx(1 - 2 * mu * mu, abs=1e-12)
    assert minus == pytest.approx(-1.0, abs=1e-12)
    assert rep.residual <= 1e-12


def test_inconsistent_row():
    rep = row_consistency(0.0, 0.0, 0.5)
    assert not rep.consistent and rep.matched_sign == 0
    assert rep.residual == pytest.approx(0.5)
    with pytest.raises(InconsistentRowError) as info:
        solve_row(0.0, 0.0, 0.5, row=2)
    assert info.value.row == 2


def test_row_consistency_domain():
    with pytest.raises(DomainError):
        row_consistency(1.1, 0.0, 0.0)


def test_example_row_phases():
    sols = solve_row(R2, 0.0, -R2)
    assert len(sols) == 2
    expected = [np.array([0, -np.pi / 4, np.pi / 2]), np.array([0, np.pi / 4, -np.pi / 2])]
    for e in expected:
        assert any(_same(s, e) for s in sols)


@given(quantum_data())
def test_recovers_generator_phases(pair):
    inst, d = pair
    t = interference_coefficients(d)
    c = inst.u.conj().T @ inst.psi
    true_phi = np.angle(inst.u * c[None, :])
    for l in range(3):
        sols = solve_row(*t.row(l), tol=1e-8)
        target = true_phi[l] - true_phi[l, 0]
        assert any(_same(s, target, 1e-6) for s in sols)


@given(quantum_data(), st.lists(st.floats(-10, 10), min_size=3, max_size=3))
def test_solutions_reproduce_lambdas(pair, gauge):
    t = interference_coefficients(pair[1])
    for sol in solve_all(t, gauge, tol=1e-8):
        assert np.all((sol.phi >= 0) & (sol.phi < 2 * np.pi))
        for l in range(3):
            _check_cosines(sol.phi[l], t.lam[l], tol=1e-8)


@given(seeds, st.integers(0, 2), st.floats(-3, 3))
def test_gauge_covariance(seed, row, delta):
    t = interference_coefficients(generate(random_instance(seed)))
    g0 = np.zeros(3)
    g1 = g0.copy()
    g1[row] = delta
    a, b = solve_all(t, g0, tol=1e-8), solve_all(t, g1, tol=1e-8)
    assert [s.branches for s in a] == [s.branches for s in b]
    shift = np.zeros((3, 1))
    shift[row] = delta
    for sa, sb in zip(a, b):
        assert _same(sa.phi + shift, sb.phi, 1e-9)


def test_solution_count():
    # mirror images coincide only when every offset is 0 or pi
    assert len(solve_row(1.0, 1.0, 1.0)) == 1
    assert len(solve_row(-1.0, 1.0, -1.0)) == 1
    assert len(solve_row(0.3, 0.3, 1.0)) == 2


def test_candidates_merge_when_sine_product_vanishes():
    rep = row_consistency(1.0, 0.3, 0.3)
    assert rep.lhs_candidates[0] == rep.lhs_candidates[1]
    # the two returned triples are still distinct and both valid
    sols = solve_row(1.0, 0.3, 0.3)
    assert len(sols) == 2
    for s in sols:
        _check_cosines(s, (1.0, 0.3, 0.3))


def test_example1_gives_eight_candidates():
    table, _ = example1()
    sols = solve_all(table, (0, 0, 0))
    assert len(sols) == 8
    assert [s.branches for s in sols][0] == (1, 1, 1)
    assert [s.branches for s in sols][-1] == (-1, -1, -1)
    assert len({s.branches for s in sols}) == 8


def test_ordering_is_deterministic():
    t = interference_coefficients(generate(random_instance(3)))
    a = [s.phi.tobytes() for s in solve_all(t)]
    b = [s.phi.tobytes() for s in solve_all(t)]
    assert a == b


def test_free_phase_for_undefined_lambda():
    lam = np.array([[np.nan, np.nan, 0.5], [0.2, 0.3, np.nan], [0.0, 0.0, 1.0]])
    defined = np.isfinite(lam)
    weight = np.array([[0.0, 0.3, 0.3], [0.3, 0.3, 0.0], [0.1, 0.1, 0.1]])
    lam[2] = [0.6, 0.6, 1.0]
    defined[2] = True
    sols = solve_all(InterferenceTable(lam, defined, weight), (0.5, 0, 0), tol=1e-9)
    for s in sols:
        assert s.free[0].tolist() == [True, False, False]
        assert s.free[1].tolist() == [False, False, True]
        assert s.phi[0, 0] == pytest.approx(0.5)
        assert np.cos(s.phi[0, 1] - s.phi[0, 2]) == pytest.approx(0.5)
        assert np.cos(s.phi[1, 0] - s.phi[1, 1]) == pytest.approx(0.2)


def test_solve_all_rejects_unbounded():
    with pytest.raises(DomainError):
        solve_all(InterferenceTable.from_values(np.full((3, 3), 2.0)))


def test_per_row_tolerance():
    lam = np.array([[R2, 0.0, -R2 + 0.01], [R2, 0.0, -R2], [R2, 0.0, -R2]])
    t = InterferenceTable.from_values(lam)
    with pytest.raises(InconsistentRowError):
        solve_all(t, tol=1e-3)
    assert len(solve_all(t, tol=[0.02, 1e-3, 1e-3])) == 8


@given(st.floats(-0.95, 0.95), st.floats(-0.95, 0.95), st.floats(1e-6, 1e-3), st.floats(1e-6, 1e-3))
def test_row_tolerance_covers_box(l12, l13, e12, e13):
    rng = np.random.default_rng(0)
    tol = row_tolerance(l12, l13, (e12, e13, 0.0))
    plus, _ = row_consistency(l12, l13, 0.0, tol=1.0, domain_tol=0.0).lhs_candidates
    for _ in range(20):
        a = l12 + rng.uniform(-e12, e12)
        b = l13 + rng.uniform(-e13, e13)
        assert row_consistency(a, b, plus, tol=tol * (1 + 1e-9)).consistent


@pytest.mark.parametrize("mu", [R2, -R2])
def test_brute_force_agrees_on_example1(mu):
    table, _ = example1(mu)
    for l in range(3):
        assert oracles.brute_force_phases(table.lam[l]) < 1e-6
