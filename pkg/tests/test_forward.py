import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from qlra import (
    AnsatzParams,
    DegenerateContextError,
    DomainError,
    QuantumInstance,
    admissible_mu_roots,
    ansatz_family,
    ansatz_mu_roots,
    check_double_stochastic,
    example1,
    generate,
    interference_coefficients,
    mub_instance,
    mub_marginals_closed_form,
    random_instance,
    row_consistency,
    sorkin_residual,
    validate,
)
from qlra.forward import MUB_BASIS, ansatz_lambda12, ansatz_probabilities

import oracles
from conftest import seeds

angles = st.floats(-2 * np.pi, 2 * np.pi)
positive = st.floats(0.05, 10.0)


@given(seeds)
def test_generate_matches_projector_oracle(seed):
    inst = random_instance(seed)
    d = generate(inst)
    p_b, p_a, cond, pair_cond = oracles.born_tables(inst.psi, inst.u)
    np.testing.assert_allclose(d.p_b, p_b, atol=1e-12)
    np.testing.assert_allclose(d.p_a, p_a, atol=1e-12)
    np.testing.assert_allclose(d.cond, cond, atol=1e-12)
    np.testing.assert_allclose(d.pair_cond, pair_cond, atol=1e-10)


@given(seeds)
def test_generated_data_is_valid(seed):
    d = generate(random_instance(seed))
    assert validate(d).passed
    assert check_double_stochastic(d).passed
    np.testing.assert_allclose(sorkin_residual(d), 0.0, atol=1e-12)
    assert np.abs(interference_coefficients(d).lam).max() <= 1 + 1e-12


def test_random_instance_is_reproducible():
    a, b = random_instance(7), random_instance(7)
    assert np.array_equal(a.psi, b.psi) and np.array_equal(a.u, b.u)
    assert not np.array_equal(a.psi, random_instance(8).psi)


def test_instance_validation():
    with pytest.raises(ValueError, match="normalized"):
        QuantumInstance([1, 1, 0], np.eye(3))
    with pytest.raises(ValueError, match="unitary"):
        QuantumInstance([1, 0, 0], np.ones((3, 3)))


def test_degenerate_context():
    inst = QuantumInstance([1, 0, 0], np.eye(3))
    with pytest.raises(DegenerateContextError):
        generate(inst)
    d = generate(inst, allow_degenerate=True)
    np.testing.assert_allclose(d.pair_cond[:, 2], [0, 0.5, 0.5])
    assert validate(d).passed
    np.testing.assert_allclose(sorkin_residual(d), 0.0, atol=1e-15)


def test_mub_basis_is_unbiased_and_unitary():
    np.testing.assert_allclose(MUB_BASIS.conj().T @ MUB_BASIS, np.eye(3), atol=1e-15)
    np.testing.assert_allclose(np.abs(MUB_BASIS) ** 2, 1 / 3, atol=1e-15)


@given(angles, angles)
def test_mub_marginals_closed_form(g1, g2):
    d = generate(mub_instance(g1, g2), allow_degenerate=True)
    closed = mub_marginals_closed_form(g1, g2)
    np.testing.assert_allclose(closed, d.p_a, atol=1e-12)
    assert closed.sum() == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(d.p_b, 1 / 3, atol=1e-15)


def test_mub_marginals_at_zero():
    np.testing.assert_allclose(mub_marginals_closed_form(0.0, 0.0), 1 / 3, atol=1e-15)


@given(st.floats(-2.0, 2.0))
def test_mub_pair_closed_forms(g):
    d = generate(mub_instance(g, g))
    assert d.pair(0, 0, 2) == pytest.approx(2 / 3, abs=1e-12)
    assert d.pair(1, 0, 2) == pytest.approx(1 / 6, abs=1e-12)
    assert d.pair(2, 0, 2) == pytest.approx(1 / 6, abs=1e-12)
    np.testing.assert_allclose(d.cond, 1 / 3, atol=1e-15)


def test_mu_roots_special_values():
    plus, minus = ansatz_mu_roots(2.0, 2.0)
    assert plus == pytest.approx(1 / np.sqrt(2)) and minus == pytest.approx(-1 / np.sqrt(2))
    plus, minus = ansatz_mu_roots(3.0, 2.0)
    assert plus == pytest.approx(0.5) and minus == pytest.approx(-1.0)


def test_admissible_rule():
    assert admissible_mu_roots(1.0, 1.5) == (True, True)
    assert admissible_mu_roots(3.0, 1.0) == (True, False)
    assert admissible_mu_roots(1.0, 3.0) == (False, True)


@given(positive, positive)
def test_ansatz_probabilities_normalized(x, y):
    p = ansatz_probabilities(x, y)
    assert p.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.sqrt(p[0] / p[1]) == pytest.approx(x)
    assert np.sqrt(p[0] / p[2]) == pytest.approx(y)


def test_ansatz_recovers_mu_triple():
    mu = 1 / np.sqrt(2)
    table, _ = ansatz_family(AnsatzParams(1.3, 1.3, -mu, sign12=1))
    np.testing.assert_allclose(table.lam[0], [mu, -mu, 1 - 2 * mu * mu], atol=1e-12)


@given(positive, positive, st.floats(-1, 1), st.sampled_from([1, -1]))
def test_ansatz_born_relation(x, y, v, sign):
    try:
        table, data = ansatz_family(AnsatzParams(x, y, v, sign12=sign))
    except DomainError:
        assume(False)
    for l in range(3):
        l12, l13, l23 = table.lam[l]
        assert y * l12 + x * l13 + l23 == pytest.approx(0.0, abs=1e-12)
        assert row_consistency(l12, l13, l23, tol=1e-9).consistent


def test_ansatz_rejects_negative_radicand():
    with pytest.raises(DomainError):
        ansatz_lambda12(5.0, 0.1, 0.9)


def test_ansatz_checks_requested_branch():
    t, _ = ansatz_family(AnsatzParams(1.0, 1.0, -0.3))
    sign = row_consistency(*t.lam[0]).matched_sign
    ansatz_family(AnsatzParams(1.0, 1.0, -0.3, sign23=sign))
    with pytest.raises(DomainError, match="branch"):
        ansatz_family(AnsatzParams(1.0, 1.0, -0.3, sign23=-sign))


def test_ansatz_params_validation():
    with pytest.raises(ValueError):
        AnsatzParams(-1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        AnsatzParams(1.0, 1.0, 1.5)


@pytest.mark.parametrize("mu", [1 / np.sqrt(2), -1 / np.sqrt(2)])
def test_example1_data(mu):
    table, data = example1(mu)
    assert validate(data).passed
    np.testing.assert_allclose(data.p_a, 1 / 3)
    np.testing.assert_allclose(interference_coefficients(data).lam, table.lam, atol=1e-15)
    for l in range(3):
        assert row_consistency(*table.lam[l]).consistent
