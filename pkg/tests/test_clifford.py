import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rcqm.clifford import (
    I4,
    IDENTITY_OP,
    METRIC,
    V_OP,
    ConjugatingMatrixOp,
    NonRepresentableError,
    alpha_beta,
    build_gamma_bar,
    build_gamma_pd,
    build_spin_and_charge,
    check_clifford_relations,
    check_spin_relations,
    spin_from_gamma_bar,
    spin_tensor,
)


def test_every_exact_relation_holds():
    failed = [name for name, ok in check_clifford_relations() + check_spin_relations() if not ok]
    assert failed == []


def test_pd_anticommutators_elementwise():
    g = build_gamma_pd()
    for mu in range(4):
        for nu in range(4):
            assert np.array_equal(g[mu] @ g[nu] + g[nu] @ g[mu], 2 * METRIC[mu, nu] * I4)


def test_gamma0_gammak_anticommute():
    g = build_gamma_pd()
    for k in (1, 2, 3):
        assert not (g[0] @ g[k] + g[k] @ g[0]).any()


def test_spin_and_charge_tables():
    spin, charge = build_spin_and_charge()
    assert np.array_equal(np.diag(spin.s3).real, [0.5, -0.5, -0.5, 0.5])
    assert np.array_equal(np.diag(charge).real, [-1, -1, 1, 1])


def test_spin_from_gamma_bar_products():
    spin, _ = build_spin_and_charge()
    for a, b in zip(spin_from_gamma_bar(), spin):
        assert np.array_equal(a, b)


def test_gamma_bar_is_v_sandwich():
    g = build_gamma_pd()
    for mu, gb in enumerate(build_gamma_bar()):
        assert (V_OP @ ConjugatingMatrixOp.linear(g[mu]) @ V_OP).equals(gb)


def test_gamma_bar_inverses():
    gb = build_gamma_bar()
    assert (gb[0] @ gb[0]).equals(IDENTITY_OP)
    for l in (1, 2, 3):
        # gb_l = -gb^l, and gb_l^{-1} = -gb_l means gb_l gb_l = -1
        assert (gb[l] @ gb[l]).equals(IDENTITY_OP.scaled(-1))


def test_spin_tensor_antisymmetry():
    s = spin_tensor()
    spin, _ = build_spin_and_charge()
    assert np.array_equal(s, -np.swapaxes(s, 0, 1))
    assert np.array_equal(s[1, 2], spin.s1)
    assert np.array_equal(s[2, 0], spin.s2)
    assert np.array_equal(s[0, 1], spin.s3)


def test_alpha_beta_square_to_one():
    alpha, beta = alpha_beta()
    for a in alpha:
        assert np.array_equal(a @ a, I4)
        assert not (a @ beta + beta @ a).any()


def test_antilinear_scalar_pulls_through_conjugated():
    op = ConjugatingMatrixOp.antilinear(build_gamma_pd()[1])
    psi = np.array([1 + 2j, -1j, 0.5, 3.0])
    assert np.allclose(op(1j * psi), -1j * op(psi))


def test_mixed_composition_not_representable():
    # a linear op that mixes upper and lower components, sandwiched by v from one side only,
    # is representable; composing v after it is not (one column gets both treatments)
    mix = ConjugatingMatrixOp.linear(np.ones((4, 4)))
    with pytest.raises(NonRepresentableError):
        V_OP @ mix


def random_op(draw_mask, seed):
    rng = np.random.default_rng(seed)
    perm = rng.permutation(4)
    phases = rng.choice([1, -1, 1j, -1j], size=4)
    m = np.zeros((4, 4), complex)
    m[perm, np.arange(4)] = phases
    return ConjugatingMatrixOp(m, draw_mask)


@settings(max_examples=60, deadline=None)
@given(
    st.tuples(*[st.booleans()] * 4),
    st.tuples(*[st.booleans()] * 4),
    st.integers(0, 10_000),
    st.integers(0, 10_000),
)
def test_composition_matches_sequential_action(mask_a, mask_b, seed_a, seed_b):
    a, b = random_op(mask_a, seed_a), random_op(mask_b, seed_b)
    composed = a @ b
    rng = np.random.default_rng(seed_a + seed_b)
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    assert np.allclose(composed(psi), a(b(psi)), atol=1e-14)
