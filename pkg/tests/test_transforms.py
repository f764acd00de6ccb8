import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rcqm.evolve import evolve
from rcqm.lattice import Lattice, SpinorField, to_momentum
from rcqm.states import de_broglie, gaussian_amplitudes, synthesize_fw, synthesize_sf
from rcqm.transforms import (
    PAIRS,
    Jet,
    RealizationError,
    apply_fw_kernel,
    apply_v,
    apply_w,
    build_fw_kernel,
    check_fw_kernel,
    conjugate_sandwich,
    naive_w,
    prime_operator,
    verify_intertwining,
    verify_prime_sandwich,
    verify_solution_map,
    w_roundtrip_residual,
)

from conftest import packet


def test_v_fixes_real_fields(lat1, rng):
    real = SpinorField(lat1, rng.normal(size=lat1.field_shape))
    assert np.array_equal(apply_v(real).data, real.data)


def test_v_conjugates_lower_block_only(lat1):
    g = np.exp(-lat1.x_axis**2)
    f = np.zeros(lat1.field_shape, complex)
    f[3] = 1j * g
    f[0] = 1j * g
    out = apply_v(SpinorField(lat1, f)).data
    np.testing.assert_array_equal(out[3], -1j * g)
    np.testing.assert_array_equal(out[0], 1j * g)


def test_v_is_antilinear_on_lower_block(lat1, rng):
    f = synthesize_sf(packet(lat1, rng))
    lhs = apply_v(f * 1j).data
    rhs = apply_v(f).data
    np.testing.assert_allclose(lhs[:2], 1j * rhs[:2], atol=0)
    np.testing.assert_allclose(lhs[2:], -1j * rhs[2:], atol=0)


def test_v_is_an_involution_and_isometry(lat1, rng):
    f = synthesize_sf(packet(lat1, rng))
    assert np.array_equal(apply_v(apply_v(f)).data, f.data)
    assert apply_v(f).norm() == f.norm()


def test_v_reflects_momentum_of_lower_block(lat1):
    f = synthesize_sf(de_broglie(lat1, (9,), 2) + de_broglie(lat1, (5,), 0))
    spec = to_momentum(apply_v(f)).data
    lower = np.flatnonzero(np.abs(spec[2]) > 1e-6)
    upper = np.flatnonzero(np.abs(spec[0]) > 1e-6)
    assert list(lat1.mode_index[lower]) == [-9]
    assert list(lat1.mode_index[upper]) == [5]


def test_v_needs_position_realization(lat1, rng):
    with pytest.raises(RealizationError):
        apply_v(to_momentum(synthesize_sf(packet(lat1, rng))))


def test_v_swaps_picture_tags(lat1, rng):
    f = synthesize_sf(packet(lat1, rng))
    assert apply_v(f).picture == "FW"
    assert apply_v(apply_v(f)).picture == "SF"


def test_v_maps_sf_solution_to_fw_solution(lat1, rng):
    amps = packet(lat1, rng)
    for t in (0.0, 0.7, 3.0):
        diff = apply_v(synthesize_sf(amps, t)) - synthesize_fw(amps, t)
        assert diff.norm() <= 1e-12


def test_sandwich_of_identity_and_of_i(lat1, rng):
    f = synthesize_sf(packet(lat1, rng))
    assert np.array_equal(conjugate_sandwich(lambda x: x)(f).data, f.data)
    out = conjugate_sandwich(lambda x: x * 1j)(f).data
    np.testing.assert_allclose(out[:2], 1j * f.data[:2], atol=0)
    np.testing.assert_allclose(out[2:], -1j * f.data[2:], atol=0)


def test_sandwich_of_sf_prime_form_is_fw_prime_form(lat1, rng):
    jet = Jet(synthesize_sf(packet(lat1, rng)), synthesize_sf(packet(lat1, rng)))
    lhs = conjugate_sandwich(prime_operator("SF"))(jet)
    rhs = prime_operator("FW")(jet)
    assert (lhs - rhs).norm() <= 1e-10 * jet.value.norm()
    # the Hermitian omega itself does not survive the sandwich as gamma0 omega
    wrong = prime_operator("SF")(jet)
    assert (lhs - wrong).norm() > 1e-3


def test_prime_forms_annihilate_solutions(lat1, rng):
    amps = packet(lat1, rng)
    for picture, synth in (("SF", synthesize_sf), ("FW", synthesize_fw)):
        f = synth(amps, 0.4)
        rate = (synth(amps, 0.4 + 1e-4) - synth(amps, 0.4 - 1e-4)) * (1 / 2e-4)
        assert prime_operator(picture)(Jet(f, rate)).norm() < 1e-6


def test_all_sandwich_identities(lat1):
    assert all(c.passed for c in verify_prime_sandwich(lat1, n_trials=3))


# -- FW kernel ------------------------------------------------------------------


def test_kernel_is_identity_at_rest(lat1):
    kernel = build_fw_kernel(lat1)
    np.testing.assert_allclose(kernel.plus_matrices[..., 0], np.eye(4), atol=1e-15)
    np.testing.assert_allclose(kernel.minus_matrices[..., 0], np.eye(4), atol=1e-15)


@pytest.mark.parametrize("dim,n", [(1, 64), (3, 12)])
def test_kernel_identities(dim, n):
    checks = check_fw_kernel(Lattice(dim=dim, n=n, dx=0.4), n_modes=100)
    assert all(c.passed for c in checks), checks


def test_kernel_product_on_whole_grid():
    lat = Lattice(dim=2, n=16, dx=0.3)
    k = build_fw_kernel(lat)
    vp = np.moveaxis(k.plus_matrices, (0, 1), (-2, -1))
    vm = np.moveaxis(k.minus_matrices, (0, 1), (-2, -1))
    assert np.abs(vp @ vm - np.eye(4)).max() < 1e-12


# -- W ----------------------------------------------------------------------------


def test_w_round_trip(lat1, rng):
    f = synthesize_sf(packet(lat1, rng))
    assert w_roundtrip_residual(f) <= 1e-12
    psi = apply_w(f)
    assert psi.picture == "Dirac"
    assert abs(psi.norm() - f.norm()) <= 1e-12


def test_w_keeps_caller_realization(lat1, rng):
    f = to_momentum(synthesize_sf(packet(lat1, rng)))
    assert apply_w(f).realization == "momentum"


def test_w_close_to_v_for_slow_packet(lat1):
    amps = gaussian_amplitudes(lat1, [1, 0.5j, -0.3, 0.2], sigma_k=0.02).normalized()
    f = synthesize_sf(amps)
    # V+- = 1 + O(k/m); the packet's momenta are of order sigma_k
    assert (apply_w(f) - apply_v(f)).norm() < 0.05


def test_naive_w_is_wrong(lat1, rng):
    f = synthesize_sf(packet(lat1, rng))
    assert (naive_w(f) - apply_w(f)).norm() > 1e-2 * f.norm()


def test_w_intertwines_with_dirac_evolution(lat1, rng):
    f = synthesize_sf(packet(lat1, rng))
    lhs = apply_w(evolve(f, "SF", 1.0))
    rhs = evolve(apply_w(f), "Dirac", 1.0)
    assert (lhs - rhs).norm() <= 1e-10


def test_fw_kernel_maps_fw_to_dirac(lat1, rng):
    amps = packet(lat1, rng)
    psi = apply_fw_kernel(synthesize_fw(amps, 0.0), "+")
    lhs = apply_fw_kernel(synthesize_fw(amps, 1.4), "+")
    assert (evolve(psi, "Dirac", 1.4) - lhs).norm() <= 1e-10


@pytest.mark.parametrize("pair", list(PAIRS))
def test_intertwining_all_pairs(lat1, pair):
    checks = verify_intertwining(lat1, pair, n_trials=3)
    assert all(c.passed for c in checks), checks


def test_solution_map_checks(lat1):
    assert all(c.passed for c in verify_solution_map(lat1, n_trials=4))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31), st.floats(0.1, 5.0))
def test_round_trip_property(seed, mass):
    lat = Lattice(dim=1, n=64, dx=0.5, mass=mass)
    f = synthesize_sf(packet(lat, np.random.default_rng(seed)))
    assert w_roundtrip_residual(f) <= 1e-12
