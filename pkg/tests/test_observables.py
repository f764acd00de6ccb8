import csv
import io

import numpy as np
import pytest

from rcqm.lattice import Lattice, SpinorField
from rcqm.observables import (
    QUANTITIES,
    NormalizationError,
    UnavailableGeneratorError,
    amplitude_means,
    audit_conservation,
    available,
    build_generators,
    check_cross_realization,
    check_decomposition,
    check_hermiticity,
    check_poincare_algebra,
    check_symmetry_commutators,
    commutator_residual,
    mean,
    means,
    parse_label,
    poincare_rhs,
)
from rcqm.states import AmplitudeSet, de_broglie, gaussian_amplitudes, synthesize_sf

from conftest import packet


def test_energy_on_de_broglie_mode(lat1):
    f = synthesize_sf(de_broglie(lat1, (13,), 1))
    w = np.hypot(13 * lat1.dk, lat1.mass)
    out = build_generators(lat1).apply("p0", f)
    np.testing.assert_allclose(out.data, w * f.data, atol=1e-12)


def test_momentum_sign_convention(lat1):
    f = synthesize_sf(de_broglie(lat1, (13,), 1))
    out = build_generators(lat1).apply("p1", f)
    # covariant p_1 = i d_1 gives -k^1 on e^{i k x}
    np.testing.assert_allclose(out.data, -13 * lat1.dk * f.data, atol=1e-12)


def test_breve_spin_vanishes_at_rest():
    lat = Lattice(dim=3, n=8, dx=0.5)
    f = synthesize_sf(de_broglie(lat, (0, 0, 0), 0) + de_broglie(lat, (0, 0, 0), 3))
    gens = build_generators(lat)
    for l in (1, 2, 3):
        assert not np.abs(gens.apply(f"sb{l}", f).data).max() > 1e-15


def test_j12_of_symmetric_spin_up_packet():
    lat = Lattice(dim=3, n=24, dx=0.6)
    amps = gaussian_amplitudes(lat, [1, 0, 0, 0], sigma_k=0.6).normalized()
    f = synthesize_sf(amps)
    m = means(f, build_generators(lat), ("J12", "M12", "S12"))
    assert m["J12"] == pytest.approx(0.5, abs=1e-10)
    assert m["S12"] == pytest.approx(0.5, abs=1e-12)
    assert abs(m["M12"]) < 1e-10


def test_charge_and_spin_means(lat1, rng):
    amps = packet(lat1, rng)
    electron = amps.data.copy()
    electron[2:] = 0
    f = synthesize_sf(AmplitudeSet(lat1, electron).normalized())
    gens = build_generators(lat1)
    assert mean(f, gens, "g") == pytest.approx(-1.0, abs=1e-12)
    d1 = gaussian_amplitudes(lat1, [1, 0, 0, 0], [0.2], [0.0], 0.5).normalized()
    assert mean(synthesize_sf(d1), gens, "s12") == pytest.approx(0.5, abs=1e-12)


def test_energy_mean_matches_amplitude_sum(lat1, rng):
    amps = packet(lat1, rng)
    direct = np.sum(lat1.omega * np.abs(amps.data) ** 2) * lat1.k_measure
    assert abs(mean(synthesize_sf(amps, 1.3), build_generators(lat1, t=1.3), "p0") - direct) <= 1e-10


def test_single_bin_momentum():
    lat = Lattice(dim=2, n=16, dx=0.5)
    amps = de_broglie(lat, (3, -2), 0).normalized()
    m = amplitude_means(amps, ("P0", "P1", "P2"))
    # covariant components: P_l = k_l = -k^l
    assert m["P1"] == pytest.approx(-3 * lat.dk, abs=1e-14)
    assert m["P2"] == pytest.approx(2 * lat.dk, abs=1e-14)
    assert m["P0"] == pytest.approx(np.hypot(np.hypot(3, 2) * lat.dk, lat.mass), abs=1e-14)


def test_cross_realization(lat1, lat2, rng):
    for lat in (lat1, lat2):
        checks = check_cross_realization(packet(lat, rng), t=0.0)
        assert all(c.passed for c in checks), [c for c in checks if not c.passed]
    later = check_cross_realization(packet(lat1, rng), t=1.5)
    assert all(c.passed for c in later if c.name.startswith("x_vs_k"))


def test_additivity_of_means(lat2, rng):
    f = synthesize_sf(packet(lat2, rng), 0.6)
    m = means(f, build_generators(lat2, t=0.6))
    assert abs(m["J12"] - m["M12"] - m["S12"]) < 1e-14
    for l in (1, 2):
        assert abs(m[f"J0{l}"] - m[f"M0{l}"] + m[f"Sb{l}"]) < 1e-14


def test_decomposition_and_spin_orbit_independence(lat2):
    checks = check_decomposition(lat2, n_trials=1)
    assert checks and all(c.passed for c in checks)


@pytest.mark.parametrize("fixture", ["lat1", "lat2"])
def test_hermiticity(fixture, request):
    checks = check_hermiticity(request.getfixturevalue(fixture), n_trials=1)
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]


def test_imaginary_parts_are_tiny(lat2, rng):
    f = synthesize_sf(packet(lat2, rng), 0.5)
    vals = means(f, build_generators(lat2, t=0.5))
    assert max(abs(v.imag) for v in vals.values()) < 1e-8


def test_normalization_guard(lat1, rng):
    f = synthesize_sf(packet(lat1, rng)) * 2.0
    gens = build_generators(lat1)
    with pytest.raises(NormalizationError):
        mean(f, gens, "p0")
    assert mean(f, gens, "p0", normalized=False).real > 0


def test_availability_by_dimension():
    assert available("j01", 1) and available("s23", 1) and available("p3", 1)
    assert not available("j12", 1) and not available("m02", 1)
    assert available("j12", 2) and not available("j23", 2)
    assert all(available(q.lower(), 3) for q in QUANTITIES)
    lat = Lattice(dim=1, n=16, dx=0.5)
    f = SpinorField(lat, np.zeros(lat.field_shape))
    with pytest.raises(UnavailableGeneratorError):
        build_generators(lat).apply("j12", f)


def test_parse_label():
    assert parse_label("sb2") == ("sb", (2,))
    assert parse_label("j03") == ("j", (0, 3))
    with pytest.raises(KeyError):
        parse_label("q1")


def test_poincare_rhs_examples():
    assert poincare_rhs("p1", "p2") == []
    # [p_1, j_12] = i g_11 p_2 = -i p_2
    assert poincare_rhs("p1", "j12") == [(-1j, "p2")]
    # [j_01, j_02] = -i j_12
    assert poincare_rhs("j01", "j02") == [(-1j, "j12")]


def test_momenta_commute_exactly(lat2, rng):
    f = synthesize_sf(packet(lat2, rng))
    assert commutator_residual(build_generators(lat2), "p1", "p2", f, []) <= 1e-12


@pytest.mark.parametrize("fixture", ["lat1", "lat2"])
def test_poincare_algebra(fixture, request):
    checks = check_poincare_algebra(request.getfixturevalue(fixture), n_trials=2)
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]


def test_boost_boost_relation_fails_with_wrong_sign(lat2, rng):
    f = synthesize_sf(packet(lat2, rng))
    gens = build_generators(lat2)
    good = commutator_residual(gens, "j01", "j02", f, [(-1j, "j12")])
    bad = commutator_residual(gens, "j01", "j02", f, [(1j, "j12")])
    assert good <= 1e-6 < bad


def test_symmetry_commutators(lat1, lat2):
    for lat in (lat1, lat2):
        checks = check_symmetry_commutators(lat, n_trials=1)
        assert all(c.passed for c in checks), [c for c in checks if not c.passed]
    exact = {c.name: c.residual for c in check_symmetry_commutators(lat1, n_trials=1)}
    assert exact["[p1,omega]_0"] <= 1e-12
    assert exact["[s12,omega]_0"] <= 1e-12


@pytest.mark.slow
def test_poincare_algebra_3d(lat3):
    checks = check_poincare_algebra(lat3, n_trials=1)
    assert len(checks) == 45
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]


# -- conservation audit ------------------------------------------------------------


def test_audit_random_packets(lat1, lat2, rng):
    for lat in (lat1, lat2):
        report = audit_conservation(packet(lat, rng, t_max=2.0), [0.0, 1.0, 2.0])
        assert report.passed, report.drift


def test_audit_stationary_state(lat1):
    amps = (de_broglie(lat1, (0,), 0) + 0.5j * de_broglie(lat1, (0,), 3)).normalized()
    report = audit_conservation(amps, [0.0, 0.77, 2.1])
    assert max(report.drift.values()) <= 1e-12


def test_boost_negative_control(lat1):
    amps = gaussian_amplitudes(lat1, [1, 0, 0, 0], [0.5], [0.0], 0.5).normalized()
    good = audit_conservation(amps, [0.0, 1.0, 2.0])
    bad = audit_conservation(amps, [0.0, 1.0, 2.0], explicit_time=False)
    assert good.passed and not bad.passed
    p1 = abs(means(synthesize_sf(amps), build_generators(lat1), ("P1",))["P1"])
    assert bad.drift["J01"] >= 0.99 * p1 * 2.0
    assert not bad.verdicts["J01"] and bad.verdicts["P0"]


def test_audit_needs_three_times(lat1, rng):
    with pytest.raises(ValueError):
        audit_conservation(packet(lat1, rng), [0.0, 1.0, 1.0])


def test_audit_k_realization(lat1, rng):
    report = audit_conservation(packet(lat1, rng, t_max=2.0), [0.0, 1.0, 2.0], realization="k")
    assert report.passed


def test_report_serialization(lat1, rng):
    report = audit_conservation(packet(lat1, rng, t_max=2.0), [0.0, 1.0, 2.0])
    rows = list(csv.reader(io.StringIO(report.to_csv())))
    assert rows[0] == ["time"] + [q for q in QUANTITIES if q in report.names]
    assert rows[0][1:3] == ["P0", "P1"]
    assert len(rows) == 4
    doc = report.to_json()
    assert set(doc["quantities"]) == set(report.names)
    assert all(q["pass"] for q in doc["quantities"].values())


def test_available_quantities_per_dimension(lat1, lat2, rng):
    assert len(audit_conservation(packet(lat1, rng), [0, 1, 2]).names) == 14
    assert len(audit_conservation(packet(lat2, rng), [0, 1, 2]).names) == 16
