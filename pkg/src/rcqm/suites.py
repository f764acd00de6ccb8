"""Verification suites shared by the CLI and the acceptance script.

Each suite takes a :class:`Scenario` and returns a flat list of checks.  The
catalog pairs every suite with the identity it certifies.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .checks import Check, exact
from .clifford import check_clifford_relations, check_spin_relations
from .lattice import Lattice, SpinorField
from .observables import (
    ConservationReport,
    audit_conservation,
    check_cross_realization,
    check_decomposition,
    check_hermiticity,
    check_poincare_algebra,
    check_symmetry_commutators,
)
from .states import (
    AmplitudeSet,
    IllConditionedSplitError,
    amplitudes_from_json,
    amplitudes_to_json,
    field_from_json,
    field_to_json,
    frequency_split,
    synthesize_fw,
    synthesize_sf,
)
from .transforms import (
    PAIRS,
    apply_v,
    apply_w,
    build_fw_kernel,
    check_fw_kernel,
    intertwining_residual,
    verify_intertwining,
    verify_prime_sandwich,
    verify_solution_map,
    w_roundtrip_residual,
)

SUITE_NAMES = ("algebra", "poincare", "conservation", "transforms", "frequency", "roundtrip")

CATALOG = {
    "algebra": "{gamma^mu, gamma^nu} = 2 g^{mu nu} and its conjugation-twisted form, "
    "[s^1, s^2] = i s^3, s = (i/2) gamma-bar products",
    "poincare": "[p_mu, j_rs] = i g_mr p_s - i g_ms p_r, [j, j] relations, [G, omega] + i dG/dt = 0",
    "conservation": "d/dt <f, G f> = 0 for the 10 main and 12 additional generators",
    "transforms": "v(d0 + i omega)v = d0 + i gamma0 omega, W(d0 + i omega)W^-1 = d0 + i H_D, "
    "W^-1(d0 + i H_D)W = d0 + i omega",
    "frequency": "SF solutions carry only e^{-i omega t}; FW positron parts carry e^{+i omega t}",
    "roundtrip": "W^-1 W = 1, v^2 = 1, JSON layout is bit-exact",
}


@dataclass
class Scenario:
    lattice: Lattice
    amplitudes: AmplitudeSet
    times: list[float]
    seed: int = 0
    n_trials: int = 5
    conservation: ConservationReport | None = field(default=None, repr=False)


def run_algebra(sc: Scenario) -> list[Check]:
    rel = check_clifford_relations() + check_spin_relations()
    return [exact(name, ok) for name, ok in rel]


def run_poincare(sc: Scenario) -> list[Check]:
    lat = sc.lattice
    out = check_poincare_algebra(lat, sc.n_trials, sc.seed)
    out += check_symmetry_commutators(lat, sc.n_trials, sc.seed)
    out += check_hermiticity(lat, 2, sc.seed)
    out += check_decomposition(lat, 1, sc.seed)
    return out


def run_conservation(sc: Scenario) -> list[Check]:
    report = audit_conservation(sc.amplitudes, sc.times)
    sc.conservation = report
    out = report.checks("drift_")
    out.append(Check("max_imag_part", report.max_imag, 1e-8))
    out += check_cross_realization(sc.amplitudes, sc.times[0])
    return out


def run_transforms(sc: Scenario) -> list[Check]:
    lat = sc.lattice
    out = check_fw_kernel(lat, 100, sc.seed)
    out += verify_solution_map(lat, sc.n_trials, sc.seed)
    out += verify_prime_sandwich(lat, sc.n_trials, sc.seed)
    for pair in PAIRS:
        out += verify_intertwining(lat, pair, sc.n_trials, seed=sc.seed)
    f = synthesize_sf(sc.amplitudes, sc.times[0])
    kernel = build_fw_kernel(lat)
    for source, target in PAIRS:
        src = f if source == "SF" else _in_picture(sc.amplitudes, source, sc.times[0], kernel)
        res = intertwining_residual(src, source, target, 1.0 / lat.mass, kernel)
        out.append(Check(f"scenario_intertwine_{source}_to_{target}", res, 1e-10))
    return out


def _in_picture(amps: AmplitudeSet, picture: str, t: float, kernel) -> SpinorField:
    if picture == "FW":
        return synthesize_fw(amps, t)
    return apply_w(synthesize_sf(amps, t), "forward", kernel)


def run_frequency(sc: Scenario) -> list[Check]:
    amps = sc.amplitudes
    t0, t1 = sc.times[0], sc.times[1]
    total = amps.norm_squared()
    positron = float(np.sum(np.abs(amps.data[2:]) ** 2) * amps.lattice.k_measure)
    try:
        _, neg_sf = frequency_split(synthesize_sf(amps, t0), synthesize_sf(amps, t1))
        pos_fw, neg_fw = frequency_split(synthesize_fw(amps, t0), synthesize_fw(amps, t1))
    except IllConditionedSplitError:
        return [Check("frequency_split_conditioning", float("inf"), 0.0)]
    return [
        Check("sf_negative_frequency", neg_sf / total, 1e-10),
        Check("fw_negative_equals_positron_norm", abs(neg_fw - positron) / total, 1e-10),
        Check("fw_positive_equals_electron_norm", abs(pos_fw - (total - positron)) / total, 1e-10),
    ]


def run_roundtrip(sc: Scenario) -> list[Check]:
    amps = sc.amplitudes
    f = synthesize_sf(amps, sc.times[0])
    out = [Check("W^-1W=1", w_roundtrip_residual(f), 1e-12)]
    vv = apply_v(apply_v(f))
    out.append(exact("v^2=1", bool(np.array_equal(vv.data, f.data))))
    back = field_from_json(_through_text(field_to_json(f)))
    out.append(exact("field_json_bit_exact", bool(np.array_equal(back.data, f.data)) and back.time == f.time))
    back_amps = amplitudes_from_json(_through_text(amplitudes_to_json(amps)))
    out.append(exact("amplitude_json_bit_exact", bool(np.array_equal(back_amps.data, amps.data))))
    return out


def _through_text(doc: dict) -> dict:
    return json.loads(json.dumps(doc))


RUNNERS: dict[str, Callable[[Scenario], list[Check]]] = {
    "algebra": run_algebra,
    "poincare": run_poincare,
    "conservation": run_conservation,
    "transforms": run_transforms,
    "frequency": run_frequency,
    "roundtrip": run_roundtrip,
}
