"""Batch front end.

    rcqm run --config scenario.json
    rcqm describe

A scenario file is a single JSON object::

    {
      "lattice":    {"dim": 1, "n": 256, "dx": 0.25, "mass": 1.0},
      "amplitudes": {"family": "gaussian", "sigma_k": 0.5,
                     "species": {"a_minus_plus": {"weight": [1, 0], "k_center": [0.3], "x_center": [0]}}},
      "times":      [0.0, 1.0, 2.0],
      "suites":     ["algebra", "transforms"],
      "seed":       0,
      "n_trials":   5,
      "output":     "out"
    }

Amplitude families: ``gaussian`` (one Gaussian per listed species), ``single_mode``
(``{"mode": [n1, ...], "weight": [re, im]}`` per species) and ``custom``
(``{"path": "amps.json"}`` in the amplitude JSON layout).  The combined amplitude
set is normalized to unit norm.  Relative paths resolve against the working
directory.

Exit status: 0 when every check passes, 1 when a suite fails (reports are
still written), 2 for an invalid configuration.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .lattice import Lattice, edge_fraction, nyquist_fraction
from .states import (
    AMPLITUDE_NAMES,
    AmplitudeSet,
    amplitudes_from_json,
    de_broglie,
    field_to_json,
    gaussian_amplitudes,
    load_json,
    save_json,
    synthesize_sf,
)
from .suites import CATALOG, RUNNERS, SUITE_NAMES, Scenario

TAIL_LIMIT = 1e-10


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field_name = field_name


@dataclass
class ScenarioConfig:
    dim: int
    n: int
    dx: float
    mass: float
    amplitudes: dict
    times: list[float]
    suites: list[str]
    seed: int = 0
    n_trials: int = 5
    output: str = "out"

    @classmethod
    def from_dict(cls, doc: dict) -> "ScenarioConfig":
        if not isinstance(doc, dict):
            raise ConfigError("<root>", "config must be a JSON object")
        known = {"lattice", "amplitudes", "times", "suites", "seed", "n_trials", "output"}
        for key in doc:
            if key not in known:
                raise ConfigError(key, "unknown field")
        for key in ("lattice", "amplitudes", "times", "suites"):
            if key not in doc:
                raise ConfigError(key, "missing")
        lat = doc["lattice"]
        if not isinstance(lat, dict):
            raise ConfigError("lattice", "must be an object with dim, n, dx, mass")
        for key in ("dim", "n", "dx", "mass"):
            if key not in lat:
                raise ConfigError(f"lattice.{key}", "missing")
        return cls(
            dim=_int(lat["dim"], "lattice.dim"),
            n=_int(lat["n"], "lattice.n"),
            dx=_float(lat["dx"], "lattice.dx"),
            mass=_float(lat["mass"], "lattice.mass"),
            amplitudes=doc["amplitudes"],
            times=[_float(t, f"times[{i}]") for i, t in enumerate(_list(doc["times"], "times"))],
            suites=list(_list(doc["suites"], "suites")),
            seed=_int(doc.get("seed", 0), "seed"),
            n_trials=_int(doc.get("n_trials", 5), "n_trials"),
            output=str(doc.get("output", "out")),
        )

    def to_dict(self) -> dict:
        return {
            "lattice": {"dim": self.dim, "n": self.n, "dx": self.dx, "mass": self.mass},
            "amplitudes": self.amplitudes,
            "times": self.times,
            "suites": self.suites,
            "seed": self.seed,
            "n_trials": self.n_trials,
            "output": self.output,
        }

    def lattice(self) -> Lattice:
        if self.mass <= 0:
            raise ConfigError("lattice.mass", "must be positive")
        if self.dx <= 0:
            raise ConfigError("lattice.dx", "must be positive")
        try:
            return Lattice(self.dim, self.n, self.dx, self.mass)
        except ValueError as exc:
            name = "lattice.dim" if "dim" in str(exc) else "lattice.n"
            raise ConfigError(name, str(exc)) from exc

    def validate(self) -> tuple[Lattice, AmplitudeSet]:
        if not self.suites:
            raise ConfigError("suites", "at least one suite is required")
        for i, name in enumerate(self.suites):
            if name not in SUITE_NAMES:
                raise ConfigError(f"suites[{i}]", f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")
        if len(set(self.suites)) != len(self.suites):
            raise ConfigError("suites", "duplicate entries")
        if len(set(self.times)) < 3:
            raise ConfigError("times", "need at least 3 distinct times")
        if self.n_trials < 1:
            raise ConfigError("n_trials", "must be >= 1")
        lat = self.lattice()
        amps = build_amplitudes(lat, self.amplitudes)
        check_tails(amps, self.times, self.amplitudes.get("family"))
        return lat, amps


def _list(value, name: str) -> list:
    if not isinstance(value, list):
        raise ConfigError(name, "must be a list")
    return value


def _int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(name, f"must be an integer, got {value!r}")
    return value


def _float(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(name, f"must be a number, got {value!r}")
    return float(value)


def _weight(spec: dict, name: str) -> complex:
    w = spec.get("weight", [1.0, 0.0])
    if not (isinstance(w, list) and len(w) == 2):
        raise ConfigError(f"{name}.weight", "must be [re, im]")
    return complex(_float(w[0], f"{name}.weight"), _float(w[1], f"{name}.weight"))


def _vector(spec: dict, key: str, dim: int, name: str) -> np.ndarray:
    vec = spec.get(key, [0.0] * dim)
    if not (isinstance(vec, list) and len(vec) == dim):
        raise ConfigError(f"{name}.{key}", f"must list {dim} numbers")
    return np.array([_float(v, f"{name}.{key}") for v in vec])


def build_amplitudes(lattice: Lattice, doc: dict) -> AmplitudeSet:
    """Amplitude set described by the ``amplitudes`` block, normalized to unit norm."""
    if not isinstance(doc, dict):
        raise ConfigError("amplitudes", "must be an object")
    family = doc.get("family")
    if family == "custom":
        path = doc.get("path")
        if not isinstance(path, str):
            raise ConfigError("amplitudes.path", "custom family needs a file path")
        try:
            amps = amplitudes_from_json(load_json(path))
        except (OSError, ValueError, KeyError) as exc:
            raise ConfigError("amplitudes.path", str(exc)) from exc
        if amps.lattice != lattice:
            raise ConfigError("amplitudes.path", "file lattice differs from the configured lattice")
    elif family in ("gaussian", "single_mode"):
        species = doc.get("species")
        if not isinstance(species, dict) or not species:
            raise ConfigError("amplitudes.species", "list at least one species")
        amps = AmplitudeSet.zeros(lattice)
        for key, spec in species.items():
            name = f"amplitudes.species.{key}"
            if key not in AMPLITUDE_NAMES:
                raise ConfigError(name, f"unknown species; choose from {', '.join(AMPLITUDE_NAMES)}")
            if not isinstance(spec, dict):
                raise ConfigError(name, "must be an object")
            comp = AMPLITUDE_NAMES.index(key)
            weight = _weight(spec, name)
            if family == "gaussian":
                sigma = _float(spec.get("sigma_k", doc.get("sigma_k", 0.5)), f"{name}.sigma_k")
                if sigma <= 0:
                    raise ConfigError(f"{name}.sigma_k", "must be positive")
                spinor = np.zeros(4, dtype=complex)
                spinor[comp] = weight
                amps = amps + gaussian_amplitudes(
                    lattice, spinor, _vector(spec, "k_center", lattice.dim, name),
                    _vector(spec, "x_center", lattice.dim, name), sigma,
                )
            else:
                mode = spec.get("mode")
                if not (isinstance(mode, list) and len(mode) == lattice.dim):
                    raise ConfigError(f"{name}.mode", f"must list {lattice.dim} integer bin indices")
                mode = tuple(_int(m, f"{name}.mode") for m in mode)
                if any(abs(m) > lattice.n // 2 for m in mode):
                    raise ConfigError(f"{name}.mode", f"bin index outside +-{lattice.n // 2}")
                amps = amps + weight * de_broglie(lattice, mode, comp)
    else:
        raise ConfigError("amplitudes.family", f"must be gaussian, single_mode or custom, got {family!r}")
    if amps.norm_squared() == 0:
        raise ConfigError("amplitudes", "all amplitudes vanish")
    return amps.normalized()


def check_tails(amps: AmplitudeSet, times, family: str | None = None) -> None:
    """Spectral mass near Nyquist and probability near the box edge must stay below 1e-10.

    A single lattice mode is exactly periodic and fills the box by construction,
    so only the Nyquist rule applies to that family.
    """
    f = synthesize_sf(amps, 0.0)
    frac = nyquist_fraction(f)
    if frac >= TAIL_LIMIT:
        raise ConfigError("amplitudes", f"spectral mass {frac:.2e} within 2 bins of Nyquist (limit {TAIL_LIMIT:g})")
    if family == "single_mode":
        return
    for t in times:
        frac = edge_fraction(synthesize_sf(amps, t))
        if frac >= TAIL_LIMIT:
            raise ConfigError("amplitudes", f"probability {frac:.2e} within 10% of the box edge at t={t:g} (limit {TAIL_LIMIT:g})")


# -- running ---------------------------------------------------------------------


def run(config: ScenarioConfig, log=print) -> int:
    lat, amps = config.validate()
    out_dir = Path(config.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    scenario = Scenario(lat, amps, config.times, config.seed, config.n_trials)

    suites = {}
    for name in config.suites:
        checks = RUNNERS[name](scenario)
        passed = all(c.passed for c in checks)
        suites[name] = {"passed": passed, "checks": [c.to_dict() for c in checks]}
        n_fail = sum(not c.passed for c in checks)
        log(f"{name:13s} {'PASS' if passed else 'FAIL'}  {len(checks) - n_fail}/{len(checks)} checks")

    ok = all(s["passed"] for s in suites.values())
    report = {"config": config.to_dict(), "passed": ok, "suites": suites}
    (out_dir / "report.json").write_text(json.dumps(report, indent=2) + "\n")
    if scenario.conservation is not None:
        (out_dir / "conservation.csv").write_text(scenario.conservation.to_csv())
    snap_dir = out_dir / "snapshots"
    snap_dir.mkdir(exist_ok=True)
    for i, t in enumerate(config.times):
        save_json(field_to_json(synthesize_sf(amps, t)), snap_dir / f"sf_{i:03d}.json")
    return 0 if ok else 1


def describe() -> str:
    width = max(len(n) for n in SUITE_NAMES)
    return "\n".join(f"{name:{width}s}  {CATALOG[name]}" for name in SUITE_NAMES)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="rcqm", description="Spin-1/2 doublet verification suites.")
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="run the suites listed in a scenario file")
    run_p.add_argument("--config", required=True, help="path to the scenario JSON")
    sub.add_parser("describe", help="list suites and the identities they certify")
    args = parser.parse_args(argv)

    if args.command == "describe":
        print(describe())
        return 0
    try:
        doc = json.loads(Path(args.config).read_text())
    except OSError as exc:
        print(f"config error: --config: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"config error: <root>: not valid JSON ({exc})", file=sys.stderr)
        return 2
    try:
        config = ScenarioConfig.from_dict(doc)
        return run(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
