"""General solutions built from momentum-spin amplitudes, and their inverses.

Amplitude ordering follows the orts d1..d4::

    A(k) = (a^-_+, a^-_-, a^+_-, a^+_+)

electron with spin projection +1/2, -1/2, then positron with -1/2, +1/2.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .lattice import Lattice, LatticeMismatchError, SpinorField, to_momentum

AMPLITUDE_NAMES = ("a_minus_plus", "a_minus_minus", "a_plus_minus", "a_plus_plus")


class IllConditionedSplitError(ValueError):
    """The two-time frequency split is singular for a populated mode."""


@dataclass(frozen=True, eq=False)
class AmplitudeSet:
    """Four time-independent amplitude functions on the momentum grid (FFT order)."""

    lattice: Lattice
    data: np.ndarray

    def __post_init__(self):
        data = np.array(self.data, dtype=complex)
        self.lattice.check(data)
        data.flags.writeable = False
        object.__setattr__(self, "data", data)

    @classmethod
    def zeros(cls, lattice: Lattice) -> "AmplitudeSet":
        return cls(lattice, np.zeros(lattice.field_shape, dtype=complex))

    @property
    def a_minus_plus(self) -> np.ndarray:
        return self.data[0]

    @property
    def a_minus_minus(self) -> np.ndarray:
        return self.data[1]

    @property
    def a_plus_minus(self) -> np.ndarray:
        return self.data[2]

    @property
    def a_plus_plus(self) -> np.ndarray:
        return self.data[3]

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.data) ** 2) * self.lattice.k_measure)

    def normalized(self) -> "AmplitudeSet":
        return AmplitudeSet(self.lattice, self.data / np.sqrt(self.norm_squared()))

    def __add__(self, other: "AmplitudeSet") -> "AmplitudeSet":
        return AmplitudeSet(self.lattice, self.data + other.data)

    def __mul__(self, scalar: complex) -> "AmplitudeSet":
        return AmplitudeSet(self.lattice, self.data * scalar)

    __rmul__ = __mul__


def reflect_momentum(values: np.ndarray, dim: int) -> np.ndarray:
    """g(k) -> g(-k) on FFT-ordered trailing axes (mode n -> -n mod N)."""
    axes = tuple(range(-dim, 0))
    return np.roll(np.flip(values, axis=axes), 1, axis=axes)


def _check_grid(amps: AmplitudeSet, lattice: Lattice | None) -> Lattice:
    if lattice is not None and lattice != amps.lattice:
        raise LatticeMismatchError("amplitudes live on a different lattice")
    return amps.lattice


def synthesize_sf(amps: AmplitudeSet, t: float = 0.0, lattice: Lattice | None = None) -> SpinorField:
    """Schroedinger-Foldy solution at time ``t``; every mode carries e^{-i omega t}."""
    lat = _check_grid(amps, lattice)
    phase = np.exp(-1j * lat.omega * t)
    return SpinorField(lat, lat.inverse(phase * amps.data), "position", t, "SF")


def synthesize_fw(amps: AmplitudeSet, t: float = 0.0, lattice: Lattice | None = None) -> SpinorField:
    """Foldy-Wouthuysen solution at time ``t``.

    Electron components as in the SF solution; positron components are built
    from conjugated amplitudes on the phase e^{+i(omega t - k.x)}.
    """
    lat = _check_grid(amps, lattice)
    spec = np.empty(lat.field_shape, dtype=complex)
    spec[:2] = np.exp(-1j * lat.omega * t) * amps.data[:2]
    # sum_k e^{-ik.x} b(k) = sum_k e^{+ik.x} b(-k)
    spec[2:] = np.exp(1j * lat.omega * t) * reflect_momentum(np.conj(amps.data[2:]), lat.dim)
    return SpinorField(lat, lat.inverse(spec), "position", t, "FW")


def analyze_sf(field: SpinorField, t: float | None = None) -> AmplitudeSet:
    """Amplitudes of an SF solution snapshot taken at time ``t`` (default: field.time)."""
    t = field.time if t is None else t
    lat = field.lattice
    spec = to_momentum(field).data
    return AmplitudeSet(lat, np.exp(1j * lat.omega * t) * spec)


def de_broglie(lattice: Lattice, mode: tuple[int, ...], component: int) -> AmplitudeSet:
    """Single-bin amplitude set selecting grid momentum ``mode`` (signed indices) and ort d_A.

    The bin height is 1/dk^d, the lattice stand-in for a delta function, so the
    synthesized field is exactly (2 pi)^{-d/2} e^{-i omega t + i k.x} d_A.
    """
    if len(mode) != lattice.dim:
        raise ValueError(f"mode needs {lattice.dim} indices, got {mode}")
    data = np.zeros(lattice.field_shape, dtype=complex)
    idx = tuple(int(m) % lattice.n for m in mode)
    data[(component,) + idx] = 1.0 / lattice.k_measure
    return AmplitudeSet(lattice, data)


def mode_momentum(lattice: Lattice, mode: tuple[int, ...]) -> np.ndarray:
    return np.array([m * lattice.dk for m in mode])


def frequency_split(first: SpinorField, second: SpinorField, min_sine: float = 1e-6) -> tuple[float, float]:
    """Squared norms of the e^{-i omega t} and e^{+i omega t} branches.

    Each momentum mode and component of a free solution is ``A e^{-i w t} + B e^{+i w t}``;
    two snapshots fix A and B through a 2x2 system with determinant 2i sin(w dt).
    """
    if first.lattice != second.lattice:
        raise LatticeMismatchError("snapshots live on different lattices")
    lat = first.lattice
    t0, t1 = first.time, second.time
    f0 = to_momentum(first).data
    f1 = to_momentum(second).data
    w = lat.omega

    weight = np.sum(np.abs(f0) ** 2 + np.abs(f1) ** 2, axis=0)
    populated = weight > 1e-20 * weight.max() if weight.max() > 0 else np.zeros_like(weight, bool)
    sine = np.sin(w * (t1 - t0))
    if np.any(np.abs(sine[populated]) < min_sine):
        raise IllConditionedSplitError(
            f"omega*dt is a multiple of pi for a populated mode (dt={t1 - t0})"
        )

    a, b = np.exp(-1j * w * t0), np.exp(1j * w * t0)
    c, d = np.exp(-1j * w * t1), np.exp(1j * w * t1)
    det = np.where(populated, 2j * sine, 1.0)
    pos = np.where(populated, (f0 * d - b * f1) / det, 0.0)
    neg = np.where(populated, (a * f1 - c * f0) / det, 0.0)
    measure = lat.k_measure
    return float(np.sum(np.abs(pos) ** 2) * measure), float(np.sum(np.abs(neg) ** 2) * measure)


# -- packets ------------------------------------------------------------------


def gaussian_amplitudes(
    lattice: Lattice,
    spinor,
    k_center=None,
    x_center=None,
    sigma_k: float = 0.5,
) -> AmplitudeSet:
    """Gaussian momentum envelope times a constant 4-spinor of weights.

    ``|a(k)|^2`` has standard deviation ``sigma_k`` per axis; the position
    density then has standard deviation ``1 / (2 sigma_k)`` at t = 0.
    """
    d = lattice.dim
    k_center = np.zeros(d) if k_center is None else np.asarray(k_center, float)
    x_center = np.zeros(d) if x_center is None else np.asarray(x_center, float)
    env = np.ones(lattice.shape, dtype=complex)
    for axis in range(d):
        k = lattice.wavenumber(axis)
        env = env * np.exp(-((k - k_center[axis]) ** 2) / (4 * sigma_k**2) - 1j * k * x_center[axis])
    spinor = np.asarray(spinor, dtype=complex).reshape((4,) + (1,) * d)
    return AmplitudeSet(lattice, spinor * env)


def random_amplitudes(
    lattice: Lattice,
    rng: np.random.Generator,
    sigma_k: float,
    k_max: float,
    x_max: float = 0.0,
    n_lumps: int = 2,
) -> AmplitudeSet:
    """Normalized sum of ``n_lumps`` Gaussians with random centers and spinor weights."""
    d = lattice.dim
    total = AmplitudeSet.zeros(lattice)
    for _ in range(n_lumps):
        spinor = rng.normal(size=4) + 1j * rng.normal(size=4)
        kc = rng.uniform(-k_max, k_max, size=d)
        xc = rng.uniform(-x_max, x_max, size=d)
        total = total + gaussian_amplitudes(lattice, spinor, kc, xc, sigma_k)
    return total.normalized()


# -- serialization -----------------------------------------------------------


def _encode(lattice: Lattice, realization: str, time: float, data: np.ndarray) -> dict:
    return {
        "lattice": lattice.to_dict(),
        "realization": realization,
        "time": float(time),
        "data": [
            np.stack([comp.real.ravel(), comp.imag.ravel()], axis=-1).tolist()
            for comp in data
        ],
    }


def _decode(doc: dict) -> tuple[Lattice, str, float, np.ndarray]:
    lat = Lattice(**doc["lattice"])
    pairs = np.asarray(doc["data"], dtype=float)
    expected = (4, lat.n**lat.dim, 2)
    if pairs.shape != expected:
        raise ValueError(f"data block has shape {pairs.shape}, expected {expected}")
    data = (pairs[..., 0] + 1j * pairs[..., 1]).reshape(lat.field_shape)
    return lat, doc["realization"], float(doc["time"]), data


def field_to_json(field: SpinorField) -> dict:
    doc = _encode(field.lattice, field.realization, field.time, field.data)
    if field.picture is not None:
        doc["picture"] = field.picture
    return doc


def field_from_json(doc: dict) -> SpinorField:
    lat, realization, time, data = _decode(doc)
    return SpinorField(lat, data, realization, time, doc.get("picture"))


def amplitudes_to_json(amps: AmplitudeSet) -> dict:
    """Amplitudes use the field layout with realization "momentum" and time 0."""
    return _encode(amps.lattice, "momentum", 0.0, amps.data)


def amplitudes_from_json(doc: dict) -> AmplitudeSet:
    lat, realization, _, data = _decode(doc)
    if realization != "momentum":
        raise ValueError("amplitude files must have realization 'momentum'")
    return AmplitudeSet(lat, data)


def save_json(doc: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(doc))


def load_json(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())
