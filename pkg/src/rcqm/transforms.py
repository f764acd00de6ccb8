"""Maps between the SF, FW and Dirac pictures.

    v      : SF <-> FW      conjugates the positron (lower) components, local in x
    V+, V- : FW <-> Dirac   per-mode matrices (+-i gamma^l d_l + omega + m) / sqrt(2 omega (omega + m))
    W      : SF  -> Dirac   W = V+ v,   W^{-1} = v V-

v is antilinear on the lower block, so W is not a per-mode matrix: conjugating
e^{ik.x} produces e^{-ik.x}, which couples k and -k.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from .checks import Check
from .clifford import build_gamma_pd
from .evolve import Picture, build_propagator, generator_symbol, step
from .lattice import Lattice, SpinorField, to_momentum, to_position
from .states import random_amplitudes, synthesize_sf


class RealizationError(ValueError):
    """v is only defined pointwise on position-realization fields."""


_V_PARTNER = {"SF": "FW", "FW": "SF"}


@dataclass(frozen=True)
class Jet:
    """A field together with its time derivative at the same instant."""

    value: SpinorField
    rate: SpinorField


def apply_v(field):
    """v = diag(I2, C I2): conjugate components 3-4 pointwise.

    Accepts a :class:`SpinorField` in position realization or a :class:`Jet`
    (v is time independent, so it acts on value and rate separately).
    """
    if isinstance(field, Jet):
        return Jet(apply_v(field.value), apply_v(field.rate))
    if field.realization != "position":
        raise RealizationError("apply_v needs a position-realization field")
    data = field.data.copy()
    data[2:] = np.conj(data[2:])
    picture = _V_PARTNER.get(field.picture) if field.picture else None
    return SpinorField(field.lattice, data, "position", field.time, picture)


def conjugate_sandwich(op: Callable) -> Callable:
    """q -> v q v.  Only meaningful for anti-Hermitian (prime) operators."""

    def sandwiched(x):
        return apply_v(op(apply_v(x)))

    return sandwiched


def prime_operator(picture: Picture | str) -> Callable[[Jet], SpinorField]:
    """d/dt + i H for ``picture``, acting on a jet and returning a position field."""
    picture = Picture(picture)

    def op(jet: Jet) -> SpinorField:
        lat = jet.value.lattice
        h = generator_symbol(lat, picture)
        spec = np.einsum("ab...,b...->a...", h, to_momentum(jet.value).data)
        hf = lat.inverse(spec)
        rate = to_position(jet.rate).data
        return SpinorField(lat, rate + 1j * hf, "position", jet.value.time)

    return op


@dataclass(frozen=True, eq=False)
class FWKernel:
    lattice: Lattice
    plus_matrices: np.ndarray  # (4, 4, *grid)
    minus_matrices: np.ndarray


def build_fw_kernel(lattice: Lattice) -> FWKernel:
    """Per-mode V+-(k) with the derivative d_l -> i k^l."""
    g = build_gamma_pd()
    grid = (...,) + (None,) * lattice.dim
    w = lattice.omega
    m = lattice.mass
    slash = np.zeros((4, 4) + lattice.shape, dtype=complex)
    for axis in range(lattice.dim):
        slash = slash + g[axis + 1][grid] * (1j * lattice.wavenumber(axis))
    scalar = (w + m) * np.eye(4)[grid]
    norm = np.sqrt(2.0 * w * (w + m))
    plus = (1j * slash + scalar) / norm
    minus = (-1j * slash + scalar) / norm
    return FWKernel(lattice, plus, minus)


def _apply_modes(mats: np.ndarray, field: SpinorField) -> np.ndarray:
    return np.einsum("ab...,b...->a...", mats, to_momentum(field).data)


def apply_fw_kernel(field: SpinorField, sign: Literal["+", "-"], kernel: FWKernel | None = None) -> SpinorField:
    """V+ (FW -> Dirac) or V- (Dirac -> FW), returned in the caller's realization."""
    kernel = kernel or build_fw_kernel(field.lattice)
    mats = kernel.plus_matrices if sign == "+" else kernel.minus_matrices
    picture = "Dirac" if sign == "+" else "FW"
    out = SpinorField(field.lattice, _apply_modes(mats, field), "momentum", field.time, picture)
    return out.as_realization(field.realization)


def apply_w(field, direction: Literal["forward", "inverse"] = "forward", kernel: FWKernel | None = None):
    """W = V+ v (SF -> Dirac) or W^{-1} = v V- (Dirac -> SF).

    Works on fields in either realization and on jets; fields come back in the
    caller's realization.
    """
    if isinstance(field, Jet):
        return Jet(apply_w(field.value, direction, kernel), apply_w(field.rate, direction, kernel))
    realization = field.realization
    if direction == "forward":
        phi = apply_v(to_position(field))
        out = apply_fw_kernel(phi, "+", kernel)
        out = out.replace(picture="Dirac")
    elif direction == "inverse":
        phi = apply_fw_kernel(field, "-", kernel)
        out = apply_v(to_position(phi)).replace(picture="SF")
    else:
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    return out.as_realization(realization)


def naive_w(field: SpinorField, kernel: FWKernel | None = None) -> SpinorField:
    """Wrong shortcut kept as a regression target: conjugate lower momentum
    components in place (no k -> -k reflection) and apply V+ per mode."""
    kernel = kernel or build_fw_kernel(field.lattice)
    spec = to_momentum(field).data.copy()
    spec[2:] = np.conj(spec[2:])
    out = np.einsum("ab...,b...->a...", kernel.plus_matrices, spec)
    return SpinorField(field.lattice, out, "momentum", field.time, "Dirac").as_realization(field.realization)


# -- intertwining --------------------------------------------------------------

PAIRS = {
    ("SF", "FW"): "v",
    ("FW", "SF"): "v",
    ("SF", "Dirac"): "W",
    ("Dirac", "SF"): "W^-1",
    ("FW", "Dirac"): "V+",
    ("Dirac", "FW"): "V-",
}


def transform_for(source: str, target: str, kernel: FWKernel | None = None) -> Callable[[SpinorField], SpinorField]:
    name = PAIRS[(source, target)]
    if name == "v":
        return lambda f: apply_v(to_position(f))
    if name == "W":
        return lambda f: apply_w(f, "forward", kernel)
    if name == "W^-1":
        return lambda f: apply_w(f, "inverse", kernel)
    sign = "+" if name == "V+" else "-"
    return lambda f: apply_fw_kernel(f, sign, kernel)


def intertwining_residual(field: SpinorField, source: str, target: str, t: float, kernel: FWKernel | None = None) -> float:
    """||(T E_source(t) - E_target(t) T) f|| / ||f||."""
    lat = field.lattice
    kernel = kernel or build_fw_kernel(lat)
    transform = transform_for(source, target, kernel)
    f = field.replace(picture=source)
    lhs = transform(step(f, build_propagator(lat, source, t)))
    rhs = step(transform(f), build_propagator(lat, target, t))
    return (lhs - rhs).norm() / f.norm()


def verify_intertwining(
    lattice: Lattice,
    pair: tuple[str, str],
    n_trials: int = 10,
    t: float | None = None,
    seed: int = 0,
    tolerance: float = 1e-10,
    packet: dict | None = None,
) -> list[Check]:
    """Residuals of transform-then-evolve versus evolve-then-transform on random packets."""
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    t = 1.0 / lattice.mass if t is None else t
    rng = np.random.default_rng(seed)
    kernel = build_fw_kernel(lattice)
    packet = packet or default_packet(lattice)
    source, target = pair
    out = []
    for trial in range(n_trials):
        f = synthesize_sf(random_amplitudes(lattice, rng, **packet))
        res = intertwining_residual(f, source, target, t, kernel)
        out.append(Check(f"intertwine_{source}_to_{target}_{trial}", res, tolerance))
    return out


def default_packet(lattice: Lattice, t_max: float = 0.0, k_max: float | None = None, x_max: float | None = None) -> dict:
    """Gaussian packet parameters that keep both spectral and box tails small.

    The momentum width is chosen to balance the distance (in standard
    deviations) from the Nyquist band against the distance from the box edge
    at ``t_max``, allowing for drift at the group velocity and free spreading.
    """
    m = lattice.mass
    k_band = (lattice.n // 2 - 2) * lattice.dk
    edge = 0.4 * lattice.length
    k_max = min(0.5 * m, 0.15 * k_band) if k_max is None else k_max
    x_max = 0.05 * lattice.length if x_max is None else x_max
    drift = t_max * k_max / np.hypot(k_max, m)

    sigma_x = np.geomspace(1e-2, 1.0, 400) * lattice.length
    sigma_k = 1.0 / (2.0 * sigma_x)
    width = np.sqrt(sigma_x**2 + (sigma_k * t_max / m) ** 2)
    margin = np.minimum((k_band - k_max) / sigma_k, (edge - x_max - drift) / width)
    best = int(np.argmax(margin))
    return {"sigma_k": float(sigma_k[best]), "k_max": float(k_max), "x_max": float(x_max)}


# -- per-mode kernel identities -------------------------------------------------


def check_fw_kernel(lattice: Lattice, n_modes: int = 100, seed: int = 0, tolerance: float = 1e-12) -> list[Check]:
    """V+V- = I, unitarity of V+-, and V+ (gamma^0 omega) V- = alpha.k + beta m on random grid modes."""
    from .evolve import dirac_hamiltonian

    kernel = build_fw_kernel(lattice)
    rng = np.random.default_rng(seed)
    g0 = build_gamma_pd()[0]
    h = dirac_hamiltonian(lattice)
    eye = np.eye(4)
    worst = {"product": 0.0, "unitary": 0.0, "dirac": 0.0}
    for _ in range(n_modes):
        idx = tuple(rng.integers(0, lattice.n, size=lattice.dim))
        sel = (slice(None), slice(None)) + idx
        vp, vm = kernel.plus_matrices[sel], kernel.minus_matrices[sel]
        w = lattice.omega[idx]
        scale = max(1.0, w)
        worst["product"] = max(worst["product"], np.abs(vp @ vm - eye).max())
        worst["unitary"] = max(
            worst["unitary"],
            np.abs(vp.conj().T @ vp - eye).max(),
            np.abs(vm.conj().T @ vm - eye).max(),
        )
        worst["dirac"] = max(worst["dirac"], np.abs(vp @ (w * g0) @ vm - h[sel]).max() / scale)
    return [
        Check("V+V-=I", worst["product"], tolerance),
        Check("V+-_unitary", worst["unitary"], tolerance),
        Check("V+(gamma0 omega)V-=alpha.k+beta m", worst["dirac"], tolerance),
    ]


# -- prime forms and solution maps ------------------------------------------------

SANDWICHES = {
    # name: (left transform, source picture, right transform, target picture)
    "v(d0+i omega)v = d0+i gamma0 omega": ("v", "SF", "v", "FW"),
    "W(d0+i omega)W^-1 = d0+i H_D": ("W", "SF", "W^-1", "Dirac"),
    "W^-1(d0+i H_D)W = d0+i omega": ("W^-1", "Dirac", "W", "SF"),
}


def _field_transform(name: str, kernel: FWKernel) -> Callable[[SpinorField], SpinorField]:
    if name == "v":
        return lambda f: apply_v(to_position(f))
    direction = "forward" if name == "W" else "inverse"
    return lambda f: apply_w(f, direction, kernel)


def _jet_transform(name: str, kernel: FWKernel) -> Callable[[Jet], Jet]:
    # every transform here is time independent, so it acts on value and rate separately
    fn = _field_transform(name, kernel)
    return lambda j: Jet(fn(j.value), fn(j.rate))


def verify_prime_sandwich(
    lattice: Lattice,
    n_trials: int = 5,
    seed: int = 0,
    tolerance: float = 1e-10,
    packet: dict | None = None,
) -> list[Check]:
    """T (d0 + i H_source) T^-1 applied to random jets against d0 + i H_target.

    Jets carry an independent value and rate, so the identity is checked as an
    operator statement and not only on solutions.
    """
    kernel = build_fw_kernel(lattice)
    packet = packet or default_packet(lattice)
    rng = np.random.default_rng(seed)
    out = []
    for trial in range(n_trials):
        value = synthesize_sf(random_amplitudes(lattice, rng, **packet))
        rate = synthesize_sf(random_amplitudes(lattice, rng, **packet))
        jet = Jet(value, rate)
        scale = np.hypot(value.norm(), rate.norm())
        for label, (left, source, right, target) in SANDWICHES.items():
            inner = _jet_transform(right, kernel)(jet)
            lhs = _field_transform(left, kernel)(prime_operator(source)(inner))
            rhs = prime_operator(target)(jet)
            out.append(Check(f"{label}_{trial}", (lhs - rhs).norm() / scale, tolerance))
    return out


def verify_solution_map(
    lattice: Lattice,
    n_trials: int = 10,
    seed: int = 0,
    t: float | None = None,
    tolerance: float = 1e-12,
    packet: dict | None = None,
) -> list[Check]:
    """v applied to the SF solution equals the FW solution built from the same amplitudes."""
    from .states import synthesize_fw

    t = 1.0 / lattice.mass if t is None else t
    packet = packet or default_packet(lattice)
    rng = np.random.default_rng(seed)
    out = []
    for trial in range(n_trials):
        amps = random_amplitudes(lattice, rng, **packet)
        diff = apply_v(synthesize_sf(amps, t)) - synthesize_fw(amps, t)
        out.append(Check(f"v_sf_equals_fw_{trial}", diff.norm() / synthesize_fw(amps, t).norm(), tolerance))
    return out


def w_roundtrip_residual(field: SpinorField, kernel: FWKernel | None = None) -> float:
    back = apply_w(apply_w(field, "forward", kernel), "inverse", kernel)
    return (back - field.replace(picture="SF")).norm() / field.norm()
