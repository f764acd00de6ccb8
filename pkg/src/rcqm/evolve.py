"""Exact momentum-space propagators for the SF, FW and Dirac pictures."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .clifford import alpha_beta, build_gamma_pd
from .lattice import Lattice, SpinorField, to_momentum


class Picture(str, Enum):
    SF = "SF"
    FW = "FW"
    DIRAC = "Dirac"


class PictureMismatchError(ValueError):
    """A field tagged with one picture was handed to another picture's propagator."""


def dirac_hamiltonian(lattice: Lattice) -> np.ndarray:
    """Per-mode alpha.k + beta m, shape (4, 4, *grid)."""
    alpha, beta = alpha_beta()
    grid = (...,) + (None,) * lattice.dim
    h = lattice.mass * beta[grid] * np.ones(lattice.shape)
    for axis in range(lattice.dim):
        h = h + alpha[axis][grid] * lattice.wavenumber(axis)
    return h


def generator_symbol(lattice: Lattice, picture: Picture | str) -> np.ndarray:
    """Per-mode Hamiltonian of ``picture``: omega I, gamma^0 omega, or alpha.k + beta m."""
    picture = Picture(picture)
    w = lattice.omega
    if picture is Picture.SF:
        return np.eye(4)[(...,) + (None,) * lattice.dim] * w
    if picture is Picture.FW:
        return build_gamma_pd()[0][(...,) + (None,) * lattice.dim] * w
    return dirac_hamiltonian(lattice)


@dataclass(frozen=True, eq=False)
class Propagator:
    picture: Picture
    dt: float
    lattice: Lattice
    mode_matrices: np.ndarray  # (4, 4, *grid)

    def apply_spectrum(self, spec: np.ndarray) -> np.ndarray:
        return np.einsum("ab...,b...->a...", self.mode_matrices, spec)


def build_propagator(lattice: Lattice, picture: Picture | str, dt: float) -> Propagator:
    """exp(-i H dt) mode by mode.

    The Dirac case uses H(k)^2 = omega^2 I, so
    exp(-i H dt) = cos(omega dt) I - i sin(omega dt) H / omega.
    """
    picture = Picture(picture)
    w = lattice.omega
    eye = np.eye(4)[(...,) + (None,) * lattice.dim]
    if picture is Picture.SF:
        mats = eye * np.exp(-1j * w * dt)
    elif picture is Picture.FW:
        signs = np.array([1.0, 1.0, -1.0, -1.0])
        mats = np.zeros((4, 4) + lattice.shape, dtype=complex)
        for a in range(4):
            mats[a, a] = np.exp(-1j * signs[a] * w * dt)
    else:
        h = dirac_hamiltonian(lattice)
        mats = np.cos(w * dt) * eye - 1j * (np.sin(w * dt) / w) * h
    return Propagator(picture, float(dt), lattice, mats.astype(complex))


def step(field: SpinorField, prop: Propagator) -> SpinorField:
    """Advance ``field`` by ``prop.dt``; the result keeps the caller's realization."""
    if field.picture is not None and Picture(field.picture) is not prop.picture:
        raise PictureMismatchError(
            f"field is in the {field.picture} picture, propagator is {prop.picture.value}"
        )
    lat = field.lattice
    lat.check(field.data)
    spec = prop.apply_spectrum(to_momentum(field).data)
    out = SpinorField(lat, spec, "momentum", field.time + prop.dt, prop.picture.value)
    return out.as_realization(field.realization)


def evolve(field: SpinorField, picture: Picture | str, dt: float) -> SpinorField:
    return step(field, build_propagator(field.lattice, picture, dt))


def mode_eigenphases(prop: Propagator) -> np.ndarray:
    """Eigenvalues of every mode matrix, shape (*grid, 4)."""
    mats = np.moveaxis(prop.mode_matrices, (0, 1), (-2, -1))
    return np.linalg.eigvals(mats)
