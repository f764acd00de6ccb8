"""Periodic lattice, unitary Fourier transforms and momentum-diagonal operators.

Conventions (hbar = c = 1)::

    x_j = (j - N/2) dx,            j = 0 .. N-1
    k_n = 2 pi n / (N dx),         n = -N/2 .. N/2-1   (stored in FFT order)
    f(x) = (2 pi)^{-d/2} sum_k dk^d e^{+i k.x} f~(k)
    f~(k) = (2 pi)^{-d/2} sum_x dx^d e^{-i k.x} f(x)

so the discrete Plancherel identity sum dx^d |f|^2 = sum dk^d |f~|^2 holds
exactly (up to rounding).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Literal

import numpy as np

Realization = Literal["position", "momentum"]

NCOMP = 4


class LatticeMismatchError(ValueError):
    """A field does not live on the lattice it is being used with."""


@dataclass(frozen=True)
class Lattice:
    """Uniform periodic grid of ``n`` points per axis in ``dim`` dimensions."""

    dim: int = 3
    n: int = 32
    dx: float = 0.5
    mass: float = 1.0

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {self.dim}")
        if self.n < 4 or self.n % 2:
            raise ValueError(f"n must be an even integer >= 4, got {self.n}")
        if not self.dx > 0:
            raise ValueError(f"dx must be positive, got {self.dx}")
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")

    # -- geometry ---------------------------------------------------------

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.dim

    @property
    def field_shape(self) -> tuple[int, ...]:
        return (NCOMP,) + self.shape

    @property
    def length(self) -> float:
        return self.n * self.dx

    @property
    def dk(self) -> float:
        return 2.0 * np.pi / self.length

    @property
    def x_measure(self) -> float:
        return self.dx**self.dim

    @property
    def k_measure(self) -> float:
        return self.dk**self.dim

    @cached_property
    def x_axis(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dx

    @cached_property
    def mode_index(self) -> np.ndarray:
        """Signed mode numbers n in FFT storage order."""
        return np.fft.fftfreq(self.n, d=1.0 / self.n).astype(int)

    @cached_property
    def k_axis(self) -> np.ndarray:
        return self.mode_index * self.dk

    def coordinate(self, axis: int) -> np.ndarray:
        """Broadcastable x-coordinate array along ``axis`` (0-based)."""
        return self._along(self.x_axis, axis)

    def wavenumber(self, axis: int) -> np.ndarray:
        """Broadcastable k-coordinate array along ``axis`` (0-based)."""
        return self._along(self.k_axis, axis)

    def _along(self, values: np.ndarray, axis: int) -> np.ndarray:
        if not 0 <= axis < self.dim:
            raise IndexError(f"axis {axis} out of range for dim={self.dim}")
        shape = [1] * self.dim
        shape[axis] = self.n
        return values.reshape(shape)

    @cached_property
    def k_squared(self) -> np.ndarray:
        k2 = np.zeros(self.shape)
        for axis in range(self.dim):
            k2 = k2 + self.wavenumber(axis) ** 2
        return k2

    @cached_property
    def omega(self) -> np.ndarray:
        """Symbol of the energy operator, sqrt(k^2 + m^2), on the momentum grid."""
        return np.sqrt(self.k_squared + self.mass**2)

    @cached_property
    def _parity(self) -> np.ndarray:
        # (-1)^n per axis from the half-box offset of the x grid
        sign = np.where(self.mode_index % 2 == 0, 1.0, -1.0)
        out = np.ones(self.shape)
        for axis in range(self.dim):
            out = out * self._along(sign, axis)
        return out

    # -- raw array transforms ---------------------------------------------

    @property
    def _axes(self) -> tuple[int, ...]:
        return tuple(range(-self.dim, 0))

    def forward(self, values: np.ndarray) -> np.ndarray:
        """x -> k on arrays whose trailing ``dim`` axes are the grid."""
        scale = (self.dx / np.sqrt(2.0 * np.pi)) ** self.dim
        return scale * self._parity * np.fft.fftn(values, axes=self._axes)

    def inverse(self, values: np.ndarray) -> np.ndarray:
        """k -> x on arrays whose trailing ``dim`` axes are the grid."""
        scale = (np.sqrt(2.0 * np.pi) / self.dx) ** self.dim
        return scale * np.fft.ifftn(self._parity * values, axes=self._axes)

    def check(self, values: np.ndarray, ncomp: int | None = NCOMP) -> None:
        expected = self.shape if ncomp is None else (ncomp,) + self.shape
        if values.shape != expected:
            raise LatticeMismatchError(
                f"array shape {values.shape} does not match lattice shape {expected}"
            )

    # -- packet-quality diagnostics -----------------------------------------

    @cached_property
    def nyquist_band(self) -> np.ndarray:
        """Mask of momentum modes within 2 bins of the Nyquist edge on any axis."""
        edge = np.abs(self.mode_index) >= self.n // 2 - 2
        mask = np.zeros(self.shape, dtype=bool)
        for axis in range(self.dim):
            mask = mask | self._along(edge, axis)
        return mask

    @cached_property
    def edge_band(self) -> np.ndarray:
        """Mask of grid points within 10% of the box boundary on any axis."""
        edge = np.abs(self.x_axis) >= 0.4 * self.length
        mask = np.zeros(self.shape, dtype=bool)
        for axis in range(self.dim):
            mask = mask | self._along(edge, axis)
        return mask

    def to_dict(self) -> dict:
        return {"dim": self.dim, "n": self.n, "dx": self.dx, "mass": self.mass}


@dataclass(frozen=True, eq=False)
class SpinorField:
    """Four-component complex field sampled on a lattice.

    ``data`` has shape ``(4, n, ..., n)``; components 0-1 carry the electron
    wave function and components 2-3 the positron wave function.  ``picture``
    optionally tags the equation of motion the field obeys ("SF", "FW", "Dirac").
    """

    lattice: Lattice
    data: np.ndarray
    realization: Realization = "position"
    time: float = 0.0
    picture: str | None = None

    def __post_init__(self):
        if self.realization not in ("position", "momentum"):
            raise ValueError(f"unknown realization {self.realization!r}")
        data = np.array(self.data, dtype=complex)
        self.lattice.check(data)
        data.flags.writeable = False
        object.__setattr__(self, "data", data)

    def replace(self, data=None, realization=None, time=None, picture=None) -> "SpinorField":
        return SpinorField(
            self.lattice,
            self.data if data is None else data,
            self.realization if realization is None else realization,
            self.time if time is None else time,
            self.picture if picture is None else picture,
        )

    @property
    def measure(self) -> float:
        lat = self.lattice
        return lat.x_measure if self.realization == "position" else lat.k_measure

    def inner(self, other: "SpinorField") -> complex:
        """Discrete L2 inner product <self, other> (antilinear in ``self``)."""
        if other.lattice != self.lattice:
            raise LatticeMismatchError("fields live on different lattices")
        other = other.as_realization(self.realization)
        return complex(np.vdot(self.data, other.data) * self.measure)

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.data) ** 2) * self.measure)

    def norm(self) -> float:
        return float(np.sqrt(self.norm_squared()))

    def as_realization(self, realization: Realization) -> "SpinorField":
        if realization == self.realization:
            return self
        if realization == "momentum":
            return to_momentum(self)
        return to_position(self)

    def __add__(self, other: "SpinorField") -> "SpinorField":
        other = other.as_realization(self.realization)
        return self.replace(data=self.data + other.data)

    def __sub__(self, other: "SpinorField") -> "SpinorField":
        other = other.as_realization(self.realization)
        return self.replace(data=self.data - other.data)

    def __mul__(self, scalar: complex) -> "SpinorField":
        return self.replace(data=self.data * scalar)

    __rmul__ = __mul__


def to_momentum(field: SpinorField) -> SpinorField:
    if field.realization == "momentum":
        return field
    field.lattice.check(field.data)
    return field.replace(data=field.lattice.forward(field.data), realization="momentum")


def to_position(field: SpinorField) -> SpinorField:
    if field.realization == "position":
        return field
    field.lattice.check(field.data)
    return field.replace(data=field.lattice.inverse(field.data), realization="position")


def apply_symbol(field: SpinorField, symbol: np.ndarray) -> SpinorField:
    """Multiply every component by a scalar momentum-space symbol.

    The result is returned in the caller's realization.
    """
    lat = field.lattice
    lat.check(np.asarray(symbol), ncomp=None)
    if field.realization == "momentum":
        return field.replace(data=field.data * symbol)
    return field.replace(data=lat.inverse(symbol * lat.forward(field.data)))


def apply_omega(field: SpinorField) -> SpinorField:
    """The relativistic energy operator sqrt(-Laplacian + m^2)."""
    return apply_symbol(field, field.lattice.omega)


def nyquist_fraction(field: SpinorField) -> float:
    """Share of spectral mass within 2 bins of the Nyquist edge."""
    spec = np.sum(np.abs(to_momentum(field).data) ** 2, axis=0)
    total = spec.sum()
    return float(spec[field.lattice.nyquist_band].sum() / total) if total else 0.0


def edge_fraction(field: SpinorField) -> float:
    """Share of probability within 10% of the box boundary."""
    dens = np.sum(np.abs(to_position(field).data) ** 2, axis=0)
    total = dens.sum()
    return float(dens[field.lattice.edge_band].sum() / total) if total else 0.0
