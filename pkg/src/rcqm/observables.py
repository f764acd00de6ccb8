"""Poincare generators, quantum-mechanical means and conservation audits.

Index conventions.  Generators carry covariant (lower) indices, metric
diag(1, -1, -1, -1).  With physical momentum P^l = -i d/dx^l and position x^l:

    p_0 = omega,  p_l = i d_l = -P^l,  x_l = -x^l
    m_ln = x_l p_n - x_n p_l                      (= x^l P^n - x^n P^l)
    j_ln = m_ln + s_ln                            s_23, s_31, s_12 = s^1, s^2, s^3
    sb_l = s_ln p_n / (omega + m)
    m_0l = t p_l - (x_l omega + omega x_l) / 2
    j_0l = m_0l - sb_l

In the momentum realization x_l acts as -i d/dk^l on the amplitude grid.

On a d < 3 lattice the field does not depend on the missing coordinates, so
p_l for l > d is the zero operator; generators that would need multiplication
by a missing coordinate are not available.
"""
from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Literal

import numpy as np

from .checks import Check
from .clifford import METRIC, build_spin_and_charge, spin_tensor
from .lattice import Lattice, SpinorField, to_momentum
from .states import AmplitudeSet, synthesize_sf

MAIN = ("P0", "P1", "P2", "P3", "J23", "J31", "J12", "J01", "J02", "J03")
ADDITIONAL = ("M23", "M31", "M12", "M01", "M02", "M03", "S23", "S31", "S12", "Sb1", "Sb2", "Sb3")
QUANTITIES = MAIN + ADDITIONAL

# generator label for each audited mean
GENERATOR_OF = {q: q.lower() for q in QUANTITIES}

POINCARE_BASIS = ("p0", "p1", "p2", "p3", "j23", "j31", "j12", "j01", "j02", "j03")

HERMITIAN_TOL = 1e-8


class NormalizationError(ValueError):
    """A mean was requested for a field that is not normalized to 1."""


class UnavailableGeneratorError(KeyError):
    """The generator needs a coordinate the lattice does not have."""


_LABEL = re.compile(r"^(p|j|m|s|sb)(\d)(\d)?$")


def parse_label(label: str) -> tuple[str, tuple[int, ...]]:
    match = _LABEL.match(label)
    if not match:
        raise KeyError(f"unknown generator label {label!r}")
    kind, a, b = match.groups()
    idx = (int(a),) if b is None else (int(a), int(b))
    return kind, idx


def available(label: str, dim: int) -> bool:
    """Whether ``label`` can be represented on a ``dim``-dimensional lattice."""
    kind, idx = parse_label(label)
    if kind in ("p", "sb", "s"):
        return True
    a, b = idx
    if 0 in (a, b):
        return max(a, b) <= dim
    # orbital l-n: both present, or both absent (then identically zero)
    return (a <= dim) == (b <= dim)


class GeneratorSet:
    """Field-to-field generator maps in the ``x`` or ``k`` realization at time ``t``.

    ``explicit_time=False`` drops the ``t p_l`` term of the boost generators;
    it exists for the amplitude-space form and as a negative control.
    """

    def __init__(
        self,
        lattice: Lattice,
        realization: Literal["x", "k"] = "x",
        t: float = 0.0,
        explicit_time: bool = True,
    ):
        if realization not in ("x", "k"):
            raise ValueError(f"realization must be 'x' or 'k', got {realization!r}")
        self.lattice = lattice
        self.realization = realization
        self.t = float(t)
        self.explicit_time = explicit_time
        self.spin = spin_tensor()
        _, self.charge = build_spin_and_charge()

    # -- primitive operations on raw data in this realization -----------
    #
    # Each generator is assembled as  from_k(<momentum-space terms>) + <x terms>
    # so that the forward transform of the input is computed once per call.

    @property
    def field_realization(self) -> str:
        return "position" if self.realization == "x" else "momentum"

    def _to_k(self, data):
        return self.lattice.forward(data) if self.realization == "x" else data

    def _from_k(self, spec):
        return self.lattice.inverse(spec) if self.realization == "x" else spec

    def _p_symbol(self, l: int):
        """Covariant p_l symbol, minus the physical wavenumber; zero for missing axes."""
        if l > self.lattice.dim:
            return 0.0
        return -self.lattice.wavenumber(l - 1)

    def position(self, data, l: int):
        """Covariant x_l = -x^l applied to data in this realization."""
        if l > self.lattice.dim:
            raise UnavailableGeneratorError(f"x_{l} does not exist on a {self.lattice.dim}D lattice")
        if self.realization == "x":
            return -self.lattice.coordinate(l - 1) * data
        return -1j * k_derivative(self.lattice, data, l - 1)

    def matrix(self, data, mat):
        return np.tensordot(mat, data, axes=(1, 0))

    def _breve_symbol_terms(self, spec, l: int):
        out = np.zeros_like(spec)
        denom = self.lattice.omega + self.lattice.mass
        for n in range(1, self.lattice.dim + 1):
            if n != l:
                out = out + (self._p_symbol(n) / denom) * self.matrix(spec, self.spin[l - 1, n - 1])
        return out

    # -- generators ---------------------------------------------------------

    def apply_data(self, label: str, data: np.ndarray) -> np.ndarray:
        if not available(label, self.lattice.dim):
            raise UnavailableGeneratorError(f"{label} is not available on a {self.lattice.dim}D lattice")
        kind, idx = parse_label(label)
        if len(idx) == 2 and idx[0] > idx[1]:
            return -self.apply_data(f"{kind}{idx[1]}{idx[0]}", data)
        if len(idx) == 2 and idx[0] == idx[1]:
            return np.zeros_like(data)
        if kind == "s":
            a, b = idx
            if a == 0:
                raise KeyError(f"no spin generator {label}")
            return self.matrix(data, self.spin[a - 1, b - 1])

        spec = self._to_k(data)
        if kind == "p":
            (mu,) = idx
            sym = self.lattice.omega if mu == 0 else self._p_symbol(mu)
            return self._from_k(sym * spec)
        if kind == "sb":
            return self._from_k(self._breve_symbol_terms(spec, idx[0]))

        a, b = idx
        if a == 0:
            # t p_l - (x_l omega + omega x_l)/2  [- sb_l]
            l = b
            k_terms = -0.5 * self.lattice.omega * self._to_k(self.position(data, l))
            if self.explicit_time:
                k_terms = k_terms + self.t * self._p_symbol(l) * spec
            if kind == "j":
                k_terms = k_terms - self._breve_symbol_terms(spec, l)
            x_terms = -0.5 * self.position(self._from_k(self.lattice.omega * spec), l)
            return self._from_k(k_terms) + x_terms

        out = self.orbital_rotation(spec, a, b)
        if kind == "j":
            out = out + self.matrix(data, self.spin[a - 1, b - 1])
        return out

    def orbital_rotation(self, spec, l: int, n: int):
        """x_l p_n - x_n p_l from the momentum-space input."""
        if l > self.lattice.dim and n > self.lattice.dim:
            return np.zeros_like(spec)
        out = np.zeros(spec.shape, dtype=complex)
        if n <= self.lattice.dim:
            out = out + self.position(self._from_k(self._p_symbol(n) * spec), l)
        if l <= self.lattice.dim:
            out = out - self.position(self._from_k(self._p_symbol(l) * spec), n)
        return out

    def apply(self, label: str, f: SpinorField) -> SpinorField:
        if label == "g":
            data = self.matrix(self._data(f), self.charge)
        else:
            data = self.apply_data(label, self._data(f))
        return f.replace(data=data, realization=self.field_realization)

    def _data(self, f: SpinorField) -> np.ndarray:
        return f.as_realization(self.field_realization).data

    def map(self, label: str) -> Callable[[SpinorField], SpinorField]:
        return lambda f: self.apply(label, f)

    def labels(self, basis=None) -> list[str]:
        basis = basis or [GENERATOR_OF[q] for q in QUANTITIES]
        return [b for b in basis if available(b, self.lattice.dim)]


def build_generators(lattice: Lattice, realization: Literal["x", "k"] = "x", t: float = 0.0, explicit_time: bool = True) -> GeneratorSet:
    return GeneratorSet(lattice, realization, t, explicit_time)


def k_derivative(lattice: Lattice, values: np.ndarray, axis: int) -> np.ndarray:
    """Spectral d/dk along grid ``axis`` of FFT-ordered momentum data.

    The amplitude grid is a trigonometric polynomial sum_j c_j e^{-i k x_j}
    in k, with x_j = (j - N/2) dx; differentiation multiplies c_j by -i x_j.
    """
    n = lattice.n
    ax = values.ndim - lattice.dim + axis
    shape = [1] * values.ndim
    shape[ax] = n
    sign = ((-1.0) ** np.arange(n)).reshape(shape)
    x = ((np.arange(n) - n // 2) * lattice.dx).reshape(shape)
    coeffs = np.fft.ifft(sign * values, axis=ax)
    return sign * np.fft.fft(-1j * x * coeffs, axis=ax)


# -- means ----------------------------------------------------------------------


def mean(field: SpinorField, gens: GeneratorSet, label: str, normalized: bool = True, tol: float = 1e-8) -> complex:
    """<f, G f> by discrete quadrature, complex (imaginary part is a diagnostic)."""
    if normalized and abs(field.norm_squared() - 1.0) > tol:
        raise NormalizationError(f"field has squared norm {field.norm_squared():.3g}; pass normalized=False to override")
    gf = gens.apply(label, field)
    return field.inner(gf)


def means(field: SpinorField, gens: GeneratorSet, names=QUANTITIES, normalized: bool = True) -> dict[str, complex]:
    out = {}
    for name in names:
        label = GENERATOR_OF[name]
        if available(label, field.lattice.dim):
            out[name] = mean(field, gens, label, normalized)
    return out


def amplitude_means(amps: AmplitudeSet, names=MAIN) -> dict[str, complex]:
    """(P_mu, J_mu_nu) computed on the amplitude column A(k) with the time-free density generators."""
    lat = amps.lattice
    gens = GeneratorSet(lat, "k", t=0.0, explicit_time=False)
    a = SpinorField(lat, amps.data, "momentum", 0.0)
    return means(a, gens, names, normalized=False)


@dataclass
class ConservationReport:
    times: list[float]
    names: list[str]
    values: np.ndarray  # (len(times), len(names)) complex
    tolerance: float = 1e-8
    explicit_time: bool = True
    drift: dict[str, float] = field(default_factory=dict)
    verdicts: dict[str, bool] = field(default_factory=dict)

    def __post_init__(self):
        for j, name in enumerate(self.names):
            col = self.values[:, j]
            drift = float(np.max(np.abs(col - col[0])))
            scale = max(1.0, float(np.max(np.abs(col))))
            self.drift[name] = drift
            self.verdicts[name] = drift <= self.tolerance * scale

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    @property
    def max_imag(self) -> float:
        return float(np.max(np.abs(self.values.imag))) if self.values.size else 0.0

    def checks(self, prefix: str = "") -> list[Check]:
        out = []
        for j, name in enumerate(self.names):
            scale = max(1.0, float(np.max(np.abs(self.values[:, j]))))
            out.append(Check(f"{prefix}{name}", self.drift[name] / scale, self.tolerance))
        return out

    def to_json(self) -> dict:
        return {
            "times": [float(t) for t in self.times],
            "explicit_time": self.explicit_time,
            "tolerance": self.tolerance,
            "quantities": {
                name: {
                    "real": [float(v) for v in self.values[:, j].real],
                    "imag": [float(v) for v in self.values[:, j].imag],
                    "drift": self.drift[name],
                    "pass": self.verdicts[name],
                }
                for j, name in enumerate(self.names)
            },
        }

    def to_csv(self) -> str:
        """Header ``time,<quantity>...`` in the fixed QUANTITIES order; real parts only."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["time", *self.names])
        for i, t in enumerate(self.times):
            writer.writerow([repr(float(t)), *(repr(float(v)) for v in self.values[i].real)])
        return buf.getvalue()


def audit_conservation(
    amps: AmplitudeSet,
    times,
    tolerance: float = 1e-8,
    explicit_time: bool = True,
    realization: Literal["x", "k"] = "x",
) -> ConservationReport:
    """Evaluate all available main and additional means on the SF solution at each time."""
    times = [float(t) for t in times]
    if len(set(times)) < 3:
        raise ValueError("need at least 3 distinct times")
    lat = amps.lattice
    names = [q for q in QUANTITIES if available(GENERATOR_OF[q], lat.dim)]
    rows = []
    for t in times:
        f = synthesize_sf(amps, t)
        gens = GeneratorSet(lat, realization, t, explicit_time)
        vals = means(f, gens, names)
        rows.append([vals[n] for n in names])
    return ConservationReport(times, names, np.array(rows, dtype=complex), tolerance, explicit_time)


# -- commutator suites ---------------------------------------------------------


def _gen(label: str) -> tuple[str, int, int | None]:
    kind, idx = parse_label(label)
    return (kind, idx[0], idx[1] if len(idx) > 1 else None)


def _j(a: int, b: int) -> list[tuple[complex, str]]:
    return [] if a == b else [(1.0, f"j{a}{b}")]


def poincare_rhs(left: str, right: str) -> list[tuple[complex, str]]:
    """Right-hand side of [left, right] from the covariant Poincare relations."""
    g = METRIC
    lk, la, lb = _gen(left)
    rk, ra, rb = _gen(right)
    if lk == "p" and rk == "p":
        return []
    if lk == "p" and rk == "j":
        mu, rho, sig = la, ra, rb
        terms = [(1j * g[mu, rho], f"p{sig}"), (-1j * g[mu, sig], f"p{rho}")]
        return [(c, lab) for c, lab in terms if c != 0]
    if lk == "j" and rk == "p":
        return [(-c, lab) for c, lab in poincare_rhs(right, left)]
    mu, nu, rho, sig = la, lb, ra, rb
    terms = [
        (g[mu, rho], nu, sig),
        (g[rho, nu], sig, mu),
        (g[nu, sig], mu, rho),
        (g[sig, mu], rho, nu),
    ]
    out = []
    for coef, a, b in terms:
        if coef:
            out += [(-1j * coef * s, lab) for s, lab in _j(a, b)]
    return out


def _combine(gens: GeneratorSet, terms, f: SpinorField, cache: dict) -> np.ndarray:
    out = np.zeros_like(f.data)
    for coef, lab in terms:
        if coef == 0:
            continue
        if lab not in cache:
            cache[lab] = gens.apply(lab, f).data
        out = out + coef * cache[lab]
    return out


def commutator_residual(gens: GeneratorSet, left: str, right: str, f: SpinorField, rhs, cache=None) -> float:
    cache = {} if cache is None else cache
    for lab in (left, right):
        if lab not in cache:
            cache[lab] = gens.apply(lab, f).data
    ab = gens.apply(left, f.replace(data=cache[right])).data
    ba = gens.apply(right, f.replace(data=cache[left])).data
    res = ab - ba - _combine(gens, rhs, f, cache)
    return float(np.sqrt(np.sum(np.abs(res) ** 2) * f.measure)) / f.norm()


def check_poincare_algebra(
    lattice: Lattice,
    n_trials: int = 5,
    seed: int = 0,
    t: float = 0.0,
    tolerance: float = 1e-6,
    packet: dict | None = None,
) -> list[Check]:
    """Every pairwise commutator of the available Poincare generators against the covariant relations."""
    from .transforms import default_packet
    from .states import random_amplitudes

    rng = np.random.default_rng(seed)
    gens = GeneratorSet(lattice, "x", t)
    basis = gens.labels(POINCARE_BASIS)
    packet = packet or default_packet(lattice)
    out = []
    for trial in range(n_trials):
        f = synthesize_sf(random_amplitudes(lattice, rng, **packet), t)
        cache: dict = {}
        for left, right in combinations(basis, 2):
            res = commutator_residual(gens, left, right, f, poincare_rhs(left, right), cache)
            out.append(Check(f"[{left},{right}]_{trial}", res, tolerance))
    return out


def check_symmetry_commutators(
    lattice: Lattice,
    n_trials: int = 5,
    seed: int = 0,
    t: float = 0.0,
    tolerance: float = 1e-6,
    packet: dict | None = None,
) -> list[Check]:
    """[G, omega] = -i dG/dt for every available generator (Heisenberg constancy).

    Only boosts carry explicit time dependence, with d m_0l/dt = d j_0l/dt = p_l.
    """
    from .transforms import default_packet
    from .states import random_amplitudes

    rng = np.random.default_rng(seed)
    gens = GeneratorSet(lattice, "x", t)
    labels = gens.labels()
    packet = packet or default_packet(lattice)
    out = []
    for trial in range(n_trials):
        f = synthesize_sf(random_amplitudes(lattice, rng, **packet), t)
        cache: dict = {}
        for lab in labels:
            kind, a, b = _gen(lab)
            rhs = [(-1j, f"p{b}")] if kind in ("j", "m") and a == 0 else []
            res = commutator_residual(gens, lab, "p0", f, rhs, cache)
            out.append(Check(f"[{lab},omega]_{trial}", res, tolerance))
    return out


def check_hermiticity(lattice: Lattice, n_trials: int = 2, seed: int = 0, t: float = 0.0, packet: dict | None = None) -> list[Check]:
    from .transforms import default_packet
    from .states import random_amplitudes

    rng = np.random.default_rng(seed)
    gens = GeneratorSet(lattice, "x", t)
    packet = packet or default_packet(lattice)
    out = []
    for trial in range(n_trials):
        f = synthesize_sf(random_amplitudes(lattice, rng, **packet), t)
        g = synthesize_sf(random_amplitudes(lattice, rng, **packet), t)
        for lab in gens.labels() + ["g"]:
            lhs = g.inner(gens.apply(lab, f))
            rhs = gens.apply(lab, g).inner(f)
            out.append(Check(f"hermitian_{lab}_{trial}", abs(lhs - rhs) / (f.norm() * g.norm()), HERMITIAN_TOL))
    return out


def check_cross_realization(amps: AmplitudeSet, t: float = 0.0, tolerance: float = 1e-8) -> list[Check]:
    """Means in the x- and k-realizations, and amplitude-space means at t = 0.

    The amplitude-space generators carry no explicit time, so that comparison is
    made at t = 0 only.
    """
    lat = amps.lattice
    f = synthesize_sf(amps, t)
    x_means = means(f, GeneratorSet(lat, "x", t))
    k_means = means(to_momentum(f), GeneratorSet(lat, "k", t))
    out = []
    for name, value in x_means.items():
        scale = max(1.0, abs(value))
        out.append(Check(f"x_vs_k_{name}", abs(value - k_means[name]) / scale, tolerance))
    f0 = synthesize_sf(amps, 0.0)
    pos = means(f0, GeneratorSet(lat, "x", 0.0), MAIN)
    amp = amplitude_means(amps)
    for name, value in pos.items():
        scale = max(1.0, abs(value))
        out.append(Check(f"position_vs_amplitude_{name}", abs(value - amp[name]) / scale, tolerance))
    return out


def check_decomposition(lattice: Lattice, n_trials: int = 2, seed: int = 0, t: float = 0.0, packet: dict | None = None) -> list[Check]:
    """j = m + s as actions, and [s_ln, m_rs] f = 0, on random packets."""
    from .transforms import default_packet
    from .states import random_amplitudes

    rng = np.random.default_rng(seed)
    gens = GeneratorSet(lattice, "x", t)
    packet = packet or default_packet(lattice)
    spins = [lab for lab in gens.labels() if lab.startswith("s") and not lab.startswith("sb")]
    orbitals = [lab for lab in gens.labels() if lab.startswith("m")]
    out = []
    for trial in range(n_trials):
        f = synthesize_sf(random_amplitudes(lattice, rng, **packet), t)
        for lab in orbitals:
            j = gens.apply("j" + lab[1:], f)
            parts = gens.apply(lab, f).data
            if lab[1] != "0":
                parts = parts + gens.apply("s" + lab[1:], f).data
            else:
                parts = parts - gens.apply(f"sb{lab[2]}", f).data
            out.append(Check(f"j=m+s_{lab[1:]}_{trial}", np.abs(j.data - parts).max(), 1e-12))
        for s_lab in spins:
            for m_lab in orbitals:
                res = commutator_residual(gens, s_lab, m_lab, f, [])
                out.append(Check(f"[{s_lab},{m_lab}]_{trial}", res, 1e-12))
    return out
