"""Exact 4x4 Dirac algebra, including partly antilinear operators.

Every matrix here has entries in {0, +-1, +-i, +-1/2, +-i/2}; products of such
numbers are exact in binary floating point, so identities are checked with
exact equality rather than tolerances.

An operator of the form ``M K_mask`` (conjugate the masked components, then
multiply by ``M``) is a :class:`ConjugatingMatrixOp`.  This covers linear
matrices (empty mask), fully antilinear operators such as ``gamma^1 C`` (full
mask), and the block map ``v = diag(I2, C I2)`` (mask on the lower block).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

I2 = np.eye(2, dtype=complex)
Z2 = np.zeros((2, 2), dtype=complex)
I4 = np.eye(4, dtype=complex)

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

LEVI_CIVITA = np.zeros((3, 3, 3))
for _a, _b, _c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    LEVI_CIVITA[_a, _b, _c] = 1.0
    LEVI_CIVITA[_a, _c, _b] = -1.0


class NonRepresentableError(ValueError):
    """Composition cannot be written as a single matrix times a conjugation mask."""


def block(a, b, c, d) -> np.ndarray:
    return np.block([[a, b], [c, d]]).astype(complex)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


@dataclass(frozen=True, eq=False)
class ConjugatingMatrixOp:
    """Real-linear operator ``s -> matrix @ K_mask(s)`` on C^4."""

    matrix: np.ndarray
    conj_mask: tuple[bool, bool, bool, bool] = (False, False, False, False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "conj_mask", tuple(bool(b) for b in self.conj_mask))
        if len(self.conj_mask) != 4:
            raise ValueError("conj_mask needs exactly 4 entries")

    @classmethod
    def linear(cls, matrix) -> "ConjugatingMatrixOp":
        return cls(matrix, (False,) * 4)

    @classmethod
    def antilinear(cls, matrix) -> "ConjugatingMatrixOp":
        return cls(matrix, (True,) * 4)

    @property
    def is_linear(self) -> bool:
        return not any(self.conj_mask)

    def __call__(self, spinor: np.ndarray) -> np.ndarray:
        """Apply to a spinor, or to an array whose leading axis has length 4."""
        s = np.asarray(spinor, dtype=complex)
        mask = np.array(self.conj_mask)
        s = np.where(mask.reshape((4,) + (1,) * (s.ndim - 1)), np.conj(s), s)
        return np.tensordot(self.matrix, s, axes=(1, 0))

    def __matmul__(self, other: "ConjugatingMatrixOp") -> "ConjugatingMatrixOp":
        """Composition ``self o other`` (``other`` acts first)."""
        outer = np.array(self.conj_mask)
        inner = other.matrix
        new_mask = []
        for j in range(4):
            rows = np.nonzero(inner[:, j])[0]
            flips = set(outer[rows].tolist())
            if len(flips) > 1:
                raise NonRepresentableError(
                    f"input component {j} would be both conjugated and not"
                )
            flip = flips.pop() if flips else False
            new_mask.append(other.conj_mask[j] ^ flip)
        conj_rows = np.where(outer[:, None], np.conj(inner), inner)
        return ConjugatingMatrixOp(self.matrix @ conj_rows, tuple(new_mask))

    def __neg__(self) -> "ConjugatingMatrixOp":
        return ConjugatingMatrixOp(-self.matrix, self.conj_mask)

    def scaled(self, factor: complex) -> "ConjugatingMatrixOp":
        """Left multiplication by a complex scalar: ``factor * self``."""
        return ConjugatingMatrixOp(factor * self.matrix, self.conj_mask)

    def real_basis_images(self) -> np.ndarray:
        """Images of the 8 real basis spinors {d_a, i d_a}, shape (8, 4)."""
        return np.array([self(v) for v in REAL_BASIS])

    def equals(self, other: "ConjugatingMatrixOp") -> bool:
        """Exact operator equality, decided on the real basis of C^4."""
        return np.array_equal(self.real_basis_images(), other.real_basis_images())


REAL_BASIS = np.concatenate([I4, 1j * I4])

IDENTITY_OP = ConjugatingMatrixOp.linear(I4)

# v = diag(I2, C I2)
V_OP = ConjugatingMatrixOp(I4, (False, False, True, True))


def anticommutes_to(a: ConjugatingMatrixOp, b: ConjugatingMatrixOp, value: float) -> bool:
    """Check ``ab + ba == value * I`` as an action identity on the real basis."""
    lhs = (a @ b).real_basis_images() + (b @ a).real_basis_images()
    return np.array_equal(lhs, value * REAL_BASIS)


def build_gamma_pd() -> list[np.ndarray]:
    """Dirac matrices gamma^0..gamma^3 in the Pauli-Dirac representation plus gamma^4.

    ``gamma^4 = gamma^0 gamma^1 gamma^2 gamma^3``.
    """
    g0 = block(I2, Z2, Z2, -I2)
    gk = [block(Z2, s, -s, Z2) for s in PAULI]
    g4 = g0 @ gk[0] @ gk[1] @ gk[2]
    return [g0, *gk, g4]


def build_gamma_bar() -> list[ConjugatingMatrixOp]:
    """Quantum-mechanical representation: gamma-bar^0..gamma-bar^4.

    gamma-bar^0 = gamma^0, gamma-bar^1 = gamma^1 C, gamma-bar^2 = gamma^0 gamma^2 C,
    gamma-bar^3 = gamma^3 C, gamma-bar^4 = gamma^0 gamma^4 C.
    """
    g = build_gamma_pd()
    return [
        ConjugatingMatrixOp.linear(g[0]),
        ConjugatingMatrixOp.antilinear(g[1]),
        ConjugatingMatrixOp.antilinear(g[0] @ g[2]),
        ConjugatingMatrixOp.antilinear(g[3]),
        ConjugatingMatrixOp.antilinear(g[0] @ g[4]),
    ]


class SpinTriple(NamedTuple):
    s1: np.ndarray
    s2: np.ndarray
    s3: np.ndarray


def build_spin_and_charge() -> tuple[SpinTriple, np.ndarray]:
    """Doublet spin ``s = 1/2 diag(sigma, -conj(sigma))`` and charge sign ``g = -gamma^0``.

    The lower spin block ``-C sigma C`` acts linearly as ``-conj(sigma)``.
    """
    spin = SpinTriple(*(0.5 * block(s, Z2, Z2, -np.conj(s)) for s in PAULI))
    charge = -build_gamma_pd()[0]
    return spin, charge


def spin_from_gamma_bar() -> SpinTriple:
    """``s = (i/2)(gb2 gb3, gb3 gb1, gb1 gb2)`` composed from the antilinear gamma-bars."""
    gb = build_gamma_bar()
    out = []
    for a, b in ((2, 3), (3, 1), (1, 2)):
        prod = gb[a] @ gb[b]
        if not prod.is_linear:
            raise NonRepresentableError(f"gamma-bar^{a} gamma-bar^{b} is not linear")
        out.append(0.5j * prod.matrix)
    return SpinTriple(*out)


def spin_tensor(spin: SpinTriple | None = None) -> np.ndarray:
    """Antisymmetric s_{ln} with s_{23}=s^1, s_{31}=s^2, s_{12}=s^3; shape (3, 3, 4, 4)."""
    if spin is None:
        spin, _ = build_spin_and_charge()
    out = np.zeros((3, 3, 4, 4), dtype=complex)
    for j, s in enumerate(spin):
        out += LEVI_CIVITA[j][:, :, None, None] * s
    return out


def alpha_beta() -> tuple[list[np.ndarray], np.ndarray]:
    """Dirac Hamiltonian matrices alpha^k = gamma^0 gamma^k and beta = gamma^0."""
    g = build_gamma_pd()
    return [g[0] @ g[k] for k in (1, 2, 3)], g[0]


def check_clifford_relations() -> list[tuple[str, bool]]:
    """All exact algebraic identities, one (name, ok) pair per check."""
    checks: list[tuple[str, bool]] = []
    g = build_gamma_pd()
    for mu in range(4):
        for nu in range(mu, 4):
            ok = np.array_equal(anticommutator(g[mu], g[nu]), 2 * METRIC[mu, nu] * I4)
            checks.append((f"pd_anticomm_{mu}{nu}", ok))
    checks.append(("pd_gamma4_product", np.array_equal(g[4], g[0] @ g[1] @ g[2] @ g[3])))

    gb = build_gamma_bar()
    for mu in range(4):
        for nu in range(mu, 4):
            ok = anticommutes_to(gb[mu], gb[nu], 2 * METRIC[mu, nu])
            checks.append((f"bar_anticomm_{mu}{nu}", ok))
    # lowered: gb_0 = gb^0, gb_l = -gb^l
    checks.append(("bar_inverse_0", (gb[0] @ gb[0]).equals(IDENTITY_OP)))
    for l in (1, 2, 3):
        lower = -gb[l]
        checks.append((f"bar_inverse_{l}", (lower @ -lower).equals(IDENTITY_OP)))
    for mu in range(5):
        sandwich = V_OP @ ConjugatingMatrixOp.linear(g[mu]) @ V_OP
        checks.append((f"bar_via_v_{mu}", sandwich.equals(gb[mu])))
    checks.append(("v_involution", (V_OP @ V_OP).equals(IDENTITY_OP)))
    return checks


def check_spin_relations() -> list[tuple[str, bool]]:
    checks: list[tuple[str, bool]] = []
    spin, charge = build_spin_and_charge()
    for j in range(3):
        for l in range(3):
            rhs = sum(1j * LEVI_CIVITA[j, l, n] * spin[n] for n in range(3))
            checks.append((f"su2_{j + 1}{l + 1}", np.array_equal(commutator(spin[j], spin[l]), rhs)))
        checks.append((f"spin_charge_commute_{j + 1}", not commutator(spin[j], charge).any()))
        checks.append((f"spin_hermitian_{j + 1}", np.array_equal(spin[j], spin[j].conj().T)))
    casimir = sum(s @ s for s in spin)
    checks.append(("spin_casimir", np.array_equal(casimir, 0.75 * I4)))
    checks.append(("s3_eigenvalues", np.array_equal(np.diag(spin.s3), [0.5, -0.5, -0.5, 0.5])))
    checks.append(("s3_diagonal", np.array_equal(spin.s3, np.diag(np.diag(spin.s3)))))
    checks.append(("charge_eigenvalues", np.array_equal(charge, np.diag([-1.0, -1, 1, 1]).astype(complex))))

    from_bar = spin_from_gamma_bar()
    for j in range(3):
        checks.append((f"spin_from_gamma_bar_{j + 1}", np.array_equal(from_bar[j], spin[j])))
    return checks
