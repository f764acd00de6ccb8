"""Free spin-1/2 particle-antiparticle doublet in three equivalent pictures.

The Schroedinger-Foldy (SF), Foldy-Wouthuysen (FW) and Dirac formulations on a
periodic spectral lattice, the maps v, V+- and W between them, the Poincare
generators with their conservation laws, and suites that check the identities
linking all of these.
"""
from .lattice import Lattice, SpinorField, to_momentum, to_position
from .states import AmplitudeSet, synthesize_fw, synthesize_sf
from .evolve import Picture, build_propagator, evolve, step
from .transforms import apply_v, apply_w, build_fw_kernel, verify_intertwining
from .observables import GeneratorSet, audit_conservation, build_generators, mean

__all__ = [
    "AmplitudeSet",
    "GeneratorSet",
    "Lattice",
    "Picture",
    "SpinorField",
    "apply_v",
    "apply_w",
    "audit_conservation",
    "build_fw_kernel",
    "build_generators",
    "build_propagator",
    "evolve",
    "mean",
    "step",
    "synthesize_fw",
    "synthesize_sf",
    "to_momentum",
    "to_position",
    "verify_intertwining",
]

__version__ = "0.1.0"
