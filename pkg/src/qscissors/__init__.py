"""Quantum-scissors noiseless amplifiers in a truncated photon-number basis."""

from .amplifiers import AmplifierConfig, HeraldOutcome, Variant, amplify, herald_table
from .fock import MultimodeState, coherent_truncated, fock_state, inner_product, project_mode, tensor
from .metrics import MeritPoint, fidelity_vs_amplified_coherent, merit_curve
from .optics import BeamSplitter, apply_bs, apply_lossy_bs, embed_tritter, make_lossless, make_lossy

__all__ = [
    "AmplifierConfig",
    "BeamSplitter",
    "HeraldOutcome",
    "MeritPoint",
    "MultimodeState",
    "Variant",
    "amplify",
    "apply_bs",
    "apply_lossy_bs",
    "coherent_truncated",
    "embed_tritter",
    "fidelity_vs_amplified_coherent",
    "fock_state",
    "herald_table",
    "inner_product",
    "make_lossless",
    "make_lossy",
    "merit_curve",
    "project_mode",
    "tensor",
]

__version__ = "0.1.0"
