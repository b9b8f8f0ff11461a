"""Exact Fock-space simulation of linear-optical networks with heralded measurement."""

from .fock import ConditionedResult, DualRailQubit, PureState, fidelity, make_basis, measure_modes, superpose, tensor
from .network import ModeUnitary, apply, beam_splitter, compose, phase_shifter, transition_amplitude
from .permanent import permanent

__version__ = "0.1.0"

__all__ = [
    "ConditionedResult",
    "DualRailQubit",
    "ModeUnitary",
    "PureState",
    "apply",
    "beam_splitter",
    "compose",
    "fidelity",
    "make_basis",
    "measure_modes",
    "permanent",
    "phase_shifter",
    "superpose",
    "tensor",
    "transition_amplitude",
]
