"""Measurement-conditioned linear-optical gates.

The nonlinear sign (NS) gate uses one signal mode and two ancilla modes
prepared in ``|1, 0>``. Splitters BS1 = BS3 (type 1, reflectivity ``eta1``)
couple the two ancillas; BS2 (type 2, reflectivity ``eta2``) couples the
signal to the photon-carrying ancilla. Heralding one photon on that ancilla
and none on the other applies ``|2> -> -|2>`` with amplitude 1/2.

The C-Z gate mixes the ``|1>_L`` rails of two dual-rail qubits on a 50/50
splitter, sends each arm through an NS gate and recombines them on the
conjugate splitter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .fock import ConditionedResult, DualRailQubit, PureState, make_basis, measure_modes, tensor
from .network import ModeUnitary, apply, asymmetric_bs, beam_splitter, compose
from .polarization import HADAMARD, dual_rail_embed

DetectionPattern = Mapping[int, int]

CONTROL = DualRailQubit(0, 1)
TARGET = DualRailQubit(2, 3)


@dataclass(frozen=True)
class NsGateSpec:
    eta1: float = 1.0 / (4.0 - 2.0 * math.sqrt(2.0))
    eta2: float = (math.sqrt(2.0) - 1.0) ** 2


def ns_elements(spec: NsGateSpec = NsGateSpec(), signal: int = 0, ancillas=(1, 2), M: int = 3) -> list[ModeUnitary]:
    photon, empty = ancillas
    bs1 = asymmetric_bs(spec.eta1, "type1", (photon, empty), M)
    bs2 = asymmetric_bs(spec.eta2, "type2", (signal, photon), M)
    return [bs1, bs2, bs1]


def ns_network(spec: NsGateSpec = NsGateSpec(), signal: int = 0, ancillas=(1, 2), M: int = 3) -> ModeUnitary:
    return compose(ns_elements(spec, signal, ancillas, M))


def run_conditioned(
    network: ModeUnitary,
    input: PureState,
    ancilla_in: Sequence[int],
    pattern: DetectionPattern,
) -> ConditionedResult:
    """Append ancilla modes, evolve, and post-select on ``pattern``.

    Ancilla modes follow the input modes, so ``pattern`` keys index the
    combined system. Only outputs consistent with ``pattern`` are computed.
    """
    full = tensor(input, make_basis(ancilla_in)) if len(ancilla_in) else input
    if network.M != full.mode_count:
        raise ValueError(f"network has {network.M} modes, input plus ancillas has {full.mode_count}")
    pattern = {int(k): int(v) for k, v in pattern.items()}
    projected = apply(network, full, fixed=pattern)
    return measure_modes(projected, list(pattern), list(pattern.values()))


def ns_gate(input: PureState, spec: NsGateSpec = NsGateSpec()) -> ConditionedResult:
    if input.mode_count != 1:
        raise ValueError("NS gate acts on a single signal mode")
    if max(input.photon_numbers) > 2:
        raise ValueError("NS gate input must be supported on 0, 1, 2 photons")
    return run_conditioned(ns_network(spec), input, (1, 0), {1: 1, 2: 0})


def cz_elements(spec: NsGateSpec = NsGateSpec()) -> list[tuple[str, ModeUnitary]]:
    """Labeled element list of the 8-mode C-Z network.

    Modes 0-3 carry the control (rails 0, 1) and target (rails 2, 3);
    modes 4, 5 and 6, 7 are the ancillas of the NS gates on modes 0 and 2.
    """
    M = 8
    out = [("bs50", beam_splitter(math.pi / 2, -math.pi / 2, (0, 2), M))]
    for signal, anc in ((0, (4, 5)), (2, (6, 7))):
        out += [("asym_bs", el) for el in ns_elements(spec, signal, anc, M)]
    out.append(("bs50", beam_splitter(math.pi / 2, math.pi / 2, (0, 2), M)))
    return out


CZ_ANCILLA_IN = (1, 0, 1, 0)
CZ_PATTERN = {4: 1, 5: 0, 6: 1, 7: 0}


def cz_network(spec: NsGateSpec = NsGateSpec()) -> ModeUnitary:
    return compose([u for _, u in cz_elements(spec)])


def _check_qubit(q: PureState, name: str):
    if q.mode_count != 2 or q.photon_numbers != {1}:
        raise ValueError(f"{name} must be a single-photon state on two rails")
    if not q.normalized:
        raise ValueError(f"{name} must be normalized")


def _two_qubit_input(q1: PureState, q2: PureState) -> PureState:
    _check_qubit(q1, "control")
    _check_qubit(q2, "target")
    return tensor(q1, q2)


def cz_gate(q1: PureState, q2: PureState, spec: NsGateSpec = NsGateSpec()) -> ConditionedResult:
    """Heralded C-Z on two dual-rail qubits given as 2-mode states."""
    return run_conditioned(cz_network(spec), _two_qubit_input(q1, q2), CZ_ANCILLA_IN, CZ_PATTERN)


def cnot_gate(q1: PureState, q2: PureState, spec: NsGateSpec = NsGateSpec()) -> ConditionedResult:
    """CNOT as Hadamard on the target, C-Z, Hadamard on the target."""
    h = dual_rail_embed(HADAMARD, DualRailQubit(2, 3), 8).matrix
    u = h @ cz_network(spec).matrix @ h
    return run_conditioned(ModeUnitary(u), _two_qubit_input(q1, q2), CZ_ANCILLA_IN, CZ_PATTERN)


def kerr_phase(s: PureState, modes: Sequence[int], varphi: float) -> PureState:
    """Cross-Kerr phase ``exp(i varphi n_a n_b)`` applied term by term."""
    a, b = modes
    if a == b:
        raise ValueError("Kerr coupling needs two distinct modes")
    return s.map_phases(lambda occ: varphi * occ[a] * occ[b])


def logical_state(amplitudes: Mapping[str, complex] | Sequence[complex]) -> PureState:
    """Two-qubit dual-rail state from logical amplitudes ordered 00, 01, 10, 11."""
    if isinstance(amplitudes, Mapping):
        amplitudes = [amplitudes.get(k, 0) for k in ("00", "01", "10", "11")]
    rails = {0: (0, 1), 1: (1, 0)}
    terms = []
    for idx, amp in enumerate(amplitudes):
        c, t = divmod(idx, 2)
        terms.append((rails[c] + rails[t], amp))
    return PureState(terms, 4)


def qubit(alpha0: complex, alpha1: complex) -> PureState:
    """Normalized dual-rail qubit on rails (l=0, k=1)."""
    return PureState({(0, 1): alpha0, (1, 0): alpha1}, 2).normalize()


def logical_amplitudes(s: PureState) -> np.ndarray:
    """Amplitudes on ``|00>_L, |01>_L, |10>_L, |11>_L`` of a 4-mode state."""
    rails = {0: (0, 1), 1: (1, 0)}
    return np.array([s[rails[c] + rails[t]] for c in (0, 1) for t in (0, 1)])
