"""Polarization-qubit gates built from waveplates and phase shifters.

Jones matrices act on ``(|H>, |V>) == (|0>, |1>)``. A physical waveplate of
thickness ``d`` imprints ``exp(i n2 2pi d / lambda)`` on both polarizations
on top of the relative phase ``phi`` on ``|V>``; with ``r = n2 / (n1 - n2)``
that overall factor is ``exp(i r phi)``. The synthesis routines below cancel
it with a phase shifter of ``s * theta``, ``s = (n1 + n2) / (2 (n1 - n2))``,
so the element chains reproduce the target gates including global phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .fock import DualRailQubit
from .network import ModeUnitary

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


@dataclass(frozen=True)
class WaveplateSpec:
    n1: float
    n2: float
    lam: float = 1.0
    d: Optional[float] = None
    alpha: float = 0.0

    def __post_init__(self):
        if not self.n1 > self.n2:
            raise ValueError(f"slow-axis index n1={self.n1} must exceed n2={self.n2}")
        if self.lam <= 0:
            raise ValueError("wavelength must be positive")
        if self.d is not None and self.d <= 0:
            raise ValueError("thickness must be positive")

    @property
    def r(self) -> float:
        return self.n2 / (self.n1 - self.n2)

    @property
    def s(self) -> float:
        return (self.n1 + self.n2) / (2 * (self.n1 - self.n2))

    @property
    def phi(self) -> float:
        """Relative phase of a plate of thickness ``d``."""
        if self.d is None:
            raise ValueError("thickness not set")
        return (self.n1 - self.n2) * (2 * math.pi / self.lam) * self.d


def rotation(alpha: float) -> np.ndarray:
    c, s = math.cos(alpha), math.sin(alpha)
    return np.array([[c, -s], [s, c]], dtype=complex)


def waveplate(phi: float, alpha: float = 0.0, r: float = 0.0) -> np.ndarray:
    """Jones matrix ``e^{i r phi} R(alpha) diag(1, e^{i phi}) R(-alpha)``.

    ``r = 0`` is the abstract plate with no material overall phase.
    """
    core = np.diag([1.0, np.exp(1j * phi)])
    return np.exp(1j * r * phi) * rotation(alpha) @ core @ rotation(-alpha)


def thickness_for_phase(spec: WaveplateSpec, phi: float) -> float:
    return spec.lam / (spec.n1 - spec.n2) * phi / (2 * math.pi)


def rot_x(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, 1j * s], [1j * s, c]])


def rot_y(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, s], [-s, c]], dtype=complex)


def rot_z(theta: float) -> np.ndarray:
    return np.diag([np.exp(1j * theta / 2), np.exp(-1j * theta / 2)])


def phase_gate(theta: float) -> np.ndarray:
    return np.diag([np.exp(1j * theta), np.exp(-1j * theta)])


def global_phase(theta: float) -> np.ndarray:
    return np.exp(1j * theta) * np.eye(2)


@dataclass(frozen=True)
class Waveplate:
    phi: float
    alpha: float = 0.0
    r: float = 0.0

    def matrix(self) -> np.ndarray:
        return waveplate(self.phi, self.alpha, self.r)


@dataclass(frozen=True)
class PhaseShift:
    """Common phase on both polarizations (a path-length delay)."""

    phase: float

    def matrix(self) -> np.ndarray:
        return global_phase(self.phase)


Element = Union[Waveplate, PhaseShift]


def chain_matrix(elements: Sequence[Element]) -> np.ndarray:
    """Jones matrix of ``elements`` traversed in order."""
    total = np.eye(2, dtype=complex)
    for el in elements:
        total = el.matrix() @ total
    return total


def _merge_phases(elements: list[Element]) -> list[Element]:
    # phase shifters are scalars, so they commute and collapse to one at the end
    plates = [e for e in elements if isinstance(e, Waveplate)]
    total = sum(e.phase for e in elements if isinstance(e, PhaseShift))
    return plates + [PhaseShift(total)]


def synthesize(gate: str, theta: float = 0.0, spec: Optional[WaveplateSpec] = None) -> list[Element]:
    """Waveplate/phase-shifter chain, in traversal order, realizing ``gate``.

    ``gate`` is one of ``"Rz"``, ``"Rx"``, ``"Ry"``, ``"H"``. Plates carry
    the material phase ``r`` of ``spec``; the emitted phase shifters make
    the chain equal the target matrix exactly, global phase included.
    """
    if spec is None:
        spec = WaveplateSpec(1.5, 1.0, 1.0)
    r, s = spec.r, spec.s
    gate = gate.lower()
    if gate == "rz":
        return [Waveplate(-theta, 0.0, r), PhaseShift(s * theta)]
    if gate == "rx":
        return [Waveplate(-theta, math.pi / 4, r), PhaseShift(s * theta)]
    if gate == "ry":
        # R_y(t) = R_z(-pi/2) R_x(t) R_z(pi/2); R_z(pi/2) is traversed first
        return (
            synthesize("rz", math.pi / 2, spec)
            + synthesize("rx", theta, spec)
            + synthesize("rz", -math.pi / 2, spec)
        )
    if gate in ("h", "hadamard"):
        # H = e^{-i pi/2} R_z(pi/2) R_x(pi/2) R_z(pi/2)
        chain = (
            synthesize("rz", math.pi / 2, spec)
            + synthesize("rx", math.pi / 2, spec)
            + synthesize("rz", math.pi / 2, spec)
            + [PhaseShift(-math.pi / 2)]
        )
        return _merge_phases(chain)
    raise ValueError(f"unknown gate {gate!r}")


def target_matrix(gate: str, theta: float = 0.0) -> np.ndarray:
    gate = gate.lower()
    if gate == "rz":
        return rot_z(theta)
    if gate == "rx":
        return rot_x(theta)
    if gate == "ry":
        return rot_y(theta)
    if gate in ("h", "hadamard"):
        return HADAMARD.copy()
    raise ValueError(f"unknown gate {gate!r}")


def dual_rail_embed(j: np.ndarray, qubit: DualRailQubit, M: int) -> ModeUnitary:
    """Mode unitary acting as Jones matrix ``j`` on a dual-rail qubit.

    Logical ``|0>`` (photon on rail ``k``) plays ``|H>``, logical ``|1>``
    (photon on rail ``l``) plays ``|V>``; this is the relabeling a polarizing
    beam splitter performs.
    """
    l, k = qubit.l, qubit.k
    if not (0 <= l < M and 0 <= k < M):
        raise ValueError(f"rails {(l, k)} out of range for M={M}")
    j = np.asarray(j, dtype=complex)
    u = np.eye(M, dtype=complex)
    idx = [k, l]
    u[np.ix_(idx, idx)] = j
    return ModeUnitary(u)
