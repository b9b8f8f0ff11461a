"""Linear-optical mode unitaries and their exact action on Fock states.

Convention: a mode unitary ``U`` maps creation operators as
``a_i^dag -> sum_j U[j, i] a_j^dag``, so a single photon in mode ``i`` leaves
in the superposition given by column ``i``. Multiphoton amplitudes are

    <m|U|n> = per(U[rows(m), cols(n)]) / sqrt(prod n_i! prod m_j!)

where ``cols(n)`` repeats column ``i`` ``n_i`` times and ``rows(m)`` repeats
row ``j`` ``m_j`` times. Glynn's formula with multiplicities evaluates these
without expanding the submatrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence

import numpy as np

from .fock import PureState
from .permanent import glynn_table, permanent_repeated

UNITARY_TOL = 1e-10


@lru_cache(maxsize=None)
def _factorial(n: int) -> int:
    return math.factorial(n)


def _sqrt_fact_prod(occ: Sequence[int]) -> float:
    return math.sqrt(math.prod(_factorial(n) for n in occ))


def compositions(total: int, modes: int) -> Iterator[tuple[int, ...]]:
    """All occupation tuples of ``modes`` non-negative ints summing to ``total``."""
    if modes == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, modes - 1):
            yield (first,) + rest


def unitarity_residual(matrix: np.ndarray) -> float:
    matrix = np.asarray(matrix)
    return float(np.max(np.abs(matrix.conj().T @ matrix - np.eye(matrix.shape[0]))))


class ModeUnitary:
    """An M x M unitary acting on mode creation operators."""

    __slots__ = ("matrix",)

    def __init__(self, matrix, check: bool = True):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise ValueError(f"mode unitary must be square and non-empty, got shape {m.shape}")
        if check:
            res = unitarity_residual(m)
            if res > UNITARY_TOL:
                raise ValueError(f"matrix is not unitary (residual {res:.3g})")
        m.setflags(write=False)
        self.matrix = m

    @property
    def M(self) -> int:
        return self.matrix.shape[0]

    def dagger(self) -> ModeUnitary:
        return ModeUnitary(self.matrix.conj().T, check=False)

    def __repr__(self) -> str:
        return f"ModeUnitary(M={self.M})"


@dataclass(frozen=True)
class BeamSplitterSpec:
    theta: float
    phi: float
    modes: tuple[int, int] = (0, 1)


@dataclass(frozen=True)
class PhaseShifterSpec:
    phase: float
    mode: int = 0


def embed(block, modes: Sequence[int], M: Optional[int] = None) -> ModeUnitary:
    """Place a k x k block on ``modes`` of an ``M``-mode identity."""
    block = np.asarray(block, dtype=complex)
    modes = list(modes)
    if len(set(modes)) != len(modes):
        raise ValueError(f"repeated mode index in {modes}")
    if M is None:
        M = max(modes) + 1
    if any(i < 0 or i >= M for i in modes):
        raise ValueError(f"modes {modes} out of range for M={M}")
    u = np.eye(M, dtype=complex)
    u[np.ix_(modes, modes)] = block
    return ModeUnitary(u)


def bs_matrix(spec: BeamSplitterSpec, M: Optional[int] = None) -> ModeUnitary:
    """Beam splitter ``[[cos(t/2), e^{ip} sin(t/2)], [e^{ip} sin(t/2), cos(t/2)]]``.

    The half-angle makes ``theta = pi/2`` a 50/50 splitter.
    """
    if spec.modes[0] == spec.modes[1]:
        raise ValueError("beam splitter needs two distinct modes")
    c = math.cos(spec.theta / 2)
    s = math.sin(spec.theta / 2)
    e = np.exp(1j * spec.phi)
    return embed([[c, e * s], [e * s, c]], spec.modes, M)


def beam_splitter(theta: float, phi: float = 0.0, modes=(0, 1), M: Optional[int] = None) -> ModeUnitary:
    return bs_matrix(BeamSplitterSpec(theta, phi, tuple(modes)), M)


def phase_shifter(spec: PhaseShifterSpec | float, mode: int = 0, M: Optional[int] = None) -> ModeUnitary:
    if not isinstance(spec, PhaseShifterSpec):
        spec = PhaseShifterSpec(float(spec), mode)
    return embed([[np.exp(1j * spec.phase)]], [spec.mode], M if M is not None else spec.mode + 1)


def asymmetric_bs(eta: float, variant: str = "type1", modes=(0, 1), M: Optional[int] = None) -> ModeUnitary:
    """Phase-asymmetric splitter of reflectivity ``eta``.

    type1: ``[[sqrt(eta), sqrt(1-eta)], [sqrt(1-eta), -sqrt(eta)]]``
    type2: ``[[-sqrt(eta), sqrt(1-eta)], [sqrt(1-eta), sqrt(eta)]]``
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"reflectivity must lie in [0, 1], got {eta}")
    r = math.sqrt(eta)
    t = math.sqrt(1.0 - eta)
    if variant == "type1":
        block = [[r, t], [t, -r]]
    elif variant == "type2":
        block = [[-r, t], [t, r]]
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return embed(block, modes, M)


def compose(elements: Sequence[ModeUnitary]) -> ModeUnitary:
    """Total unitary of ``elements`` applied in order (first element acts first)."""
    if not elements:
        raise ValueError("nothing to compose")
    M = elements[0].M
    total = np.eye(M, dtype=complex)
    for el in elements:
        if el.M != M:
            raise ValueError(f"dimension mismatch: {el.M} vs {M}")
        total = el.matrix @ total
    return ModeUnitary(total)


def transition_amplitude(u: ModeUnitary | np.ndarray, n_in: Sequence[int], m_out: Sequence[int]) -> complex:
    """<m_out| U |n_in> for Fock states with equal photon number."""
    mat = u.matrix if isinstance(u, ModeUnitary) else np.asarray(u)
    if sum(n_in) != sum(m_out):
        return 0j
    per = permanent_repeated(mat, m_out, n_in)
    return per / (_sqrt_fact_prod(n_in) * _sqrt_fact_prod(m_out))


def _outputs(total: int, M: int, fixed: Optional[dict[int, int]]) -> Iterator[tuple[int, ...]]:
    if not fixed:
        yield from compositions(total, M)
        return
    free = [i for i in range(M) if i not in fixed]
    rest = total - sum(fixed.values())
    if rest < 0:
        return
    for part in compositions(rest, len(free)) if free else [()]:
        if not free and rest != 0:
            return
        occ = [0] * M
        for i, n in fixed.items():
            occ[i] = n
        for i, n in zip(free, part):
            occ[i] = n
        yield tuple(occ)


def output_amplitudes(u: ModeUnitary | np.ndarray, n_in: Sequence[int], outputs: Sequence[Sequence[int]]) -> np.ndarray:
    """<m|U|n_in> for each occupation ``m`` in ``outputs`` (same photon number)."""
    mat = u.matrix if isinstance(u, ModeUnitary) else np.asarray(u)
    if len(outputs) == 0:
        return np.zeros(0, dtype=complex)
    coef, row_sums = glynn_table(mat, n_in)
    outs = np.asarray(outputs, dtype=int)
    pers = np.prod(row_sums[:, None, :] ** outs[None, :, :], axis=2).T @ coef
    norms = np.array([_sqrt_fact_prod(m) for m in outputs]) * _sqrt_fact_prod(n_in)
    return pers / norms


def apply(u: ModeUnitary, s: PureState, fixed: Optional[dict[int, int]] = None) -> PureState:
    """Exact image of ``s`` under the Fock-space action of ``u``.

    ``fixed`` optionally restricts the computed outputs to occupations with
    the given photon counts on some modes; the result is then the
    (unnormalized) projection of the full output onto that subspace.
    """
    if u.M != s.mode_count:
        raise ValueError(f"unitary has {u.M} modes, state has {s.mode_count}")
    out: dict[tuple[int, ...], complex] = {}
    outputs_by_number: dict[int, list] = {}
    for n_in, amp in s.terms.items():
        total = sum(n_in)
        if total not in outputs_by_number:
            outputs_by_number[total] = list(_outputs(total, u.M, fixed))
        outputs = outputs_by_number[total]
        if not outputs:
            continue
        for m_out, a in zip(outputs, amp * output_amplitudes(u, n_in, outputs)):
            out[m_out] = out.get(m_out, 0j) + a
    return PureState(out, u.M)


def haar_unitary(M: int, rng: np.random.Generator) -> ModeUnitary:
    """Haar-random unitary from the QR decomposition of a complex Gaussian matrix."""
    z = (rng.standard_normal((M, M)) + 1j * rng.standard_normal((M, M))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return ModeUnitary(q * (d / np.abs(d)))
