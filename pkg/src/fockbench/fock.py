"""Sparse multimode Fock-state vectors.

A :class:`PureState` maps occupation tuples to complex amplitudes. Modes are
indexed ``0..M-1`` left to right, so ``(1, 0, 1, 0)`` is one photon in the
first and third modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

PRUNE_TOL = 1e-14

Occupation = tuple[int, ...]


def _check_occupation(occ: Sequence[int]) -> Occupation:
    occ = tuple(int(n) for n in occ)
    if any(n < 0 for n in occ):
        raise ValueError(f"negative occupation in {occ}")
    return occ


@dataclass(frozen=True)
class PureState:
    """Immutable sparse superposition of Fock basis states.

    Amplitudes below ``PRUNE_TOL`` in magnitude are dropped on construction.
    The state need not be normalized; see :attr:`normalized`.
    """

    terms: Mapping[Occupation, complex]
    mode_count: int

    def __init__(self, terms: Mapping[Sequence[int], complex] | Iterable, mode_count: Optional[int] = None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Occupation, complex] = {}
        for occ, amp in items:
            occ = _check_occupation(occ)
            if mode_count is None:
                mode_count = len(occ)
            if len(occ) != mode_count:
                raise ValueError(f"occupation {occ} does not have {mode_count} modes")
            clean[occ] = clean.get(occ, 0j) + complex(amp)
        if mode_count is None or mode_count < 1:
            raise ValueError("mode_count must be a positive integer")
        clean = {k: v for k, v in clean.items() if abs(v) >= PRUNE_TOL}
        object.__setattr__(self, "terms", MappingProxyType(clean))
        object.__setattr__(self, "mode_count", int(mode_count))

    def __reduce__(self):
        return (PureState, (dict(self.terms), self.mode_count))

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __getitem__(self, occ: Sequence[int]) -> complex:
        return self.terms.get(tuple(occ), 0j)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PureState)
            and self.mode_count == other.mode_count
            and dict(self.terms) == dict(other.terms)
        )

    def __hash__(self):
        return hash((self.mode_count, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        body = " + ".join(f"({amp:.6g})|{','.join(map(str, occ))}>" for occ, amp in sorted(self.terms.items()))
        return f"PureState({body or '0'})"

    @property
    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.terms.values()))

    @property
    def normalized(self) -> bool:
        return abs(self.norm - 1.0) < 1e-10

    @property
    def photon_numbers(self) -> set[int]:
        return {sum(occ) for occ in self.terms}

    @property
    def total_photons(self) -> int:
        """Photon number of a state with definite photon number."""
        numbers = self.photon_numbers
        if len(numbers) != 1:
            raise ValueError(f"state has indefinite photon number {sorted(numbers)}")
        return numbers.pop()

    def normalize(self) -> PureState:
        n = self.norm
        if n == 0:
            raise ValueError("cannot normalize the zero vector")
        return PureState({k: v / n for k, v in self.terms.items()}, self.mode_count)

    def scale(self, factor: complex) -> PureState:
        return PureState({k: v * factor for k, v in self.terms.items()}, self.mode_count)

    def map_phases(self, phase_fn) -> PureState:
        """Multiply each term by ``exp(1j * phase_fn(occupation))``."""
        return PureState(
            {k: v * np.exp(1j * phase_fn(k)) for k, v in self.terms.items()},
            self.mode_count,
        )

    def inner(self, other: PureState) -> complex:
        """<self|other>."""
        if self.mode_count != other.mode_count:
            raise ValueError(f"mode count mismatch: {self.mode_count} vs {other.mode_count}")
        return sum(
            (amp.conjugate() * other.terms[occ] for occ, amp in self.terms.items() if occ in other.terms),
            0j,
        )

    def permute_modes(self, order: Sequence[int]) -> PureState:
        """New state whose mode ``i`` is this state's mode ``order[i]``."""
        if sorted(order) != list(range(self.mode_count)):
            raise ValueError(f"{order} is not a permutation of {self.mode_count} modes")
        return PureState(
            {tuple(occ[j] for j in order): amp for occ, amp in self.terms.items()},
            self.mode_count,
        )

    def __add__(self, other: PureState) -> PureState:
        if self.mode_count != other.mode_count:
            raise ValueError("mode count mismatch")
        out = dict(self.terms)
        for occ, amp in other.terms.items():
            out[occ] = out.get(occ, 0j) + amp
        return PureState(out, self.mode_count)

    def __sub__(self, other: PureState) -> PureState:
        return self + other.scale(-1)


@dataclass(frozen=True)
class DualRailQubit:
    """Rails ``(l, k)``: logical 0 puts the photon in ``k``, logical 1 in ``l``."""

    l: int
    k: int

    def __post_init__(self):
        if self.l == self.k:
            raise ValueError("dual-rail qubit needs two distinct modes")

    @property
    def mode_pair(self) -> tuple[int, int]:
        return (self.l, self.k)


@dataclass(frozen=True)
class ConditionedResult:
    """Outcome of a projective photon-count measurement.

    ``state`` is ``None`` for an impossible (zero-probability) outcome.
    """

    state: Optional[PureState]
    probability: float
    pattern: Mapping[int, int] = field(default_factory=dict)

    @property
    def empty(self) -> bool:
        return self.state is None


def make_basis(occupations: Sequence[int]) -> PureState:
    if len(occupations) == 0:
        raise ValueError("need at least one mode")
    occ = _check_occupation(occupations)
    return PureState({occ: 1.0}, len(occ))


def superpose(*pairs: tuple[complex, Sequence[int]], normalize: bool = True) -> PureState:
    """Build ``sum_i c_i |occ_i>`` from ``(c_i, occ_i)`` pairs."""
    state = PureState([(occ, c) for c, occ in pairs])
    return state.normalize() if normalize else state


def tensor(a: PureState, b: PureState) -> PureState:
    terms = {}
    for occ_a, amp_a in a.terms.items():
        for occ_b, amp_b in b.terms.items():
            terms[occ_a + occ_b] = amp_a * amp_b
    return PureState(terms, a.mode_count + b.mode_count)


def dual_rail_state(qubit: DualRailQubit, alpha0: complex, alpha1: complex, mode_count: int) -> PureState:
    """``alpha0 |0>_L + alpha1 |1>_L`` on the given rails; other modes empty."""
    zero = [0] * mode_count
    one = [0] * mode_count
    zero[qubit.k] = 1
    one[qubit.l] = 1
    return PureState([(zero, alpha0), (one, alpha1)], mode_count)


def measure_modes(s: PureState, modes: Sequence[int], counts: Sequence[int]) -> ConditionedResult:
    """Project ``modes`` onto photon numbers ``counts``.

    The returned state has the measured modes removed and is renormalized.
    The probability is the summed squared magnitude of matching terms.
    """
    modes = [int(m) for m in modes]
    counts = [int(c) for c in counts]
    if len(modes) != len(counts):
        raise ValueError("modes and counts differ in length")
    if len(set(modes)) != len(modes):
        raise ValueError(f"repeated mode in {modes}")
    if any(m < 0 or m >= s.mode_count for m in modes):
        raise ValueError(f"mode index out of range for {s.mode_count} modes")
    if any(c < 0 for c in counts):
        raise ValueError("negative photon count")
    pattern = dict(zip(modes, counts))
    keep = [i for i in range(s.mode_count) if i not in pattern]
    if not keep:
        raise ValueError("cannot measure every mode")

    kept: dict[Occupation, complex] = {}
    prob = 0.0
    for occ, amp in s.terms.items():
        if all(occ[m] == c for m, c in pattern.items()):
            prob += abs(amp) ** 2
            reduced = tuple(occ[i] for i in keep)
            kept[reduced] = kept.get(reduced, 0j) + amp
    if prob == 0.0:
        return ConditionedResult(None, 0.0, pattern)
    scale = 1.0 / math.sqrt(prob)
    return ConditionedResult(PureState({k: v * scale for k, v in kept.items()}, len(keep)), prob, pattern)


def fidelity(a: PureState, b: PureState) -> float:
    """Phase-insensitive overlap ``|<a|b>|^2`` of two normalized states."""
    if a.mode_count != b.mode_count:
        raise ValueError(f"mode count mismatch: {a.mode_count} vs {b.mode_count}")
    if not (a.normalized and b.normalized):
        raise ValueError("fidelity needs normalized states")
    return min(1.0, abs(a.inner(b)) ** 2)
