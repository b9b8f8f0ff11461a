"""Interferometric phase sensitivity, Yurke-state heralding, NOON lithography."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .fock import ConditionedResult, PureState, make_basis, measure_modes
from .network import ModeUnitary, apply, beam_splitter, compose, phase_shifter

DIVERGENT = math.inf
FD_STEP = 1e-5


@dataclass(frozen=True)
class MzConfig:
    """Mach-Zehnder setup.

    ``input_state`` enters the first 50/50 splitter unless ``in_arms`` is
    set, in which case it is taken to already occupy the two arms.
    ``observable`` is ``"difference_current"`` (n_out1 - n_out2) or
    ``"parity"`` ((-1)^n_out1).
    """

    input_state: PureState
    phase: float = math.pi / 2
    observable: str = "difference_current"
    in_arms: bool = False

    def __post_init__(self):
        if self.input_state.mode_count != 2:
            raise ValueError("Mach-Zehnder input must have two modes")
        if self.observable not in ("difference_current", "parity"):
            raise ValueError(f"unknown observable {self.observable!r}")


def _mz_output(cfg: MzConfig, phase: float) -> PureState:
    elements = [phase_shifter(phase, 0, 2), beam_splitter(math.pi / 2, -math.pi / 2, (0, 1))]
    if not cfg.in_arms:
        elements.insert(0, beam_splitter(math.pi / 2, -math.pi / 2, (0, 1)))
    return apply(compose(elements), cfg.input_state)


def _moments(cfg: MzConfig, phase: float) -> tuple[float, float]:
    out = _mz_output(cfg, phase)
    first = second = 0.0
    for (n1, n2), amp in out:
        p = abs(amp) ** 2
        o = (n1 - n2) if cfg.observable == "difference_current" else (-1) ** n1
        first += p * o
        second += p * o * o
    return first, second


def mz_expectation(cfg: MzConfig, phase: Optional[float] = None) -> float:
    return _moments(cfg, cfg.phase if phase is None else phase)[0]


def _slope(cfg: MzConfig, phase: float, h: float = FD_STEP) -> float:
    def central(step):
        return (mz_expectation(cfg, phase + step) - mz_expectation(cfg, phase - step)) / (2 * step)

    # one Richardson step on the central difference
    return (4 * central(h / 2) - central(h)) / 3


def mz_sensitivity(cfg: MzConfig, phase: Optional[float] = None) -> float:
    """Error-propagation phase uncertainty ``dO / |d<O>/dphi|``.

    Returns ``DIVERGENT`` (infinity) where the fringe slope vanishes.
    """
    phase = cfg.phase if phase is None else phase
    mean, second = _moments(cfg, phase)
    slope = _slope(cfg, phase)
    if abs(slope) < 1e-12:
        return DIVERGENT
    return math.sqrt(max(second - mean * mean, 0.0)) / abs(slope)


def best_sensitivity(cfg: MzConfig, points: int = 64) -> tuple[float, float]:
    """Smallest sensitivity over a phase grid, as ``(phase, delta_phi)``.

    Grid points where the slope is under half its maximum are skipped: there
    both numerator and slope vanish and the ratio is round-off.
    """
    phases = (np.arange(points) + 0.5) * (2 * math.pi / points)
    slopes = np.array([abs(_slope(cfg, p)) for p in phases])
    if slopes.max() < 1e-12:
        return float(phases[0]), DIVERGENT
    best = (float(phases[0]), DIVERGENT)
    for p, sl in zip(phases, slopes):
        if sl < 0.5 * slopes.max():
            continue
        d = mz_sensitivity(cfg, float(p))
        if d < best[1]:
            best = (float(p), d)
    return best


def fock_input(N: int) -> PureState:
    return make_basis([N, 0])


def noon_state(N: int, relative_phase: float = 0.0) -> PureState:
    if N == 0:
        return make_basis([0, 0])
    return PureState({(N, 0): 1 / math.sqrt(2), (0, N): np.exp(1j * relative_phase) / math.sqrt(2)}, 2)


def two_term_fidelity(state: PureState, first: tuple[int, ...], second: tuple[int, ...]) -> float:
    """Fidelity to ``(|first> + e^{ix}|second>)/sqrt(2)`` maximized over ``x``."""
    a = abs(state[first])
    b = abs(state[second])
    return min(1.0, 0.5 * (a + b) ** 2 / state.norm ** 2)


# --- Yurke-state generation -------------------------------------------------

MAIN_A, MAIN_B, TAP_A, TAP_B = 0, 1, 2, 3


@dataclass(frozen=True)
class YurkeSchemeSpec:
    """Dual Fock input ``|N, N>`` with taps of reflectivity ``tap_reflectivity``.

    ``condition`` is ``"coincidence"`` (one click on each detector) or
    ``"single_click"`` (one photon on the first detector, none on the other).
    """

    N: int
    tap_reflectivity: Optional[float] = None
    condition: str = "coincidence"

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be at least 1")
        if self.condition not in ("coincidence", "single_click"):
            raise ValueError(f"unknown condition {self.condition!r}")
        if self.tap_reflectivity is not None and not 0.0 < self.tap_reflectivity < 1.0:
            raise ValueError("tap reflectivity must lie strictly between 0 and 1")

    @property
    def reflectivity(self) -> float:
        return 1.0 / self.N if self.tap_reflectivity is None else self.tap_reflectivity

    @property
    def pattern(self) -> dict[int, int]:
        return {TAP_A: 1, TAP_B: 1} if self.condition == "coincidence" else {TAP_A: 1, TAP_B: 0}


def yurke_network(reflectivity: float) -> ModeUnitary:
    """Main modes 0, 1 tap into modes 2, 3, which meet on a 50/50 splitter."""
    theta = 2 * math.acos(math.sqrt(1.0 - reflectivity))
    return compose(
        [
            beam_splitter(theta, -math.pi / 2, (MAIN_A, TAP_A), 4),
            beam_splitter(theta, -math.pi / 2, (MAIN_B, TAP_B), 4),
            beam_splitter(math.pi / 2, -math.pi / 2, (TAP_A, TAP_B), 4),
        ]
    )


def yurke_generate(spec: YurkeSchemeSpec) -> ConditionedResult:
    N = spec.N
    u = yurke_network(spec.reflectivity)
    pattern = spec.pattern
    projected = apply(u, make_basis([N, N, 0, 0]), fixed=pattern)
    return measure_modes(projected, list(pattern), list(pattern.values()))


def yurke_success_curve(N_max: int, N_min: int = 2) -> list[tuple[int, float]]:
    """Coincidence success probability at ``|r|^2 = 1/N`` for each ``N``."""
    if N_max < 2:
        raise ValueError("N_max must be at least 2")
    return [(N, yurke_generate(YurkeSchemeSpec(N)).probability) for N in range(N_min, N_max + 1)]


YURKE_ASYMPTOTE = 1.0 / (2.0 * math.e**2)


# --- lithography ------------------------------------------------------------


def deposition_rate(state: PureState, varphi: float) -> float:
    """N-photon absorption rate ``|<0,0| (a + b)^N e^{i varphi n_a} |psi>|^2 / N!``.

    Normalized so that a NOON state gives ``1 + cos(N varphi)``.
    """
    if state.mode_count != 2:
        raise ValueError("deposition rate needs a two-mode state")
    N = state.total_photons
    amp = 0j
    for (k, rest), c in state:
        amp += c * np.exp(1j * varphi * k) * math.sqrt(math.comb(N, k))
    return float(abs(amp) ** 2)


def classical_rates(varphi: float, N: int = 2) -> tuple[float, float]:
    """Single-photon ``1 + cos varphi`` and uncorrelated ``(1 + cos varphi)^N`` rates."""
    single = 1.0 + math.cos(varphi)
    return single, single**N
