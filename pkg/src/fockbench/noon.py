"""R-port NOON-state generating machines.

A machine feeds Fock inputs into an R-mode unitary and heralds on photon
counts in R - 2 ancilla output modes; the remaining two target modes carry
the conditional state. Fidelity to ``(|N,0> + |0,N>)/sqrt(2)`` is maximized
over the relative phase of the two terms, since a phase shifter on one target
mode fixes it.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from .fock import PureState, make_basis, measure_modes
from .network import ModeUnitary, apply, compositions, output_amplitudes

FIXTURE_DIR = Path(__file__).parent / "fixtures"


@dataclass(frozen=True)
class MachineConfig:
    R: int
    inputs: tuple[int, ...]
    unitary: ModeUnitary
    pattern: tuple[int, ...]
    ancilla_modes: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(int(n) for n in self.inputs))
        object.__setattr__(self, "pattern", tuple(int(m) for m in self.pattern))
        if self.ancilla_modes is None:
            object.__setattr__(self, "ancilla_modes", tuple(range(2, self.R)))
        else:
            object.__setattr__(self, "ancilla_modes", tuple(int(a) for a in self.ancilla_modes))
        if self.R < 2:
            raise ValueError("a machine needs at least two modes")
        if len(self.inputs) != self.R or self.unitary.M != self.R:
            raise ValueError("inputs and unitary must match R")
        if len(self.ancilla_modes) != self.R - 2 or len(set(self.ancilla_modes)) != self.R - 2:
            raise ValueError("need exactly R - 2 distinct ancilla modes")
        if len(self.pattern) != self.R - 2:
            raise ValueError("pattern needs one count per ancilla mode")
        if any(n < 0 for n in self.inputs + self.pattern):
            raise ValueError("photon numbers must be non-negative")
        if self.target_photons < 0:
            raise ValueError("pattern detects more photons than were input")

    @property
    def target_modes(self) -> tuple[int, int]:
        rest = [i for i in range(self.R) if i not in self.ancilla_modes]
        return rest[0], rest[1]

    @property
    def target_photons(self) -> int:
        return sum(self.inputs) - sum(self.pattern)


@dataclass(frozen=True)
class MachineOutcome:
    """``noon_fidelity`` is ``None`` when the heralding event is impossible."""

    state: Optional[PureState]
    probability: float
    noon_fidelity: Optional[float]
    N: int


def noon_fidelity(state: PureState, N: int) -> float:
    """Fidelity to a NOON state with the best relative phase, ``(|a| + |b|)^2 / 2``."""
    if state.mode_count != 2:
        raise ValueError("NOON fidelity needs a two-mode state")
    a = abs(state[(N, 0)])
    b = abs(state[(0, N)])
    if N == 0:
        return min(1.0, a**2 / state.norm**2)
    return min(1.0, 0.5 * (a + b) ** 2 / state.norm**2)


def evaluate(cfg: MachineConfig) -> MachineOutcome:
    N = cfg.target_photons
    pattern = dict(zip(cfg.ancilla_modes, cfg.pattern))
    projected = apply(cfg.unitary, make_basis(cfg.inputs), fixed=pattern or None)
    if not pattern:
        prob = projected.norm**2
        state = projected.normalize() if prob > 0 else None
    else:
        res = measure_modes(projected, list(pattern), list(pattern.values()))
        prob, state = res.probability, res.state
    if state is None:
        return MachineOutcome(None, 0.0, None, N)
    return MachineOutcome(state, float(prob), noon_fidelity(state, N), N)


# --- parameterization -------------------------------------------------------


def mesh_pairs(R: int) -> list[tuple[int, int]]:
    """Adjacent-mode pairs of a triangular mesh, R(R-1)/2 of them, in order of application.

    Mode ``i + 1`` joins only after modes ``0..i`` are mixed, so every
    output row reaches every input column.
    """
    return [(j, j + 1) for i in range(1, R) for j in range(i - 1, -1, -1)]


def givens(theta: float, phi: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    e = np.exp(1j * phi)
    return np.array([[e * c, -s], [e * s, c]])


def mesh_matrix(params: Sequence[float], R: int) -> np.ndarray:
    """U(R) from R(R-1)/2 Givens rotations ``(theta, phi)`` and R output phases."""
    params = np.asarray(params, dtype=float)
    pairs = mesh_pairs(R)
    if len(params) != 2 * len(pairs) + R:
        raise ValueError(f"expected {2 * len(pairs) + R} parameters for R={R}, got {len(params)}")
    u = np.eye(R, dtype=complex)
    for k, (a, b) in enumerate(pairs):
        c, s = math.cos(params[2 * k]), math.sin(params[2 * k])
        e = np.exp(1j * params[2 * k + 1])
        ua, ub = u[a].copy(), u[b]
        u[a] = e * c * ua - s * ub
        u[b] = e * s * ua + c * ub
    return np.exp(1j * params[2 * len(pairs):])[:, None] * u


def mesh_unitary(params: Sequence[float], R: int) -> ModeUnitary:
    return ModeUnitary(mesh_matrix(params, R))


def n_params(R: int) -> int:
    return R * R


# --- optimization -----------------------------------------------------------


@dataclass(frozen=True)
class Budget:
    restarts: int = 8
    max_iter: int = 4000
    polish_rounds: int = 3


def _target_outputs(R, pattern, ancilla_modes, N):
    targets = [i for i in range(R) if i not in ancilla_modes]
    outs = []
    for k in range(N + 1):
        occ = [0] * R
        occ[targets[0]], occ[targets[1]] = k, N - k
        for mode, m in zip(ancilla_modes, pattern):
            occ[mode] = m
        outs.append(tuple(occ))
    return outs


def _objective(x, R, inputs, outputs, prob_weight):
    amps = output_amplitudes(mesh_matrix(x, R), inputs, outputs)
    prob = float(np.sum(np.abs(amps) ** 2))
    if prob < 1e-300:
        return 1.0
    fid = 0.5 * (abs(amps[-1]) + abs(amps[0])) ** 2 / prob
    return -(fid + prob_weight * prob)


def _run_restart(args):
    index, seed, R, inputs, pattern, ancilla_modes, prob_weight, budget = args
    rng = np.random.default_rng(seed)
    x = rng.uniform(0, 2 * math.pi, n_params(R))
    outputs = _target_outputs(R, pattern, ancilla_modes, sum(inputs) - sum(pattern))
    fargs = (R, inputs, outputs, prob_weight)
    best_x, best_f = x, _objective(x, *fargs)
    for _ in range(1 + budget.polish_rounds):
        res = minimize(
            _objective,
            best_x,
            args=fargs,
            method="Nelder-Mead",
            options={"maxiter": budget.max_iter, "xatol": 1e-10, "fatol": 1e-13, "adaptive": True},
        )
        if res.fun < best_f - 1e-15:
            best_x, best_f = res.x, res.fun
        else:
            break
    cfg = MachineConfig(R, inputs, mesh_unitary(best_x, R), pattern, ancilla_modes)
    return index, cfg, evaluate(cfg)


def _rank(item):
    index, _, out = item
    fid = out.noon_fidelity if out.noon_fidelity is not None else -1.0
    return (round(fid, 9), out.probability, -index)


def optimize(
    R: int,
    inputs: Sequence[int],
    pattern: Sequence[int],
    target_N: int,
    budget: Budget = Budget(),
    seed: int = 0,
    prob_weight: float = 0.0,
    ancilla_modes: Optional[Sequence[int]] = None,
    workers: int = 1,
) -> tuple[MachineConfig, MachineOutcome]:
    """Search the mesh parameters for the best NOON heralding machine.

    Maximizes ``fidelity + prob_weight * probability`` from ``budget.restarts``
    random starts (Nelder-Mead, re-started from its own optimum up to
    ``budget.polish_rounds`` times). Restart seeds are spawned from ``seed``
    so the result does not depend on ``workers``. Heuristic: a low best
    fidelity is evidence, not proof, that no machine exists.
    """
    inputs = tuple(int(n) for n in inputs)
    pattern = tuple(int(m) for m in pattern)
    if sum(inputs) - sum(pattern) != target_N:
        raise ValueError(f"photon balance {sum(inputs)} - {sum(pattern)} does not equal target N={target_N}")
    anc = tuple(ancilla_modes) if ancilla_modes is not None else tuple(range(2, R))
    seeds = np.random.SeedSequence(seed).spawn(budget.restarts)
    jobs = [(i, s, R, inputs, pattern, anc, prob_weight, budget) for i, s in enumerate(seeds)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_run_restart, jobs))
    else:
        results = [_run_restart(j) for j in jobs]
    _, cfg, out = max(results, key=_rank)
    return cfg, out


# --- surveys ----------------------------------------------------------------


def placements(total: int, R: int, ancilla_in_max: Optional[int] = None) -> list[tuple[int, ...]]:
    """Input occupations of ``total`` photons, one per target-swap orbit."""
    seen = set()
    out = []
    for occ in compositions(total, R):
        if ancilla_in_max is not None and sum(occ[2:]) > ancilla_in_max:
            continue
        key = (tuple(sorted(occ[:2])), occ[2:])
        if key in seen:
            continue
        seen.add(key)
        out.append(occ)
    return out


def r2_scan(N: int, grid: int = 181) -> tuple[float, tuple[int, int], float]:
    """Best NOON fidelity of any 2-mode machine with ``N`` input photons.

    With no ancillas only the splitting angle matters: input phases are
    global on Fock inputs and output phases leave the relative-phase-
    maximized fidelity unchanged. Returns ``(fidelity, inputs, theta)``.
    """
    best = (-1.0, (N, 0), 0.0)
    for occ in placements(N, 2):
        for theta in np.linspace(0, math.pi / 2, grid):
            u = ModeUnitary(givens(theta, 0.0))
            out = evaluate(MachineConfig(2, occ, u, ()))
            if out.noon_fidelity > best[0]:
                best = (out.noon_fidelity, occ, float(theta))
    return best


@dataclass
class ProbeRow:
    N: int
    regime: str
    best_fidelity: float
    best_probability: float
    inputs: tuple[int, ...]
    pattern: tuple[int, ...]


@dataclass
class ProbeReport:
    R: int
    rows: list[ProbeRow] = field(default_factory=list)
    note: str = (
        "Empirical probe: a failure to find a high-fidelity machine is evidence "
        "for the N <= R bound, not a proof."
    )


def no_go_probe(
    R: int,
    max_total_photons: int,
    trials: int = 4,
    seed: int = 0,
    max_iter: int = 2000,
    ancilla_photons_max: int = 0,
    max_placements: Optional[int] = None,
) -> ProbeReport:
    """Best NOON fidelity found for each target N in ``1..max_total_photons``.

    Patterns with up to ``ancilla_photons_max`` heralded photons are tried
    with every input placement consistent with the photon balance.
    """
    if R < 2:
        raise ValueError("R must be at least 2")
    report = ProbeReport(R)
    budget = Budget(restarts=trials, max_iter=max_iter, polish_rounds=1)
    for N in range(1, max_total_photons + 1):
        regime = "N<=R" if N <= R else "N>R"
        best: Optional[ProbeRow] = None
        if R == 2:
            fid, occ, _ = r2_scan(N)
            best = ProbeRow(N, regime, fid, 1.0, occ, ())
            report.rows.append(best)
            continue
        for k in range(ancilla_photons_max + 1):
            for pat in compositions(k, R - 2) if R > 2 else [()]:
                cands = placements(N + k, R)
                if max_placements is not None:
                    cands = cands[:max_placements]
                for occ in cands:
                    _, out = optimize(R, occ, pat, N, budget, seed)
                    fid = out.noon_fidelity if out.noon_fidelity is not None else 0.0
                    if best is None or (fid, out.probability) > (best.best_fidelity, best.best_probability):
                        best = ProbeRow(N, regime, fid, out.probability, occ, tuple(pat))
        report.rows.append(best)
    return report


def success_probability_scan(configs: Sequence[MachineConfig], min_fidelity: float = 0.999) -> list[tuple[int, float]]:
    """``(N, best probability)`` over configs whose NOON fidelity reaches ``min_fidelity``."""
    best: dict[int, float] = {}
    for cfg in configs:
        out = evaluate(cfg)
        if out.noon_fidelity is None or out.noon_fidelity < min_fidelity:
            continue
        best[out.N] = max(best.get(out.N, 0.0), out.probability)
    return sorted(best.items())


# --- fixtures ---------------------------------------------------------------


def config_to_dict(cfg: MachineConfig, outcome: Optional[MachineOutcome] = None) -> dict:
    doc = {
        "R": cfg.R,
        "inputs": list(cfg.inputs),
        "unitary": [[[float(z.real), float(z.imag)] for z in row] for row in cfg.unitary.matrix],
        "ancilla_modes": list(cfg.ancilla_modes),
        "pattern": list(cfg.pattern),
    }
    if outcome is not None:
        doc["expected_fidelity"] = outcome.noon_fidelity
        doc["expected_probability"] = outcome.probability
    return doc


def config_from_dict(doc: dict) -> MachineConfig:
    u = np.array([[complex(re, im) for re, im in row] for row in doc["unitary"]])
    return MachineConfig(
        int(doc["R"]),
        tuple(doc["inputs"]),
        ModeUnitary(u),
        tuple(doc["pattern"]),
        tuple(doc["ancilla_modes"]),
    )


def load_fixture(name_or_path) -> tuple[MachineConfig, dict]:
    path = Path(name_or_path)
    if not path.suffix:
        path = FIXTURE_DIR / f"{name_or_path}.json"
    doc = json.loads(path.read_text())
    return config_from_dict(doc), doc


def save_fixture(path, cfg: MachineConfig, outcome: MachineOutcome, **extra) -> None:
    doc = config_to_dict(cfg, outcome)
    doc.update(extra)
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def all_input_classes(R: int, N: int, pattern: Sequence[int], ancilla_in: Optional[Sequence[int]] = None):
    """Input placements matching the photon balance, optionally with fixed ancilla inputs."""
    total = N + sum(pattern)
    for occ in placements(total, R):
        if ancilla_in is not None and tuple(occ[2:]) != tuple(ancilla_in):
            continue
        yield occ


__all__ = [
    "Budget",
    "MachineConfig",
    "MachineOutcome",
    "evaluate",
    "mesh_unitary",
    "no_go_probe",
    "noon_fidelity",
    "optimize",
    "r2_scan",
    "success_probability_scan",
]
