"""Scenario kinds runnable from the command line.

Each kind declares a parameter schema and a runner. A runner receives the
resolved parameters and a seeded ``numpy.random.Generator`` (PCG64) and
returns a :class:`Result`.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from . import gates, metrology, noon, polarization
from .fock import PureState, fidelity, make_basis, tensor
from .network import apply, beam_splitter


class ScenarioError(ValueError):
    """Invalid scenario document; ``field`` names the offending entry."""

    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        super().__init__(f"field '{field}': {message}" if field else message)


@dataclass
class Param:
    name: str
    type: str
    default: Any = None
    required: bool = False
    help: str = ""


@dataclass
class Result:
    summary: str
    rows: list[dict]
    empty: bool = False
    extra: dict = field(default_factory=dict)


@dataclass
class Kind:
    name: str
    help: str
    params: list[Param]
    run: Callable[[dict, np.random.Generator], Result]


_TYPES = {
    "int": (int,),
    "float": (int, float),
    "str": (str,),
    "bool": (bool,),
    "int_list": (list,),
    "str_list": (list,),
}


def _check_type(p: Param, value):
    if p.type in ("int", "float") and isinstance(value, bool):
        raise ScenarioError(f"expected {p.type}, got bool", f"parameters.{p.name}")
    if not isinstance(value, _TYPES[p.type]):
        raise ScenarioError(f"expected {p.type}, got {type(value).__name__}", f"parameters.{p.name}")
    if p.type == "int_list" and not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise ScenarioError("expected a list of integers", f"parameters.{p.name}")
    if p.type == "str_list" and not all(isinstance(v, str) for v in value):
        raise ScenarioError("expected a list of strings", f"parameters.{p.name}")


def resolve(kind: Kind, params: dict) -> dict:
    if not isinstance(params, dict):
        raise ScenarioError("expected an object", "parameters")
    known = {p.name: p for p in kind.params}
    for name in params:
        if name not in known:
            raise ScenarioError(f"unknown parameter for kind '{kind.name}'", f"parameters.{name}")
    out = {}
    for p in kind.params:
        if p.name in params:
            _check_type(p, params[p.name])
            out[p.name] = float(params[p.name]) if p.type == "float" else params[p.name]
        elif p.required:
            raise ScenarioError("required parameter missing", f"parameters.{p.name}")
        else:
            out[p.name] = p.default
    return out


def _c(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _random_amplitudes(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


# --- runners ----------------------------------------------------------------


def run_ns_gate(p, rng):
    spec = gates.NsGateSpec(p["eta1"], p["eta2"])
    rows = []
    for trial in range(p["trials"]):
        a, b, g = _random_amplitudes(rng, 3)
        inp = PureState({(0,): a, (1,): b, (2,): g}, 1)
        res = gates.ns_gate(inp, spec)
        if res.empty:
            return Result(f"ns_gate: trial {trial} heralding event impossible", rows, empty=True)
        ideal = PureState({(0,): a, (1,): b, (2,): -g}, 1)
        rows.append(
            {
                "trial": trial,
                "alpha": _c(a),
                "beta": _c(b),
                "gamma": _c(g),
                "probability": res.probability,
                "fidelity": fidelity(res.state, ideal),
            }
        )
    pmax = max(abs(r["probability"] - 0.25) for r in rows)
    fmin = min(r["fidelity"] for r in rows)
    return Result(f"ns_gate: {len(rows)} trials, max |p - 1/4| = {pmax:.3g}, min fidelity = {fmin:.12f}", rows)


_LOGICAL = ("00", "01", "10", "11")


def _two_qubit_rows(p, rng, gate_fn, ideal_fn, name):
    inputs = [(f"|{lab}>_L", None) for lab in _LOGICAL] if p["basis"] else []
    for k in range(p["random_inputs"]):
        inputs.append((f"random{k}", (_random_amplitudes(rng, 2), _random_amplitudes(rng, 2))))
    rows = []
    for label, amps in inputs:
        if amps is None:
            c, t = int(label[1]), int(label[2])
            q1 = gates.qubit(*(0, 1) if c else (1, 0))
            q2 = gates.qubit(*(0, 1) if t else (1, 0))
        else:
            q1 = gates.qubit(*amps[0])
            q2 = gates.qubit(*amps[1])
        res = gate_fn(q1, q2)
        if res.empty:
            return Result(f"{name}: heralding event impossible for {label}", rows, empty=True)
        ideal = ideal_fn(q1, q2)
        out = gates.logical_amplitudes(res.state)
        row = {
            "input": label,
            "probability": res.probability,
            "fidelity": fidelity(res.state, ideal),
            "output_logical": [_c(z) for z in out],
        }
        if name == "cz_gate":
            kerr = gates.kerr_phase(tensor(q1, q2), (0, 2), math.pi)
            row["kerr_fidelity"] = fidelity(res.state, kerr)
        rows.append(row)
    pmax = max(abs(r["probability"] - 1 / 16) for r in rows)
    fmin = min(r["fidelity"] for r in rows)
    return Result(f"{name}: {len(rows)} inputs, max |p - 1/16| = {pmax:.3g}, min fidelity = {fmin:.12f}", rows)


def _ideal_cz(q1, q2):
    v = gates.logical_amplitudes(tensor(q1, q2))
    v[3] *= -1
    return gates.logical_state(v)


def _ideal_cnot(q1, q2):
    v = gates.logical_amplitudes(tensor(q1, q2))
    v[2], v[3] = v[3], v[2]
    return gates.logical_state(v)


def run_cz_gate(p, rng):
    return _two_qubit_rows(p, rng, gates.cz_gate, _ideal_cz, "cz_gate")


def run_cnot_gate(p, rng):
    return _two_qubit_rows(p, rng, gates.cnot_gate, _ideal_cnot, "cnot_gate")


def run_gate_synthesis(p, rng):
    spec = polarization.WaveplateSpec(p["n1"], p["n2"], p["lam"])
    rows = []
    for g in p["gates"]:
        thetas = [math.pi / 2] if g.lower() in ("h", "hadamard") else rng.uniform(-2 * math.pi, 2 * math.pi, p["thetas"])
        for theta in thetas:
            chain = polarization.synthesize(g, float(theta), spec)
            target = polarization.target_matrix(g, float(theta))
            residual = float(np.max(np.abs(polarization.chain_matrix(chain) - target)))
            rows.append({"gate": g, "theta": float(theta), "elements": len(chain), "residual": residual})
    worst = max(r["residual"] for r in rows)
    return Result(f"gate_synthesis: {len(rows)} chains, max phase-exact residual = {worst:.3g}", rows)


def run_hom(p, rng):
    u = beam_splitter(p["theta"], p["phi"], (0, 1))
    out = apply(u, make_basis([1, 1]))
    rows = []
    for occ in ((2, 0), (1, 1), (0, 2)):
        amp = out[occ]
        rows.append({"output": list(occ), "amplitude": _c(amp), "probability": abs(amp) ** 2})
    return Result(
        f"hom: P(2,0) = {rows[0]['probability']:.12g}, P(1,1) = {rows[1]['probability']:.3g}, "
        f"P(0,2) = {rows[2]['probability']:.12g}",
        rows,
    )


def yurke_oracle_probability(N: int, reflectivity: float) -> float:
    """Coincidence probability from tap binomials: two photons leave one main
    mode and none the other, and a two-photon tap state clicks both
    detectors behind a 50/50 splitter half the time."""
    if N < 2:
        return 0.0
    r, t = reflectivity, 1.0 - reflectivity
    two_from_one = math.comb(N, 2) * r**2 * t ** (N - 2)
    none_from_other = t**N
    return 2 * two_from_one * none_from_other * 0.5


def run_yurke(p, rng):
    rows = []
    for N in range(p["N_min"], p["N_max"] + 1):
        spec = metrology.YurkeSchemeSpec(N, p["tap_reflectivity"], p["condition"])
        res = metrology.yurke_generate(spec)
        if res.empty:
            return Result(f"yurke: N={N} heralding event impossible", rows, empty=True)
        if p["condition"] == "coincidence":
            fid = metrology.two_term_fidelity(res.state, (N, N - 2), (N - 2, N))
            oracle = yurke_oracle_probability(N, spec.reflectivity)
        else:
            fid = metrology.two_term_fidelity(res.state, (N, N - 1), (N - 1, N))
            oracle = None
        rows.append(
            {
                "N": N,
                "reflectivity": spec.reflectivity,
                "probability": res.probability,
                "oracle_probability": oracle,
                "fidelity": fid,
                "terms": len(res.state),
                "distance_to_asymptote": abs(res.probability - metrology.YURKE_ASYMPTOTE),
            }
        )
    return Result(
        f"yurke: N={p['N_min']}..{p['N_max']}, last probability {rows[-1]['probability']:.10f} "
        f"(asymptote {metrology.YURKE_ASYMPTOTE:.10f})",
        rows,
    )


def run_mz_sensitivity(p, rng):
    rows = []
    for N in range(1, p["N_max"] + 1):
        for kind in p["states"]:
            if kind == "fock":
                cfg = metrology.MzConfig(metrology.fock_input(N))
            elif kind == "noon":
                cfg = metrology.MzConfig(metrology.noon_state(N), observable="parity", in_arms=True)
            else:
                raise ScenarioError(f"unknown state '{kind}'", "parameters.states")
            phase, delta = metrology.best_sensitivity(cfg, p["grid"])
            rows.append(
                {
                    "N": N,
                    "state": kind,
                    "observable": cfg.observable,
                    "phase": phase,
                    "delta_phi": delta,
                    "shot_noise": 1 / math.sqrt(N),
                    "heisenberg": 1 / N,
                }
            )
    return Result(f"mz_sensitivity: {len(rows)} rows, N=1..{p['N_max']}", rows)


def run_deposition(p, rng):
    Ns = p["N"]
    rows = []
    for k in range(p["points"]):
        varphi = 2 * math.pi * k / p["points"]
        single, uncorrelated = metrology.classical_rates(varphi, 2)
        row = {"varphi": varphi, "single": single, "uncorrelated": uncorrelated}
        for N in Ns:
            row[f"noon_{N}"] = metrology.deposition_rate(metrology.noon_state(N), varphi)
        rows.append(row)
    err = max(abs(r[f"noon_{N}"] - (1 + math.cos(N * r["varphi"]))) for r in rows for N in Ns)
    return Result(f"deposition: N={Ns}, {p['points']} points, max |rate - (1 + cos N phi)| = {err:.3g}", rows)


def _outcome_row(cfg, out, label):
    return {
        "label": label,
        "R": cfg.R,
        "inputs": list(cfg.inputs),
        "pattern": list(cfg.pattern),
        "N": out.N,
        "fidelity": out.noon_fidelity,
        "probability": out.probability,
    }


def run_noon_optimize(p, rng):
    if p["fixture"] is not None:
        rows = []
        for name in p["fixture"].split(","):
            cfg, doc = noon.load_fixture(name.strip())
            out = noon.evaluate(cfg)
            if out.noon_fidelity is None:
                return Result(f"noon_optimize: fixture {name} heralding event impossible", rows, empty=True)
            row = _outcome_row(cfg, out, name.strip())
            row["expected_fidelity"] = doc.get("expected_fidelity")
            row["expected_probability"] = doc.get("expected_probability")
            rows.append(row)
        return Result(f"noon_optimize: replayed {len(rows)} fixtures, min fidelity {min(r['fidelity'] for r in rows):.9f}", rows)
    for req in ("R", "inputs", "pattern"):
        if p[req] is None:
            raise ScenarioError("required when no fixture is given", f"parameters.{req}")
    inputs, pattern = p["inputs"], p["pattern"]
    budget = noon.Budget(p["restarts"], p["max_iter"], p["polish_rounds"])
    seed = int(rng.integers(2**32))
    try:
        cfg, out = noon.optimize(p["R"], inputs, pattern, sum(inputs) - sum(pattern), budget, seed, p["prob_weight"])
    except ValueError as exc:
        raise ScenarioError(str(exc), "parameters.inputs") from exc
    if out.noon_fidelity is None:
        return Result("noon_optimize: no machine with a possible heralding event found", [], empty=True)
    row = _outcome_row(cfg, out, "optimized")
    return Result(
        f"noon_optimize: N={out.N} fidelity {out.noon_fidelity:.9f}, probability {out.probability:.6g}",
        [row],
        extra={"config": noon.config_to_dict(cfg, out)},
    )


def run_noon_probe(p, rng):
    seed = int(rng.integers(2**32))
    report = noon.no_go_probe(
        p["R"],
        p["max_total_photons"],
        trials=p["trials"],
        seed=seed,
        max_iter=p["max_iter"],
        ancilla_photons_max=p["ancilla_photons_max"],
        max_placements=p["max_placements"],
    )
    rows = [
        {
            "N": r.N,
            "regime": r.regime,
            "best_fidelity": r.best_fidelity,
            "best_probability": r.best_probability,
            "inputs": list(r.inputs),
            "pattern": list(r.pattern),
        }
        for r in report.rows
    ]
    high = [r["N"] for r in rows if r["best_fidelity"] > 0.999]
    return Result(f"noon_probe: R={p['R']}, N with fidelity > 0.999: {high}. {report.note}", rows, extra={"note": report.note})


_NS = gates.NsGateSpec()

KINDS: dict[str, Kind] = {
    k.name: k
    for k in [
        Kind(
            "ns_gate",
            "Heralded nonlinear sign gate on random 0/1/2-photon inputs",
            [
                Param("trials", "int", 100, help="number of random inputs"),
                Param("eta1", "float", _NS.eta1, help="reflectivity of BS1 = BS3"),
                Param("eta2", "float", _NS.eta2, help="reflectivity of BS2"),
            ],
            run_ns_gate,
        ),
        Kind(
            "cz_gate",
            "Heralded C-Z on dual-rail qubits, checked against the ideal gate and a cross-Kerr phase",
            [
                Param("basis", "bool", True, help="include the four logical basis inputs"),
                Param("random_inputs", "int", 20, help="number of random product inputs"),
            ],
            run_cz_gate,
        ),
        Kind(
            "cnot_gate",
            "Heralded CNOT (Hadamard - C-Z - Hadamard on the target)",
            [
                Param("basis", "bool", True, help="include the four logical basis inputs"),
                Param("random_inputs", "int", 20, help="number of random product inputs"),
            ],
            run_cnot_gate,
        ),
        Kind(
            "gate_synthesis",
            "Waveplate/phase-shifter chains for Rz, Rx, Ry, H with phase-exact residuals",
            [
                Param("gates", "str_list", ["Rz", "Rx", "Ry", "H"]),
                Param("thetas", "int", 50, help="random angles per rotation gate"),
                Param("n1", "float", 1.5, help="slow-axis index"),
                Param("n2", "float", 1.0, help="fast-axis index"),
                Param("lam", "float", 1.0, help="wavelength"),
            ],
            run_gate_synthesis,
        ),
        Kind(
            "hom",
            "Two single photons on a beam splitter",
            [
                Param("theta", "float", math.pi / 2, help="splitter angle (pi/2 is 50/50)"),
                Param("phi", "float", -math.pi / 2, help="splitter phase"),
            ],
            run_hom,
        ),
        Kind(
            "yurke",
            "Yurke-type states heralded from |N,N> by tap detection",
            [
                Param("N_min", "int", 2),
                Param("N_max", "int", 8),
                Param("condition", "str", "coincidence", help="coincidence or single_click"),
                Param("tap_reflectivity", "float", None, help="tap |r|^2; default 1/N"),
            ],
            run_yurke,
        ),
        Kind(
            "mz_sensitivity",
            "Mach-Zehnder phase sensitivity for Fock (difference current) and NOON (parity) inputs",
            [
                Param("N_max", "int", 6),
                Param("states", "str_list", ["fock", "noon"]),
                Param("grid", "int", 64, help="phase grid points"),
            ],
            run_mz_sensitivity,
        ),
        Kind(
            "deposition",
            "NOON lithographic deposition rates against classical baselines",
            [
                Param("N", "int_list", [1, 2, 3, 4], help="NOON photon numbers"),
                Param("points", "int", 256, help="phase grid points over [0, 2pi)"),
            ],
            run_deposition,
        ),
        Kind(
            "noon_optimize",
            "Optimize or replay an R-port NOON machine",
            [
                Param("fixture", "str", None, help="comma-separated fixture names to replay instead of searching"),
                Param("R", "int", None),
                Param("inputs", "int_list", None),
                Param("pattern", "int_list", None),
                Param("restarts", "int", 4),
                Param("max_iter", "int", 3000),
                Param("polish_rounds", "int", 2),
                Param("prob_weight", "float", 0.0),
            ],
            run_noon_optimize,
        ),
        Kind(
            "noon_probe",
            "Empirical probe of the N <= R bound for NOON machines",
            [
                Param("R", "int", required=True),
                Param("max_total_photons", "int", required=True),
                Param("trials", "int", 2),
                Param("max_iter", "int", 2000),
                Param("ancilla_photons_max", "int", 0),
                Param("max_placements", "int", None),
            ],
            run_noon_probe,
        ),
    ]
}


def run_kind(name: str, params: dict, seed: int) -> tuple[dict, Result, float]:
    if name not in KINDS:
        raise ScenarioError(f"unknown kind '{name}'", "kind")
    kind = KINDS[name]
    resolved = resolve(kind, params)
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    try:
        result = kind.run(resolved, rng)
    except ScenarioError:
        raise
    except FileNotFoundError as exc:
        raise ScenarioError(f"file not found: {exc.filename}", "parameters") from exc
    except ValueError as exc:
        raise ScenarioError(str(exc), "parameters") from exc
    return resolved, result, time.perf_counter() - t0
