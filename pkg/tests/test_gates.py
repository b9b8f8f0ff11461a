import math

import numpy as np
import pytest

from fockbench.fock import PureState, fidelity, make_basis, superpose, tensor
from fockbench.gates import (
    CZ_ANCILLA_IN,
    CZ_PATTERN,
    NsGateSpec,
    cnot_gate,
    cz_elements,
    cz_gate,
    kerr_phase,
    logical_amplitudes,
    logical_state,
    ns_gate,
    ns_network,
    qubit,
)
from fockbench.network import apply


def _random_qutrit(rng):
    v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    v /= np.linalg.norm(v)
    return v


def test_ns_gate_flips_two_photon_sign():
    rng = np.random.default_rng(0)
    for _ in range(20):
        a, b, g = _random_qutrit(rng)
        res = ns_gate(PureState({(0,): a, (1,): b, (2,): g}, 1))
        assert res.probability == pytest.approx(0.25, abs=1e-12)
        ideal = PureState({(0,): a, (1,): b, (2,): -g}, 1)
        assert abs(res.state.inner(ideal)) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_ns_gate_basis_amplitudes():
    # herald amplitude on |0>, |1>, |2> is 1/2, 1/2, -1/2
    u = ns_network()
    for n, expected in ((0, 0.5), (1, 0.5), (2, -0.5)):
        out = apply(u, make_basis([n, 1, 0]), fixed={1: 1, 2: 0})
        assert out[(n, 1, 0)] == pytest.approx(expected, abs=1e-12)


def test_ns_gate_rejects_bad_input():
    with pytest.raises(ValueError):
        ns_gate(make_basis([3]))
    with pytest.raises(ValueError):
        ns_gate(make_basis([1, 0]))


def test_ns_gate_wrong_reflectivity_fails():
    res = ns_gate(superpose((1, (0,)), (1, (1,)), (1, (2,))), NsGateSpec(0.5, 0.5))
    ideal = superpose((1, (0,)), (1, (1,)), (-1, (2,)))
    assert fidelity(res.state, ideal) < 0.99


def test_cz_structure():
    labels = [lab for lab, _ in cz_elements()]
    assert labels.count("asym_bs") == 6 and labels.count("bs50") == 2
    assert sum(CZ_ANCILLA_IN) == 2 and sum(CZ_PATTERN.values()) == 2


@pytest.mark.parametrize("c,t", [(0, 0), (0, 1), (1, 0), (1, 1)])
def test_cz_truth_table(c, t):
    q1 = qubit(*(0, 1) if c else (1, 0))
    q2 = qubit(*(0, 1) if t else (1, 0))
    res = cz_gate(q1, q2)
    assert res.probability == pytest.approx(1 / 16, abs=1e-12)
    amps = logical_amplitudes(res.state)
    # basis states map to themselves; the relative sign is checked on superpositions
    assert abs(amps[2 * c + t]) == pytest.approx(1.0)


def test_cz_phase_on_superposition_matches_kerr():
    plus = qubit(1, 1)
    res = cz_gate(plus, plus)
    kerr = kerr_phase(tensor(plus, plus), (0, 2), math.pi)
    assert fidelity(res.state, kerr) == pytest.approx(1.0, abs=1e-12)
    amps = logical_amplitudes(res.state)
    assert np.allclose(amps / amps[0], [1, 1, 1, -1])


def test_cnot_makes_bell_state():
    res = cnot_gate(qubit(1, 1), qubit(1, 0))
    bell = logical_state([1 / math.sqrt(2), 0, 0, 1 / math.sqrt(2)])
    assert res.probability == pytest.approx(1 / 16, abs=1e-12)
    assert fidelity(res.state, bell) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("c,t,out", [(0, 0, 0), (0, 1, 1), (1, 0, 3), (1, 1, 2)])
def test_cnot_truth_table(c, t, out):
    res = cnot_gate(qubit(*(0, 1) if c else (1, 0)), qubit(*(0, 1) if t else (1, 0)))
    assert abs(logical_amplitudes(res.state)[out]) == pytest.approx(1.0)


def test_gate_input_validation():
    with pytest.raises(ValueError):
        cz_gate(make_basis([1, 1]), qubit(1, 0))
    with pytest.raises(ValueError):
        cz_gate(qubit(1, 0), PureState({(0, 1): 2.0}, 2))


def test_kerr_phase():
    s = logical_state({"11": 1.0})
    assert kerr_phase(s, (0, 2), math.pi)[(1, 0, 1, 0)] == pytest.approx(-1)
    with pytest.raises(ValueError):
        kerr_phase(s, (1, 1), 1.0)
