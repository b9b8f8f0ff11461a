import math

import numpy as np
import pytest

from fockbench.fock import (
    DualRailQubit,
    PureState,
    dual_rail_state,
    fidelity,
    make_basis,
    measure_modes,
    superpose,
    tensor,
)


def test_construction_prunes_and_sums_duplicates():
    s = PureState([((1, 0), 0.5), ((1, 0), 0.5), ((0, 1), 1e-16)])
    assert dict(s.terms) == {(1, 0): 1.0}
    assert s.mode_count == 2


def test_rejects_bad_occupations():
    with pytest.raises(ValueError):
        PureState({(1, -1): 1.0})
    with pytest.raises(ValueError):
        PureState({(1, 0): 1.0, (1,): 1.0})
    with pytest.raises(ValueError):
        PureState({}, 0)
    with pytest.raises(ValueError):
        make_basis([])


def test_empty_state_with_explicit_modes():
    s = PureState({}, 3)
    assert len(s) == 0 and s.norm == 0.0


def test_normalize_and_flags():
    s = superpose((1.0, (2, 0)), (1j, (0, 2)))
    assert s.normalized
    assert s[(2, 0)] == pytest.approx(1 / math.sqrt(2))
    assert s.total_photons == 2
    with pytest.raises(ValueError):
        PureState({}, 2).normalize()


def test_indefinite_photon_number():
    s = superpose((1, (1, 0)), (1, (2, 0)))
    assert s.photon_numbers == {1, 2}
    with pytest.raises(ValueError):
        s.total_photons


def test_immutable():
    s = make_basis([1, 0])
    with pytest.raises(Exception):
        s.terms[(0, 1)] = 1.0
    with pytest.raises(Exception):
        s.mode_count = 3


def test_tensor_and_permute():
    s = tensor(make_basis([1, 0]), superpose((1, (0,)), (1, (2,))))
    assert set(s.terms) == {(1, 0, 0), (1, 0, 2)}
    assert set(s.permute_modes([2, 0, 1]).terms) == {(0, 1, 0), (2, 1, 0)}


def test_dual_rail_convention():
    q = DualRailQubit(l=2, k=0)
    s = dual_rail_state(q, 1.0, 0.0, 3)
    assert dict(s.terms) == {(1, 0, 0): 1.0}
    s = dual_rail_state(q, 0.0, 1.0, 3)
    assert dict(s.terms) == {(0, 0, 1): 1.0}
    with pytest.raises(ValueError):
        DualRailQubit(1, 1)


def test_measure_modes_probability_and_renormalization():
    s = superpose((1, (1, 0, 1)), (1, (0, 1, 1)), (math.sqrt(2), (1, 1, 0)))
    res = measure_modes(s, [2], [1])
    assert res.probability == pytest.approx(0.5)
    assert res.state.normalized
    assert set(res.state.terms) == {(1, 0), (0, 1)}


def test_measure_modes_impossible_outcome_is_empty():
    res = measure_modes(make_basis([1, 0]), [1], [3])
    assert res.empty and res.probability == 0.0


def test_measure_modes_validation():
    s = make_basis([1, 0, 0])
    with pytest.raises(ValueError):
        measure_modes(s, [0, 0], [1, 1])
    with pytest.raises(ValueError):
        measure_modes(s, [5], [0])
    with pytest.raises(ValueError):
        measure_modes(s, [0], [-1])
    with pytest.raises(ValueError):
        measure_modes(s, [0, 1, 2], [1, 0, 0])
    with pytest.raises(ValueError):
        measure_modes(s, [0], [1, 0])


def test_fidelity_phase_insensitive_and_validated():
    a = superpose((1, (1, 0)), (1, (0, 1)))
    b = a.scale(np.exp(0.7j))
    assert fidelity(a, b) == pytest.approx(1.0)
    assert fidelity(make_basis([1, 0]), make_basis([0, 1])) == 0.0
    with pytest.raises(ValueError):
        fidelity(a, make_basis([1, 0, 0]))
    with pytest.raises(ValueError):
        fidelity(a, a.scale(2))


def test_arithmetic_and_equality():
    a = make_basis([1, 0])
    b = make_basis([0, 1])
    assert (a + b) - b == a
    assert hash(a) == hash(make_basis([1, 0]))
    assert (a + b).inner(a) == pytest.approx(1.0)
