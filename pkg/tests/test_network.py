import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fockbench.fock import PureState, make_basis, superpose
from fockbench.network import (
    ModeUnitary,
    apply,
    asymmetric_bs,
    beam_splitter,
    compose,
    compositions,
    embed,
    haar_unitary,
    output_amplitudes,
    phase_shifter,
    transition_amplitude,
)
from fockbench.permanent import permanent
from oracles import creation_operator_apply, max_amplitude_error, naive_permanent, oracle_suite, random_unitary


def test_apply_matches_creation_operator_oracle_on_suite():
    worst = 0.0
    for u, n in oracle_suite():
        got = apply(ModeUnitary(u), make_basis(n))
        ref = creation_operator_apply(u, {n: 1.0}, len(n))
        worst = max(worst, max_amplitude_error(dict(got.terms), ref))
    assert worst < 1e-10


def test_apply_superposition_with_mixed_photon_number():
    rng = np.random.default_rng(5)
    u = random_unitary(3, rng)
    terms = {(1, 0, 0): 0.3, (1, 1, 0): 0.5j, (0, 2, 1): -0.4, (0, 0, 0): 0.1}
    got = apply(ModeUnitary(u), PureState(terms, 3))
    assert max_amplitude_error(dict(got.terms), creation_operator_apply(u, terms, 3)) < 1e-12


def test_transition_amplitude_is_scaled_permanent():
    rng = np.random.default_rng(9)
    u = random_unitary(3, rng)
    n, m = (2, 1, 0), (0, 1, 2)
    sub = u[np.ix_([1, 2, 2], [0, 0, 1])]
    expected = naive_permanent(sub) / math.sqrt(2 * 2)
    assert transition_amplitude(ModeUnitary(u), n, m) == pytest.approx(expected, abs=1e-12)
    assert transition_amplitude(ModeUnitary(u), (1, 0, 0), (1, 1, 0)) == 0


def test_single_photon_follows_column():
    u = haar_unitary(4, np.random.default_rng(0))
    out = apply(u, make_basis([0, 0, 1, 0]))
    for j in range(4):
        occ = tuple(int(i == j) for i in range(4))
        assert out[occ] == pytest.approx(u.matrix[j, 2])


def test_hom_dip():
    out = apply(beam_splitter(math.pi / 2, -math.pi / 2), make_basis([1, 1]))
    assert abs(out[(1, 1)]) < 1e-12
    assert abs(out[(2, 0)]) ** 2 == pytest.approx(0.5)
    assert abs(out[(0, 2)]) ** 2 == pytest.approx(0.5)


def test_beam_splitter_half_angle_and_unitarity_check():
    bs = beam_splitter(math.pi / 2, math.pi / 2)
    assert np.allclose(np.abs(bs.matrix) ** 2, 0.5)
    assert np.allclose(beam_splitter(0.0, 0.3).matrix, np.eye(2))
    with pytest.raises(ValueError):
        beam_splitter(math.pi / 2, 0.0)
    with pytest.raises(ValueError):
        beam_splitter(1.0, math.pi / 2, (1, 1))


def test_embed_and_phase_shifter():
    ps = phase_shifter(0.4, 1, 3)
    assert ps.matrix[1, 1] == pytest.approx(np.exp(0.4j))
    assert ps.matrix[0, 0] == 1 and ps.matrix[2, 2] == 1
    with pytest.raises(ValueError):
        embed([[1, 0], [0, 1]], (0, 0), 3)
    with pytest.raises(ValueError):
        embed([[1]], (4,), 3)


def test_asymmetric_splitters():
    for variant in ("type1", "type2"):
        u = asymmetric_bs(0.3, variant)
        assert np.allclose(u.matrix.conj().T @ u.matrix, np.eye(2))
    assert asymmetric_bs(0.25, "type1").matrix[1, 1] == pytest.approx(-0.5)
    assert asymmetric_bs(0.25, "type2").matrix[0, 0] == pytest.approx(-0.5)
    with pytest.raises(ValueError):
        asymmetric_bs(1.5)
    with pytest.raises(ValueError):
        asymmetric_bs(0.5, "type3")


def test_mode_unitary_validation():
    with pytest.raises(ValueError):
        ModeUnitary(np.ones((2, 2)))
    with pytest.raises(ValueError):
        ModeUnitary(np.ones((2, 3)))
    u = ModeUnitary(np.eye(2))
    with pytest.raises(ValueError):
        u.matrix[0, 0] = 2
    assert np.allclose(haar_unitary(3, np.random.default_rng(1)).dagger().matrix @ haar_unitary(3, np.random.default_rng(1)).matrix, np.eye(3))


def test_compose_order_first_acts_first():
    a = haar_unitary(3, np.random.default_rng(1))
    b = haar_unitary(3, np.random.default_rng(2))
    s = superpose((1, (1, 1, 0)), (1j, (0, 1, 1)))
    assert max_amplitude_error(dict(apply(compose([a, b]), s).terms), dict(apply(b, apply(a, s)).terms)) < 1e-12
    with pytest.raises(ValueError):
        compose([])
    with pytest.raises(ValueError):
        compose([a, beam_splitter(1.0, math.pi / 2)])


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        apply(beam_splitter(1.0, math.pi / 2), make_basis([1, 0, 0]))


def test_fixed_pattern_is_projection():
    u = haar_unitary(4, np.random.default_rng(4))
    s = make_basis([2, 1, 1, 0])
    full = apply(u, s)
    proj = apply(u, s, fixed={2: 1, 3: 0})
    expected = {k: v for k, v in full.terms.items() if k[2] == 1 and k[3] == 0}
    assert max_amplitude_error(dict(proj.terms), expected) < 1e-12
    assert len(apply(u, s, fixed={0: 9}).terms) == 0


def test_compositions_count():
    assert len(list(compositions(4, 4))) == math.comb(7, 3)
    assert all(sum(c) == 5 for c in compositions(5, 3))


def test_output_amplitudes_empty_outputs():
    assert output_amplitudes(np.eye(2), (1, 0), []).shape == (0,)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 4), st.integers(0, 4), st.integers(0, 2**31))
def test_apply_preserves_norm_and_photon_number(M, N, seed):
    rng = np.random.default_rng(seed)
    u = haar_unitary(M, rng)
    occ = tuple(int(x) for x in rng.multinomial(N, [1 / M] * M))
    out = apply(u, make_basis(occ))
    assert out.norm == pytest.approx(1.0, abs=1e-10)
    assert out.photon_numbers <= {N}


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**31))
def test_unitary_then_inverse_is_identity(M, seed):
    rng = np.random.default_rng(seed)
    u = haar_unitary(M, rng)
    occ = tuple(int(x) for x in rng.multinomial(3, [1 / M] * M))
    back = apply(u.dagger(), apply(u, make_basis(occ)))
    assert abs(back[occ] - 1) < 1e-10


def test_permanent_and_amplitudes_agree_with_ryser():
    u = random_unitary(4, np.random.default_rng(8))
    n = (1, 1, 1, 1)
    m = (2, 0, 1, 1)
    sub = u[np.ix_([0, 0, 2, 3], [0, 1, 2, 3])]
    assert transition_amplitude(u, n, m) == pytest.approx(permanent(sub) / math.sqrt(2), abs=1e-12)
