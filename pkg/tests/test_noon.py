import math

import numpy as np
import pytest

from fockbench.fock import PureState, make_basis
from fockbench.network import ModeUnitary, beam_splitter
from fockbench.noon import (
    FIXTURE_DIR,
    Budget,
    MachineConfig,
    all_input_classes,
    config_from_dict,
    config_to_dict,
    evaluate,
    givens,
    load_fixture,
    mesh_matrix,
    mesh_pairs,
    n_params,
    no_go_probe,
    noon_fidelity,
    optimize,
    placements,
    r2_scan,
    success_probability_scan,
)


def test_noon_fidelity_maximizes_relative_phase():
    s = PureState({(3, 0): 1 / math.sqrt(2), (0, 3): 1j / math.sqrt(2)}, 2)
    assert noon_fidelity(s, 3) == pytest.approx(1.0)
    assert noon_fidelity(make_basis([3, 0]), 3) == pytest.approx(0.5)
    assert noon_fidelity(make_basis([2, 1]), 3) == 0.0
    with pytest.raises(ValueError):
        noon_fidelity(make_basis([1, 0, 0]), 1)


@pytest.mark.parametrize("R", [2, 3, 4, 5])
def test_mesh_is_unitary_and_locally_full_rank(R):
    rng = np.random.default_rng(R)
    x = rng.uniform(0, 2 * math.pi, n_params(R))
    u = mesh_matrix(x, R)
    assert np.allclose(u.conj().T @ u, np.eye(R))
    assert len(mesh_pairs(R)) == R * (R - 1) // 2
    # the parameterization covers U(R) locally: Jacobian rank R^2
    h = 1e-6
    cols = []
    for k in range(len(x)):
        dx = np.zeros_like(x)
        dx[k] = h
        d = (mesh_matrix(x + dx, R) - mesh_matrix(x - dx, R)) / (2 * h)
        cols.append(np.concatenate([d.real.ravel(), d.imag.ravel()]))
    assert np.linalg.matrix_rank(np.array(cols).T, tol=1e-6) == R * R


def test_mesh_parameter_count_checked():
    with pytest.raises(ValueError):
        mesh_matrix(np.zeros(3), 3)


def test_givens_unitary():
    g = givens(0.4, 1.1)
    assert np.allclose(g.conj().T @ g, np.eye(2))


def test_config_validation():
    u = ModeUnitary(np.eye(3))
    with pytest.raises(ValueError):
        MachineConfig(3, (1, 1), u, (0,))
    with pytest.raises(ValueError):
        MachineConfig(3, (1, 1, 0), u, (0, 0))
    with pytest.raises(ValueError):
        MachineConfig(3, (1, 0, 0), u, (2,))
    with pytest.raises(ValueError):
        MachineConfig(3, (1, 1, 0), u, (0,), ancilla_modes=(0, 1))
    cfg = MachineConfig(3, (1, 1, 0), u, (0,), ancilla_modes=(0,))
    assert cfg.target_modes == (1, 2) and cfg.target_photons == 2


def test_hom_machine():
    cfg = MachineConfig(2, (1, 1), beam_splitter(math.pi / 2, -math.pi / 2), ())
    out = evaluate(cfg)
    assert out.noon_fidelity == pytest.approx(1.0) and out.probability == pytest.approx(1.0)


def test_impossible_herald_gives_none():
    cfg = MachineConfig(3, (1, 0, 0), ModeUnitary(np.eye(3)), (1,))
    out = evaluate(cfg)
    assert out.noon_fidelity is None and out.probability == 0.0


@pytest.mark.parametrize("N,expected", [(1, 1.0), (2, 1.0), (3, 0.75), (4, 0.75)])
def test_r2_scan(N, expected):
    fid, _, _ = r2_scan(N)
    assert fid == pytest.approx(expected, abs=1e-9)


def test_optimizer_finds_three_mode_two_photon_noon():
    cfg, out = optimize(3, (1, 1, 0), (0,), 2, Budget(restarts=2, max_iter=1500, polish_rounds=1), seed=1)
    assert out.noon_fidelity > 0.999
    assert out.probability > 0


def test_optimizer_is_deterministic_and_worker_independent():
    b = Budget(restarts=2, max_iter=300, polish_rounds=0)
    _, o1 = optimize(3, (2, 1, 0), (1,), 2, b, seed=3)
    _, o2 = optimize(3, (2, 1, 0), (1,), 2, b, seed=3, workers=2)
    assert o1.noon_fidelity == o2.noon_fidelity and o1.probability == o2.probability


def test_optimizer_balance_check():
    with pytest.raises(ValueError):
        optimize(3, (1, 1, 0), (0,), 3)


def test_placements_dedupe_target_swaps():
    occs = placements(2, 3)
    assert (1, 1, 0) in occs and (2, 0, 0) in occs
    assert not ((0, 2, 0) in occs and (2, 0, 0) in occs)
    assert all(sum(o[2:]) == 0 for o in placements(3, 4, ancilla_in_max=0))
    assert all(o[2:] == (1, 1) for o in all_input_classes(4, 2, (1, 1), (1, 1)))


def test_config_round_trip():
    rng = np.random.default_rng(2)
    cfg = MachineConfig(3, (1, 1, 1), ModeUnitary(mesh_matrix(rng.uniform(0, 6, 9), 3)), (1,))
    back = config_from_dict(config_to_dict(cfg))
    assert np.array_equal(back.unitary.matrix, cfg.unitary.matrix)
    assert back.inputs == cfg.inputs and back.pattern == cfg.pattern


@pytest.mark.parametrize("name", ["noon4_class_a", "noon4_class_b", "noon4_class_c"])
def test_fixture_replay(name):
    cfg, doc = load_fixture(name)
    out = evaluate(cfg)
    assert out.N == 4
    assert out.noon_fidelity >= 0.999
    assert out.probability > 0
    assert out.probability == pytest.approx(doc["expected_probability"], rel=1e-9)


def test_fixture_classes():
    a, _ = load_fixture("noon4_class_a")
    b, _ = load_fixture("noon4_class_b")
    c, _ = load_fixture("noon4_class_c")
    assert a.inputs == (1, 1, 1, 1) and a.pattern == (0, 0)
    assert b.pattern == (1, 1) and sum(b.inputs[2:]) == 0
    assert c.pattern == (1, 1) and sum(c.inputs[2:]) > 0
    assert (FIXTURE_DIR / "noon4_class_a.json").exists()


def test_success_probability_scan():
    hom = MachineConfig(2, (1, 1), beam_splitter(math.pi / 2, -math.pi / 2), ())
    single = MachineConfig(2, (1, 0), ModeUnitary(np.eye(2)), ())
    [(N, p)] = success_probability_scan([hom, single])
    assert N == 2 and p == pytest.approx(1.0)


def test_no_go_probe_r2():
    report = no_go_probe(2, 4)
    fids = {row.N: row.best_fidelity for row in report.rows}
    assert fids[1] == pytest.approx(1.0) and fids[2] == pytest.approx(1.0)
    assert fids[3] < 0.999 and fids[4] < 0.999
    assert "not a proof" in report.note


def test_no_go_probe_r3_small():
    report = no_go_probe(3, 2, trials=1, max_iter=800)
    assert [row.N for row in report.rows] == [1, 2]
    assert report.rows[1].best_fidelity > 0.99
