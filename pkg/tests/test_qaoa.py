import numpy as np
import pytest

import coalcut as cc

from conftest import random_game


def make_ising(m: int, seed: int) -> cc.IsingProblem:
    g = random_game(m, seed)
    return cc.qubo_to_ising(cc.build_mincut_qubo(g, cc.full_mask(m)))


def two_node_ising(w: float) -> cc.IsingProblem:
    g = cc.ISGame(np.array([[0.0, w], [w, 0.0]]))
    return cc.qubo_to_ising(cc.build_mincut_qubo(g, 0b11))


# ---------------------------------------------------------------------------
# state preparation
# ---------------------------------------------------------------------------

def test_init_uniform_values():
    sv1 = cc.init_uniform(1)
    assert np.allclose(sv1, [2 ** -0.5, 2 ** -0.5])
    sv3 = cc.init_uniform(3)
    assert sv3.shape == (8,)
    assert np.allclose(sv3, 2 ** -1.5)
    assert np.linalg.norm(sv3) == pytest.approx(1.0, abs=1e-12)


def test_init_uniform_cap():
    with pytest.raises(cc.ValidationError):
        cc.init_uniform(0)
    with pytest.raises(cc.ValidationError):
        cc.init_uniform(25)
    sv = cc.init_uniform(24)  # cap itself is allowed
    assert sv.size == 1 << 24
    del sv


# ---------------------------------------------------------------------------
# cost layer
# ---------------------------------------------------------------------------

def test_cost_layer_zero_angle_identity():
    ising = make_ising(4, 0)
    sv = cc.init_uniform(4)
    out = cc.apply_cost_layer(sv, ising, 0.0)
    assert np.array_equal(out, sv)


def test_cost_layer_preserves_moduli(rng):
    ising = make_ising(5, 1)
    raw = rng.normal(size=32) + 1j * rng.normal(size=32)
    sv = raw / np.linalg.norm(raw)
    out = cc.apply_cost_layer(sv, ising, 0.731)
    assert np.allclose(np.abs(out), np.abs(sv), atol=1e-12)
    assert np.linalg.norm(out) == pytest.approx(1.0, abs=1e-12)


def test_cost_layer_two_qubit_phase():
    ising = two_node_ising(1.5)
    j = ising.j[0, 1]
    gamma = np.pi / (2 * abs(j))
    sv = cc.init_uniform(2)
    out = cc.apply_cost_layer(sv, ising, gamma)
    # aligned states (00, 11) vs anti-aligned (01, 10): phase difference pi
    aligned = np.angle(out[0])
    anti = np.angle(out[1])
    diff = (anti - aligned) % (2 * np.pi)
    assert diff == pytest.approx(np.pi, abs=1e-9)


def test_cost_layer_dimension_mismatch():
    ising = make_ising(3, 2)
    with pytest.raises(cc.ValidationError):
        cc.apply_cost_layer(cc.init_uniform(4), ising, 0.1)


# ---------------------------------------------------------------------------
# mixer layer
# ---------------------------------------------------------------------------

def test_mixer_zero_angle_identity():
    sv = cc.init_uniform(3)
    assert np.allclose(cc.apply_mixer_layer(sv, 0.0), sv, atol=1e-15)


def test_mixer_half_pi_flips_all():
    sv = np.zeros(8, dtype=np.complex128)
    sv[0] = 1.0  # |000>
    out = cc.apply_mixer_layer(sv, np.pi / 2)
    probs = np.abs(out) ** 2
    assert probs[7] == pytest.approx(1.0, abs=1e-12)  # |111> up to phase


def test_mixer_preserves_norm(rng):
    raw = rng.normal(size=16) + 1j * rng.normal(size=16)
    sv = raw / np.linalg.norm(raw)
    for beta in (0.1, 0.9, 2.4):
        out = cc.apply_mixer_layer(sv, beta)
        assert np.linalg.norm(out) == pytest.approx(1.0, abs=1e-12)


def test_mixer_single_qubit_matrix():
    beta = 0.37
    sv = np.array([1.0, 0.0], dtype=np.complex128)
    out = cc.apply_mixer_layer(sv, beta)
    assert out[0] == pytest.approx(np.cos(beta), abs=1e-12)
    assert out[1] == pytest.approx(-1j * np.sin(beta), abs=1e-12)


# ---------------------------------------------------------------------------
# primitive gates
# ---------------------------------------------------------------------------

def test_apply_rx_matches_mixer():
    rng = np.random.default_rng(3)
    raw = rng.normal(size=8) + 1j * rng.normal(size=8)
    sv = raw / np.linalg.norm(raw)
    beta = 0.81
    via_gates = sv
    for k in range(3):
        via_gates = cc.apply_rx(via_gates, k, 2 * beta)
    assert np.allclose(via_gates, cc.apply_mixer_layer(sv, beta), atol=1e-12)


def test_apply_rz_phases():
    theta = 0.61
    sv = np.array([1.0, 1.0], dtype=np.complex128) / np.sqrt(2)
    out = cc.apply_rz(sv, 0, theta)
    assert out[0] == pytest.approx(np.exp(-1j * theta / 2) / np.sqrt(2), abs=1e-12)
    assert out[1] == pytest.approx(np.exp(+1j * theta / 2) / np.sqrt(2), abs=1e-12)


def test_apply_cnot_permutes_basis():
    sv = np.zeros(4, dtype=np.complex128)
    sv[0b01] = 1.0  # qubit 0 (control) set, qubit 1 clear
    out = cc.apply_cnot(sv, control=0, target=1)
    assert out[0b11] == pytest.approx(1.0)  # target toggled
    sv2 = np.zeros(4, dtype=np.complex128)
    sv2[0b10] = 1.0  # control clear
    out2 = cc.apply_cnot(sv2, control=0, target=1)
    assert out2[0b10] == pytest.approx(1.0)  # unchanged


def test_gate_level_cost_layer_matches_diagonal():
    for m in (2, 3, 4, 5, 6):
        ising = make_ising(m, 40 + m)
        rng = np.random.default_rng(m)
        raw = rng.normal(size=1 << m) + 1j * rng.normal(size=1 << m)
        sv = raw / np.linalg.norm(raw)
        gamma = 0.4 + 0.1 * m
        fast = cc.apply_cost_layer(sv, ising, gamma)
        slow = cc.apply_cost_layer_gates(sv, ising, gamma)
        assert np.max(np.abs(fast - slow)) < 1e-9


# ---------------------------------------------------------------------------
# full evolution
# ---------------------------------------------------------------------------

def test_run_qaoa_zero_angles_uniform():
    ising = make_ising(5, 3)
    params = cc.QaoaParams((0.0, 0.0), (0.0, 0.0))
    sv = cc.run_qaoa(ising, params)
    assert np.allclose(sv, 2 ** -2.5, atol=1e-12)


def test_run_qaoa_matches_manual_composition():
    ising = make_ising(4, 4)
    gamma, beta = 0.43, 0.91
    sv = cc.run_qaoa(ising, cc.QaoaParams((gamma,), (beta,)))
    manual = cc.apply_mixer_layer(cc.apply_cost_layer(cc.init_uniform(4), ising, gamma), beta)
    assert np.allclose(sv, manual, atol=1e-14)


def test_norm_preserved_across_random_sequences(rng):
    for _ in range(200):
        m = int(rng.integers(2, 11))
        ising = make_ising(m, int(rng.integers(0, 50)))
        sv = cc.init_uniform(m)
        for _ in range(int(rng.integers(1, 5))):
            if rng.random() < 0.5:
                sv = cc.apply_cost_layer(sv, ising, float(rng.normal()))
            else:
                sv = cc.apply_mixer_layer(sv, float(rng.normal()))
        assert abs(np.linalg.norm(sv) - 1.0) < 1e-9


# ---------------------------------------------------------------------------
# expectation
# ---------------------------------------------------------------------------

def test_expectation_uniform_single_edge():
    ising = two_node_ising(1.0)
    sv = cc.init_uniform(2)
    assert cc.expectation(sv, ising) == pytest.approx(0.5, abs=1e-12)


def test_expectation_basis_state():
    ising = make_ising(4, 6)
    values = cc.energy_table(ising) + ising.offset
    for idx in (0, 3, 9, 15):
        sv = np.zeros(16, dtype=np.complex128)
        sv[idx] = 1.0
        assert cc.expectation(sv, ising) == pytest.approx(values[idx], abs=1e-12)


def test_expectation_fixture_uniform_mean(sample4):
    ising = cc.qubo_to_ising(cc.build_mincut_qubo(sample4, 0b1111))
    qubo = cc.build_mincut_qubo(sample4, 0b1111)
    mean_cut = cc.objective_table(qubo).mean()
    assert cc.expectation(cc.init_uniform(4), ising) == pytest.approx(mean_cut, abs=1e-12)


def test_expectation_matches_enumeration(rng):
    for m in (3, 6, 10):
        ising = make_ising(m, 60 + m)
        p = 3
        params = cc.QaoaParams(tuple(rng.normal(size=p)), tuple(rng.normal(size=p)))
        sv = cc.run_qaoa(ising, params)
        direct = sum(
            abs(sv[z]) ** 2 * (ising.energy(1.0 - 2.0 * np.array([(z >> k) & 1 for k in range(m)]))
                               + ising.offset)
            for z in range(1 << m)
        )
        assert cc.expectation(sv, ising) == pytest.approx(direct, abs=1e-9)


def test_expectation_dimension_mismatch():
    ising = make_ising(3, 7)
    with pytest.raises(cc.ValidationError):
        cc.expectation(cc.init_uniform(4), ising)


# ---------------------------------------------------------------------------
# parameter optimization
# ---------------------------------------------------------------------------

def test_optimize_single_edge_reaches_optimum():
    ising = two_node_ising(-1.0)
    params = cc.optimize_params(ising, 1)
    sv = cc.run_qaoa(ising, params)
    assert cc.expectation(sv, ising) <= -0.99


def test_optimize_deeper_never_worse():
    ising = make_ising(6, 9)
    e = {}
    for p in (1, 2, 5):
        params = cc.optimize_params(ising, p)
        assert params.p == p
        e[p] = cc.expectation(cc.run_qaoa(ising, params), ising)
    assert e[2] <= e[1] + 1e-9
    assert e[5] <= e[1] + 1e-9


def test_optimize_zero_couplings_flat():
    ising = cc.qubo_to_ising(
        cc.build_mincut_qubo(cc.ISGame(np.zeros((3, 3))), 0b111))
    params = cc.optimize_params(ising, 1)
    sv = cc.run_qaoa(ising, params)
    assert cc.expectation(sv, ising) == pytest.approx(0.0, abs=1e-12)


def test_optimize_deterministic():
    ising = make_ising(5, 11)
    cfg = cc.QaoaConfig(nm_starts=3, nm_maxiter=30, seed=42)
    a = cc.optimize_params(ising, 3, cfg)
    b = cc.optimize_params(ising, 3, cfg)
    assert a == b


def test_optimize_rejects_bad_config():
    with pytest.raises(cc.ValidationError):
        cc.QaoaConfig(gamma_grid=0)
    with pytest.raises(cc.ValidationError):
        cc.QaoaConfig(nm_starts=0)
    ising = make_ising(3, 1)
    with pytest.raises(cc.ValidationError):
        cc.optimize_params(ising, 0)


def test_optimize_verbose_trace(capsys):
    ising = make_ising(3, 2)
    cc.optimize_params(ising, 1, verbose=True)
    err = capsys.readouterr().err
    assert "expectation" in err or "gamma" in err or len(err) > 0


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def test_sample_basis_state():
    ising = make_ising(4, 13)
    values = cc.energy_table(ising) + ising.offset
    sv = np.zeros(16, dtype=np.complex128)
    sv[0b0110] = 1.0
    sol = cc.sample_and_select(sv, ising, shots=32, seed=0)
    assert sol.mask == 0b0110
    assert sol.value == pytest.approx(values[0b0110], abs=1e-12)


def test_sample_fixture_uniform_finds_optimum(sample4):
    ising = cc.qubo_to_ising(cc.build_mincut_qubo(sample4, 0b1111))
    sol = cc.sample_and_select(cc.init_uniform(4), ising, shots=1024, seed=0)
    assert sol.value == pytest.approx(-6.0, abs=1e-12)
    assert sol.mask == 0b1010


def test_sample_deterministic():
    ising = make_ising(5, 14)
    sv = cc.run_qaoa(ising, cc.QaoaParams((0.3,), (0.7,)))
    a = cc.sample_and_select(sv, ising, shots=256, seed=9)
    b = cc.sample_and_select(sv, ising, shots=256, seed=9)
    assert np.array_equal(a.x, b.x) and a.value == b.value


def test_sample_trivial_fallback():
    ising = make_ising(4, 15)
    sv = np.zeros(16, dtype=np.complex128)
    sv[0] = 1.0  # every sample is the all-zeros string
    sol = cc.sample_and_select(sv, ising, shots=64, seed=1)
    # candidates are single-bit flips of all-zeros, canonicalized to bit 0
    # clear (the flip of bit 0 becomes its complement, mask 0b1110)
    assert sol.mask in (0b0010, 0b0100, 0b1000, 0b1110)
    values = cc.energy_table(ising) + ising.offset
    expected = min(values[g] for g in (0b0010, 0b0100, 0b1000, 0b1110))
    assert sol.value == pytest.approx(expected, abs=1e-12)


def test_sample_raw_counts_follow_probabilities():
    sv = np.array([np.sqrt(0.9), 0.0, 0.0, np.sqrt(0.1)], dtype=np.complex128)
    samples = cc.sample_bitstrings(sv, shots=20000, seed=2)
    frac = (samples == 0).mean()
    assert frac == pytest.approx(0.9, abs=0.02)


def test_all_zero_angle_sampling_uniform():
    m = 4
    ising = make_ising(m, 16)
    sv = cc.run_qaoa(ising, cc.QaoaParams((0.0,), (0.0,)))
    shots = 20000
    samples = cc.sample_bitstrings(sv, shots=shots, seed=3)
    counts = np.bincount(samples, minlength=1 << m)
    p = 1.0 / (1 << m)
    sigma = np.sqrt(shots * p * (1 - p))
    assert np.all(np.abs(counts - shots * p) <= 5 * sigma)


# ---------------------------------------------------------------------------
# circuit accounting
# ---------------------------------------------------------------------------

def test_circuit_report_small_fixture(sample4):
    ising = cc.qubo_to_ising(cc.build_mincut_qubo(sample4, 0b1111))
    rep = cc.circuit_report(ising, 1)
    assert (rep.m, rep.p) == (4, 1)
    assert rep.hadamard_count == 4
    assert rep.cnot_count == 12
    assert rep.rz_count == 10
    assert rep.rx_count == 4
    assert rep.total == 30


def test_circuit_report_large_counts():
    g = random_game(20, seed=1)
    ising20 = cc.qubo_to_ising(cc.build_mincut_qubo(g, cc.full_mask(20)))
    rep = cc.circuit_report(ising20, 3)
    assert rep.cnot_count == 1140
    assert rep.rz_count == 630
    assert rep.rx_count == 60


def test_circuit_report_closed_form():
    for m in (2, 5, 9, 14):
        g = random_game(m, seed=m)
        ising = cc.qubo_to_ising(cc.build_mincut_qubo(g, cc.full_mask(m)))
        e = m * (m - 1) // 2
        for p in (1, 3, 5):
            rep = cc.circuit_report(ising, p)
            assert rep.total == m + p * (3 * e + 2 * m)


def test_circuit_report_rejects_zero_layers():
    ising = make_ising(3, 3)
    with pytest.raises(cc.ValidationError):
        cc.circuit_report(ising, 0)
