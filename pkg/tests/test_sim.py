"""Statevector simulation against basis-enumeration oracles, sampling, bounds."""
from __future__ import annotations

import numpy as np
import pytest

from qdde import DdeProblem, GridField, sim
from qdde.circuit import Circuit, Gate, gate_matrix

from conftest import random_circuit


def embed_oracle(m: np.ndarray, qubits: tuple[int, ...], width: int) -> np.ndarray:
    """Dense expansion built by explicit basis-index bookkeeping (qubit 0 = MSB)."""
    n = 1 << width
    k = len(qubits)
    u = np.zeros((n, n), dtype=complex)
    for col in range(n):
        bits = [(col >> (width - 1 - q)) & 1 for q in range(width)]
        sub_col = 0
        for q in qubits:
            sub_col = (sub_col << 1) | bits[q]
        for sub_row in range(1 << k):
            new_bits = list(bits)
            for idx, q in enumerate(qubits):
                new_bits[q] = (sub_row >> (k - 1 - idx)) & 1
            row = 0
            for b in new_bits:
                row = (row << 1) | b
            u[row, col] += m[sub_row, sub_col]
    return u


def controlled_matrix(kind: str, n_wires: int, polarities: tuple[bool, ...]) -> np.ndarray:
    """Dense MCX or MCZ on n_wires lines, controls first, target last."""
    n = 1 << n_wires
    m = np.eye(n, dtype=complex)
    sel = 0
    for pol in polarities:
        sel = (sel << 1) | (1 if pol else 0)
    base = sel << 1
    if kind == "MCX":
        m[[base, base + 1], :] = m[[base + 1, base], :]
    else:
        m[base + 1, base + 1] = -1.0
    return m


@pytest.mark.parametrize("gate", [
    Gate("H", (1,)), Gate("X", (2,)), Gate("SX", (0,)),
    Gate("RZ", (1,), params=(0.37,)), Gate("RY", (2,), params=(-1.1,)),
    Gate("Phase", (0,), params=(2.2,)),
    Gate("CX", (2, 0)), Gate("CZ", (0, 2)), Gate("SWAP", (1, 2)),
    Gate("CPhase", (2, 1), params=(0.61,)), Gate("MS", (0, 2), params=(0.8,)),
    Gate("CCX", (2, 0, 1)),
])
def test_apply_gate_matches_embedding_oracle(gate):
    width = 3
    c = Circuit(width)
    c.append(gate)
    u = sim.unitary(c)
    oracle = embed_oracle(gate_matrix(gate), gate.qubits, width)
    assert np.max(np.abs(u - oracle)) < 1e-13


@pytest.mark.parametrize("kind", ["MCX", "MCZ"])
@pytest.mark.parametrize("pols", [(True, True, True), (False, True, False)])
def test_apply_multi_controlled_matches_oracle(kind, pols):
    width = 4
    qubits = (3, 0, 2, 1)
    c = Circuit(width)
    c.add(kind, *qubits, polarities=pols)
    u = sim.unitary(c)
    oracle = embed_oracle(controlled_matrix(kind, 4, pols), qubits, width)
    assert np.max(np.abs(u - oracle)) < 1e-13


def test_run_agrees_with_unitary_on_random_circuit():
    rng = np.random.default_rng(21)
    c = random_circuit(rng, 4, 30)
    state = rng.normal(size=16) + 1j * rng.normal(size=16)
    state /= np.linalg.norm(state)
    assert np.allclose(sim.run(c, state), sim.unitary(c) @ state, atol=1e-12)


def test_run_rejects_wrong_length():
    with pytest.raises(ValueError):
        sim.run(Circuit(2), np.zeros(3))


def test_postselect_bell_branch():
    c = Circuit(2)
    c.add("H", 0)
    c.add("CX", 0, 1)
    state = sim.run(c)
    sub, prob = sim.postselect(state, 2, {0: 0})
    assert prob == pytest.approx(0.5, abs=1e-12)
    assert np.allclose(sub, [1.0, 0.0], atol=1e-12)


def test_postselect_zero_branch():
    state = np.zeros(4, dtype=complex)
    state[0] = 1.0
    sub, prob = sim.postselect(state, 2, {0: 1})
    assert prob == 0.0
    assert np.all(sub == 0.0)


def test_sample_counts_deterministic_and_total():
    p = np.array([0.5, 0.25, 0.25])
    a = sim.sample_counts(p, 1000, 42)
    b = sim.sample_counts(p, 1000, 42)
    assert np.array_equal(a, b)
    assert a.sum() == 1000
    with pytest.raises(ValueError):
        sim.sample_counts(np.zeros(4), 10, 0)


def test_good_pattern_layout():
    regs = {"AA_flag": (0, 1), "flag": (1, 1), "zeros": (2, 3), "state": (5, 3)}
    assert sim.good_pattern(regs) == {0: 1, 1: 0, 2: 0, 3: 0, 4: 0}


def test_measure_state_modes_agree_on_branch():
    # amplified-style toy state: prob mass on AA_flag=1, flag=0, zeros=0 branch
    regs = {"AA_flag": (0, 1), "flag": (1, 1), "zeros": (2, 1), "state": (3, 1)}
    state = np.zeros(16, dtype=complex)
    state[0b1000] = np.sqrt(0.32)
    state[0b1001] = np.sqrt(0.48)
    state[0b0001] = np.sqrt(0.20)
    post = sim.measure_state(state, 4, regs, 4000, 5, mode="postselect")
    raw = sim.measure_state(state, 4, regs, 4000, 5, mode="raw")
    assert post.usable_shots == 4000
    assert post.branch_probability == pytest.approx(0.8, abs=1e-12)
    assert raw.usable_shots == raw.counts.sum() <= 4000
    assert raw.success_fraction == pytest.approx(raw.usable_shots / 4000)
    assert post.counts.sum() == 4000
    with pytest.raises(ValueError):
        sim.measure_state(state, 4, regs, 10, 0, mode="weak")


def test_hoeffding_shot_counts():
    # ceil(-ln(0.25) / 0.02) = ceil(69.31) and ceil(-ln(0.05) / 1.8e-5)
    assert sim.hoeffding_shots(0.5, 0.1) == 70
    assert sim.hoeffding_shots(0.1, 0.003) == 166430
    with pytest.raises(ValueError):
        sim.hoeffding_shots(0.0, 0.1)
    with pytest.raises(ValueError):
        sim.hoeffding_shots(0.1, 0.0)


def test_hoeffding_monotonicity_grid():
    deltas = np.linspace(0.02, 0.5, 20)
    epsilons = np.linspace(0.002, 0.1, 20)
    by_delta = [sim.hoeffding_shots(d, 0.01) for d in deltas]
    by_eps = [sim.hoeffding_shots(0.1, e) for e in epsilons]
    assert all(a >= b for a, b in zip(by_delta, by_delta[1:]))
    assert all(a >= b for a, b in zip(by_eps, by_eps[1:]))


def test_recover_distribution_with_reference_restores_field():
    prob = DdeProblem(d=1, n_x=8, L=20)
    values = np.array([0.1, 0.4, 1.3, 0.9, -0.2, 0.05, 0.0, 0.3])
    ref = GridField(prob, values)
    counts = (values ** 2) * 1000.0
    rec = sim.recover_distribution(counts, prob, reference=ref)
    assert np.allclose(rec.values, values, atol=1e-12)


def test_recover_distribution_without_reference_has_unit_mass():
    prob = DdeProblem(d=1, n_x=8, L=20)
    counts = np.array([0, 3, 12, 40, 30, 10, 4, 1], dtype=float)
    rec = sim.recover_distribution(counts, prob)
    assert rec.mass == pytest.approx(1.0, abs=1e-12)
    assert np.all(rec.values >= 0.0)


def test_epsilon_report_sums_components():
    prob = DdeProblem(d=1, n_x=4, L=20)
    analytic = GridField(prob, np.array([0.2, 0.3, 0.4, 0.1]))
    classical = GridField(prob, np.array([0.2, 0.35, 0.4, 0.1]))
    quantum = GridField(prob, np.array([0.21, 0.35, 0.38, 0.1]))
    rep = sim.epsilon_report(analytic, classical, quantum)
    assert rep.eps_classical == pytest.approx(0.05, abs=1e-14)
    assert rep.eps_quantum == pytest.approx(0.02, abs=1e-14)
    assert rep.eps_total == pytest.approx(0.07, abs=1e-14)
