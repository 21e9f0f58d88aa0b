"""Circuit container, gate validation, scheduling, and serialization."""
from __future__ import annotations

import numpy as np
import pytest

from qdde import sim
from qdde.circuit import (Circuit, Gate, gate_matrix, schedule_depth,
                          schedule_heights)

from conftest import random_circuit


def test_gate_validation_errors():
    with pytest.raises(ValueError):
        Gate("Q", (0,))
    with pytest.raises(ValueError):
        Gate("H", (0, 1))
    with pytest.raises(ValueError):
        Gate("CX", (1, 1))
    with pytest.raises(ValueError):
        Gate("RZ", (0,))
    with pytest.raises(ValueError):
        Gate("H", (0,), params=(0.1,))
    with pytest.raises(ValueError):
        Gate("CX", (0, 1), polarities=(True,))
    with pytest.raises(ValueError):
        Gate("MCX", (0, 1, 2), polarities=(True,))
    with pytest.raises(ValueError):
        Gate("MCX", (0,))
    with pytest.raises(ValueError):
        Gate("H", (0,), tag="Prep")


def test_controlled_polarities_default_to_all_true():
    g = Gate("MCX", (0, 1, 2))
    assert g.polarities == (True, True)


def test_gate_matrix_spot_values():
    s = 1.0 / np.sqrt(2.0)
    assert np.allclose(gate_matrix(Gate("H", (0,))), [[s, s], [s, -s]])
    assert np.allclose(gate_matrix(Gate("S", (0,))), np.diag([1, 1j]))
    theta = 0.3
    rz = gate_matrix(Gate("RZ", (0,), params=(theta,)))
    assert np.allclose(rz, np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)]))
    cx = gate_matrix(Gate("CX", (0, 1)))
    assert np.allclose(cx, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    cp = gate_matrix(Gate("CPhase", (0, 1), params=(theta,)))
    assert np.allclose(cp, np.diag([1, 1, 1, np.exp(1j * theta)]))


def test_ms_matrix_is_xx_rotation():
    theta = 0.7
    ms = gate_matrix(Gate("MS", (0, 1), params=(theta,)))
    xx = np.kron([[0.0, 1.0], [1.0, 0.0]], [[0.0, 1.0], [1.0, 0.0]])
    oracle = (np.cos(theta / 2) * np.eye(4)
              - 1j * np.sin(theta / 2) * xx)
    assert np.allclose(ms, oracle, atol=1e-14)


def test_gate_inverse_matrices():
    rng = np.random.default_rng(2)
    gates = [Gate("H", (0,)), Gate("S", (0,)), Gate("T", (0,)),
             Gate("SX", (0,)), Gate("RY", (0,), params=(0.8,)),
             Gate("Phase", (0,), params=(-1.2,)),
             Gate("CPhase", (0, 1), params=(0.4,)),
             Gate("MS", (0, 1), params=(0.9,)), Gate("SWAP", (0, 1)),
             Gate("CCX", (0, 1, 2))]
    for g in gates:
        m = gate_matrix(g)
        mi = gate_matrix(g.inverse())
        assert np.allclose(mi @ m, np.eye(m.shape[0]), atol=1e-13), g.kind


def test_circuit_inverse_cancels():
    rng = np.random.default_rng(9)
    c = random_circuit(rng, 4, 25)
    u = sim.unitary(c.compose(c.inverse()))
    assert np.max(np.abs(u - np.eye(16))) < 1e-10


def test_depth_hand_example():
    c = Circuit(2)
    c.add("H", 0)
    c.add("H", 1)
    c.add("CX", 0, 1)
    c.add("H", 0)
    assert c.depth() == 3
    assert schedule_depth(c.gates) == 3


def test_schedule_heights_chain_segments():
    a = Circuit(2)
    a.add("H", 0)
    b = Circuit(2)
    b.add("CX", 0, 1)
    h1 = schedule_heights(a.gates)
    assert h1 == {0: 1}
    h2 = schedule_heights(b.gates, h1)
    assert h2 == {0: 2, 1: 2}


def test_depth_report_totals():
    c = Circuit(3)
    c.add("H", 0, tag="QFT")
    c.add("CX", 0, 1, tag="QFT")
    c.add("RZ", 2, params=(0.1,), tag="FABLE")
    rep = c.depth_report()
    assert rep.width == 3
    assert rep.gate_count == 3
    assert rep.total_depth == 2
    assert rep.depth_by_tag["QFT"] == 2
    assert rep.depth_by_tag["FABLE"] == 1
    assert rep.count_by_kind == {"H": 1, "CX": 1, "RZ": 1}


def test_retagged_and_embedded():
    c = Circuit(2)
    c.add("CX", 0, 1, tag="QFT")
    r = c.retagged("OAA")
    assert all(g.tag == "OAA" for g in r.gates)
    e = c.embedded(4, 2)
    assert e.width == 4
    assert e.gates[0].qubits == (2, 3)


def test_compose_width_mismatch():
    with pytest.raises(ValueError):
        Circuit(2).compose(Circuit(3))


def test_register_bounds_checked():
    with pytest.raises(ValueError):
        Circuit(2, {"state": (1, 2)})


def test_serialize_roundtrip():
    rng = np.random.default_rng(4)
    c = random_circuit(rng, 5, 30)
    c.registers.update({"state": (0, 3), "flag": (3, 1)})
    c.output_permutation = (1, 0, 2, 4, 3)
    text = c.serialize()
    back = Circuit.deserialize(text)
    assert back.width == c.width
    assert back.registers == c.registers
    assert back.output_permutation == c.output_permutation
    assert back.gates == c.gates
    assert back.serialize() == text


def test_deserialize_rejects_missing_header():
    with pytest.raises(ValueError):
        Circuit.deserialize("H 0 - - Other\n")


def test_copy_is_independent():
    c = Circuit(2)
    c.add("H", 0)
    d = c.copy()
    d.add("X", 1)
    assert len(c.gates) == 1 and len(d.gates) == 2
