"""Gate-set rewriting: lowering rules, equivalence checks, depth benchmarks."""
from __future__ import annotations

import numpy as np
import pytest

from qdde import DdeProblem, sim
from qdde.circuit import Circuit, Gate, gate_matrix
from qdde.rebase import (GATE_SETS, logical_unitary, pipeline_depth, rebase,
                         rebase_report, theoretical_counts, verify_equivalence,
                         zyz_angles)
from qdde.synth import synth_qft

from conftest import random_circuit


def up_to_phase(a: np.ndarray, b: np.ndarray) -> float:
    i = np.unravel_index(np.argmax(np.abs(a)), a.shape)
    phase = a[i] / b[i]
    phase /= abs(phase)
    return float(np.max(np.abs(a - phase * b)))


def test_gate_set_vocabularies():
    assert set(GATE_SETS["textbook"]) == {"H", "CX", "RZ", "SWAP"}
    assert set(GATE_SETS["tket"]) == {"TK1", "CX", "CCX"}
    assert set(GATE_SETS["heron"]) == {"SX", "RZ", "X", "CZ"}
    assert set(GATE_SETS["star"]) == {"CX", "H", "S", "RZ"}
    assert set(GATE_SETS["ionq"]) == {"GPI", "GPI2", "Z", "MS"}
    assert "Unitary1Q" in GATE_SETS["unconstrained"]


def test_zyz_angles_reconstruct_random_unitaries():
    rng = np.random.default_rng(15)
    worst = 0.0
    mats = []
    for _ in range(50):
        z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        qm, r = np.linalg.qr(z)
        mats.append(qm * (np.diag(r) / np.abs(np.diag(r))))
    for kind in ("H", "X", "S", "T", "SX"):
        mats.append(gate_matrix(Gate(kind, (0,))))
    for m in mats:
        a, b, c = zyz_angles(m)
        rz = lambda t: np.diag([np.exp(-0.5j * t), np.exp(0.5j * t)])
        ry = np.array([[np.cos(b / 2), -np.sin(b / 2)],
                       [np.sin(b / 2), np.cos(b / 2)]])
        worst = max(worst, up_to_phase(m, rz(a) @ ry @ rz(c)))
    assert worst < 1e-12


@pytest.mark.parametrize("gate_set", ["textbook", "star", "heron", "ionq"])
def test_ccx_lowering_is_exact(gate_set):
    c = Circuit(3)
    c.add("CCX", 0, 1, 2)
    out = rebase(c, gate_set)
    assert verify_equivalence(c, out) < 1e-10
    assert all(g.kind in GATE_SETS[gate_set] for g in out.gates)


@pytest.mark.parametrize("kind", ["MCX", "MCZ"])
@pytest.mark.parametrize("width", [3, 4, 5, 6])
def test_multi_controlled_lowering(kind, width):
    rng = np.random.default_rng(width * 7)
    qubits = tuple(int(x) for x in rng.permutation(width)[: max(3, width - 1)])
    pols = tuple(bool(b) for b in rng.integers(0, 2, len(qubits) - 1))
    c = Circuit(width)
    c.add(kind, *qubits, polarities=pols)
    out = rebase(c, "star")
    assert verify_equivalence(c, out) < 1e-9


@pytest.mark.parametrize("kind", ["MCX", "MCZ"])
def test_multi_controlled_lowering_without_borrowable_wires(kind):
    for width in (3, 4, 5):
        c = Circuit(width)
        c.add(kind, *range(width))
        out = rebase(c, "textbook")
        assert verify_equivalence(c, out) < 1e-9


def test_two_qubit_canonicalisation_stream():
    c = Circuit(2)
    c.add("CPhase", 0, 1, params=(0.7,))
    c.add("CZ", 1, 0)
    c.add("MS", 0, 1, params=(0.9,))
    c.add("CX", 1, 0)
    for gs in ("textbook", "tket", "star", "heron", "ionq"):
        out = rebase(c, gs)
        assert verify_equivalence(c, out) < 1e-9, gs


def test_swap_handling_differs_by_set():
    c = Circuit(3)
    c.add("H", 0)
    c.add("SWAP", 0, 2)
    c.add("CX", 0, 1)
    relabeled = rebase(c, "tket")
    assert relabeled.output_permutation is not None
    assert verify_equivalence(c, relabeled) < 1e-10
    literal = rebase(c, "ionq")
    assert literal.output_permutation is None
    assert verify_equivalence(c, literal) < 1e-10


def test_rebase_random_circuits_all_sets():
    rng = np.random.default_rng(99)
    for _ in range(30):
        width = int(rng.integers(2, 7))
        c = random_circuit(rng, width, int(rng.integers(5, 41)))
        for gs in GATE_SETS:
            out = rebase(c, gs)
            assert verify_equivalence(c, out) < 1e-8, gs
            assert all(g.kind in GATE_SETS[gs] for g in out.gates), gs
            again = rebase(out, gs)
            assert verify_equivalence(c, again) < 1e-8, gs
            assert len(again.gates) <= len(out.gates), gs


def test_rebase_rejects_unknown_set():
    with pytest.raises(ValueError):
        rebase(Circuit(1), "rigetti")


def test_qft_depths_per_gate_set():
    expected = {"unconstrained": [4, 6, 8, 10], "tket": [5, 10, 16, 23],
                "star": [9, 17, 26, 36], "heron": [10, 23, 36, 49],
                "ionq": [27, 46, 71, 101]}
    for gs, series in expected.items():
        measured = []
        for q in (2, 3, 4, 5):
            c = Circuit(q)
            c.extend(synth_qft(tuple(range(q))))
            measured.append(rebase(c, gs).depth())
        assert measured == series, gs


def test_theoretical_layer_counts():
    assert [theoretical_counts("QFT", q) for q in (1, 2, 3, 4, 5)] == [1, 4, 8, 12, 18]
    assert [theoretical_counts("FABLE", q) for q in (2, 3, 4, 5)] == [16, 64, 256, 1024]
    with pytest.raises(ValueError):
        theoretical_counts("OAA", 3)


def test_logical_unitary_undoes_permutation():
    c = Circuit(2)
    c.add("H", 0)
    c.add("SWAP", 0, 1)
    out = rebase(c, "tket")
    direct = sim.unitary(c)
    assert up_to_phase(direct, logical_unitary(out)) < 1e-12


def test_rebase_report_carries_verification():
    c = Circuit(2)
    c.add("H", 0)
    c.add("CPhase", 0, 1, params=(0.4,))
    rep = rebase_report(c, "star", verify=True)
    assert rep.gate_set == "star"
    assert rep.input_gate_count == 2
    assert rep.output_gate_count == len(rep.circuit.gates)
    assert rep.equivalence_checked
    assert rep.equivalence_error < 1e-10
    assert rep.depth.total_depth == rep.circuit.depth()


def test_pipeline_depth_star_totals():
    rep = pipeline_depth(DdeProblem(d=1, n_x=16, L=40), "star")
    assert rep.total_depth == 5902
    assert rep.reps == 6
    assert rep.depth_by_tag == {"StatePrep": 5, "QFT": 29, "FABLE": 122,
                                "OAA": 5730, "IQFT": 29}
    assert max(rep.depth_by_tag, key=rep.depth_by_tag.get) == "OAA"
    assert all(v <= rep.total_depth for v in rep.depth_by_tag.values())
    assert sum(rep.depth_by_tag.values()) >= rep.total_depth


def test_pipeline_depth_scales_with_dimension():
    d1 = pipeline_depth(DdeProblem(d=1, n_x=16, L=40), "tket")
    d2 = pipeline_depth(DdeProblem(d=2, n_x=16, L=40), "tket")
    assert d1.total_depth == 1216
    assert d2.total_depth > 10 * d1.total_depth
    assert d2.reps == 40
