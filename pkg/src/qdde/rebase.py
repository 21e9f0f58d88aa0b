"""Gate-set rebasing: lowering passes, fusion, equivalence checks, depth reports."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import sim
from .circuit import (Circuit, DepthReport, Gate, GATE_DEFS, gate_matrix,
                      schedule_depth, schedule_heights, unitary1q_gate)
from .problem import DdeProblem
from .synth import PipelineSpec, assemble_pipeline, synth_multiplexed_rotation

GATE_SETS: dict[str, frozenset[str]] = {
    "unconstrained": frozenset(k for k, (a, _) in GATE_DEFS.items()
                               if a is not None),
    "textbook": frozenset({"H", "CX", "RZ", "SWAP"}),
    "tket": frozenset({"TK1", "CX", "CCX"}),
    "heron": frozenset({"SX", "RZ", "X", "CZ"}),
    "star": frozenset({"CX", "H", "S", "RZ"}),
    "ionq": frozenset({"GPI", "GPI2", "Z", "MS"}),
}

# fixed-coupling sets relabel wires instead of emitting CX chains for SWAPs;
# the ion chain executes its swaps as pulses, so it keeps them
_RELABEL_SETS = ("tket", "heron", "star")

_ENTANGLER = {"unconstrained": None, "textbook": "CX", "tket": "CX",
              "star": "CX", "heron": "CZ", "ionq": "MS"}

_EPS = 1e-12


# --- permutation bookkeeping -------------------------------------------------

def _compose_permutations(first: tuple[int, ...] | None,
                          second: tuple[int, ...] | None,
                          width: int) -> tuple[int, ...] | None:
    if first is None and second is None:
        return None
    a = first if first is not None else tuple(range(width))
    b = second if second is not None else tuple(range(width))
    out = tuple(b[a[q]] for q in range(width))
    return None if out == tuple(range(width)) else out


def _elide_swaps(gates: list[Gate], width: int
                 ) -> tuple[list[Gate], tuple[int, ...] | None]:
    """Drop SWAPs by relabelling wires; returns the final logical-to-wire map."""
    wire = list(range(width))
    out: list[Gate] = []
    for g in gates:
        if g.kind == "SWAP":
            a, b = g.qubits
            wire[a], wire[b] = wire[b], wire[a]
            continue
        out.append(Gate(g.kind, tuple(wire[q] for q in g.qubits),
                        g.params, g.polarities, g.tag))
    perm = tuple(wire)
    return out, (None if perm == tuple(range(width)) else perm)


# --- multi-controlled lowering ----------------------------------------------

def _mcx_vchain(ctrls: tuple[int, ...], target: int, borrows: list[int],
                tag: str) -> list[Gate]:
    """Borrowed-ancilla ladder; 4(n-2) Toffolis for n >= 3 controls."""
    n = len(ctrls)
    top = Gate("CCX", (ctrls[n - 1], borrows[n - 3], target), tag=tag)
    ladder = [Gate("CCX", (ctrls[n - 2 - i], borrows[n - 4 - i],
                           borrows[n - 3 - i]), tag=tag)
              for i in range(n - 3)]
    mid = Gate("CCX", (ctrls[0], ctrls[1], borrows[0]), tag=tag)
    half = [top] + ladder + [mid] + ladder[::-1]
    return half + half


def _mcphase(wires: tuple[int, ...], phi: float, tag: str) -> list[Gate]:
    """Exact phase phi on the all-ones pattern of wires; no ancillas."""
    if len(wires) == 1:
        return [Gate("Phase", wires, (phi,), tag=tag)]
    ctrls, t = wires[:-1], wires[-1]
    # one multiplexed-RZ step splits off the last wire, then recurse
    angles = np.zeros(1 << len(ctrls))
    angles[-1] = phi
    gates = synth_multiplexed_rotation("RZ", angles, ctrls, t, tag=tag,
                                       cutoff=None)
    gates.extend(_mcphase(ctrls, phi / 2.0, tag))
    return gates


def _mcx_core(ctrls: tuple[int, ...], target: int, width: int,
              tag: str) -> list[Gate]:
    n = len(ctrls)
    if n == 1:
        return [Gate("CX", (ctrls[0], target), tag=tag)]
    if n == 2:
        return [Gate("CCX", (ctrls[0], ctrls[1], target), tag=tag)]
    used = set(ctrls) | {target}
    borrows = [q for q in range(width) if q not in used]
    if len(borrows) >= n - 2:
        return _mcx_vchain(ctrls, target, borrows, tag)
    h = Gate("H", (target,), tag=tag)
    return [h] + _mcphase(ctrls + (target,), np.pi, tag) + [h]


def _lower_multi(gates: list[Gate], width: int) -> list[Gate]:
    out: list[Gate] = []
    for g in gates:
        if g.kind not in ("MCX", "MCZ"):
            out.append(g)
            continue
        ctrls, target = g.qubits[:-1], g.qubits[-1]
        pols = g.polarities or (True,) * len(ctrls)
        flips = [Gate("X", (c,), tag=g.tag)
                 for c, keep in zip(ctrls, pols) if not keep]
        if g.kind == "MCX":
            core = _mcx_core(ctrls, target, width, g.tag)
        elif len(g.qubits) == 2:
            core = [Gate("CZ", g.qubits, tag=g.tag)]
        else:
            used = set(g.qubits)
            borrows = [q for q in range(width) if q not in used]
            if len(borrows) >= len(g.qubits) - 3:
                h = Gate("H", (target,), tag=g.tag)
                core = [h] + _mcx_core(ctrls, target, width, g.tag) + [h]
            else:
                core = _mcphase(g.qubits, np.pi, g.tag)
        out.extend(flips)
        out.extend(core)
        out.extend(flips)
    return out


_CCX_PATTERN = (
    ("H", "t"), ("CX", "bt"), ("Tdg", "t"), ("CX", "at"), ("T", "t"),
    ("CX", "bt"), ("Tdg", "t"), ("CX", "at"), ("T", "b"), ("T", "t"),
    ("H", "t"), ("CX", "ab"), ("T", "a"), ("Tdg", "b"), ("CX", "ab"),
)


def _lower_ccx(gates: list[Gate]) -> list[Gate]:
    out: list[Gate] = []
    for g in gates:
        if g.kind != "CCX":
            out.append(g)
            continue
        a, b, t = g.qubits
        wires = {"a": a, "b": b, "t": t}
        for kind, spots in _CCX_PATTERN:
            out.append(Gate(kind, tuple(wires[s] for s in spots), tag=g.tag))
    return out


def _lower_swap(gates: list[Gate]) -> list[Gate]:
    out: list[Gate] = []
    for g in gates:
        if g.kind != "SWAP":
            out.append(g)
            continue
        a, b = g.qubits
        out.append(Gate("CX", (a, b), tag=g.tag))
        out.append(Gate("CX", (b, a), tag=g.tag))
        out.append(Gate("CX", (a, b), tag=g.tag))
    return out


# --- two-qubit canonicalisation ---------------------------------------------

def _interleave_diagonal_runs(gates: list[Gate]) -> list[Gate]:
    """Expand runs of commuting controlled phases sharing one wire so their
    conjugated rotations can schedule in parallel."""
    out: list[Gate] = []
    i = 0
    while i < len(gates):
        g = gates[i]
        if g.kind != "CPhase":
            out.append(g)
            i += 1
            continue
        shared = g.qubits[1]
        j = i
        group: list[Gate] = []
        while (j < len(gates) and gates[j].kind == "CPhase"
               and gates[j].qubits[1] == shared):
            group.append(gates[j])
            j += 1
        others = [h.qubits[0] for h in group]
        if len(group) < 2 or len(set(others)) != len(others) or shared in others:
            out.append(g)
            i += 1
            continue
        half = [h.params[0] / 2.0 for h in group]
        out.append(Gate("RZ", (shared,), (sum(half),), tag=g.tag))
        out.extend(Gate("RZ", (k,), (t,), tag=h.tag)
                   for h, k, t in zip(group, others, half))
        out.extend(Gate("CX", (shared, k), tag=h.tag)
                   for h, k in zip(group, others))
        out.extend(Gate("RZ", (k,), (-t,), tag=h.tag)
                   for h, k, t in zip(group, others, half))
        out.extend(Gate("CX", (shared, k), tag=h.tag)
                   for h, k in zip(group, others))
        i = j
    return out

def _canonical_2q(gates: list[Gate], gate_set: str) -> list[Gate]:
    target = _ENTANGLER[gate_set]
    if target is None:
        return gates
    native = GATE_SETS[gate_set]
    staged: list[Gate] = []
    for g in gates:
        if g.kind == "CPhase":
            # symmetric gate; put the conjugated rotation on the first wire,
            # which the synthesis routines keep less busy
            a, b = g.qubits
            th = g.params[0]
            staged += [Gate("RZ", (a,), (th / 2,), tag=g.tag),
                       Gate("RZ", (b,), (th / 2,), tag=g.tag),
                       Gate("CX", (b, a), tag=g.tag),
                       Gate("RZ", (a,), (-th / 2,), tag=g.tag),
                       Gate("CX", (b, a), tag=g.tag)]
        elif g.kind == "CZ" and "CZ" not in native:
            a, b = g.qubits
            staged += [Gate("H", (b,), tag=g.tag), Gate("CX", (a, b), tag=g.tag),
                       Gate("H", (b,), tag=g.tag)]
        elif g.kind == "MS" and "MS" not in native:
            a, b = g.qubits
            th = g.params[0]
            staged += [Gate("H", (a,), tag=g.tag), Gate("H", (b,), tag=g.tag),
                       Gate("CX", (a, b), tag=g.tag),
                       Gate("RZ", (b,), (th,), tag=g.tag),
                       Gate("CX", (a, b), tag=g.tag),
                       Gate("H", (a,), tag=g.tag), Gate("H", (b,), tag=g.tag)]
        else:
            staged.append(g)
    if target == "CX":
        return staged
    out: list[Gate] = []
    for g in staged:
        if g.kind != "CX":
            out.append(g)
            continue
        a, b = g.qubits
        if target == "CZ":
            out += [Gate("H", (b,), tag=g.tag), Gate("CZ", (a, b), tag=g.tag),
                    Gate("H", (b,), tag=g.tag)]
        else:  # MS pair conversion
            out += [Gate("RY", (a,), (np.pi / 2,), tag=g.tag),
                    Gate("MS", (a, b), (np.pi / 2,), tag=g.tag),
                    Gate("RX", (a,), (-np.pi / 2,), tag=g.tag),
                    Gate("RX", (b,), (-np.pi / 2,), tag=g.tag),
                    Gate("RY", (a,), (-np.pi / 2,), tag=g.tag)]
    return out


# --- single-qubit resynthesis ------------------------------------------------

def zyz_angles(m: np.ndarray) -> tuple[float, float, float]:
    """Euler angles (a, b, c) with m proportional to Rz(a) Ry(b) Rz(c).

    With b in [0, pi] both half-angle factors are nonnegative, so the phases
    of m00 and m10 give -(a+c)/2 and (a-c)/2 without wrap ambiguity."""
    u = m / np.sqrt(np.linalg.det(m))
    b = 2.0 * np.arctan2(abs(u[1, 0]), abs(u[0, 0]))
    if abs(u[1, 0]) < 1e-13:
        return float(-2.0 * np.angle(u[0, 0])), float(b), 0.0
    if abs(u[0, 0]) < 1e-13:
        return float(2.0 * np.angle(u[1, 0])), float(b), 0.0
    p = np.angle(u[0, 0])
    q = np.angle(u[1, 0])
    return float(q - p), float(b), float(-q - p)


def _wrap(theta: float) -> float:
    return float((theta + np.pi) % (2 * np.pi) - np.pi)


def _matches(m: np.ndarray, ref: np.ndarray, tol: float = 1e-10) -> bool:
    idx = np.unravel_index(np.argmax(np.abs(ref)), ref.shape)
    if abs(m[idx]) < 1e-9:
        return False
    phase = ref[idx] / m[idx]
    if abs(abs(phase) - 1.0) > 1e-9:
        return False
    return bool(np.max(np.abs(m * phase - ref)) < tol)


_PLAIN_1Q = ("H", "X", "Z", "S", "Sdg", "T", "Tdg", "SX")
_PLAIN_1Q_MATS = {k: gate_matrix(Gate(k, (0,))) for k in _PLAIN_1Q}
_ID2 = np.eye(2, dtype=complex)


def _is_identity(m: np.ndarray) -> bool:
    return _matches(m, _ID2)


def _emit_rz(theta: float, q: int, tag: str) -> list[Gate]:
    theta = _wrap(theta)
    if abs(theta) < _EPS:
        return []
    return [Gate("RZ", (q,), (theta,), tag=tag)]


def _emit_zhz(m: np.ndarray, q: int, tag: str) -> list[Gate]:
    """H/RZ vocabulary: Rz, or Rz H Rz H Rz from the x-axis Euler split."""
    if _matches(m, _PLAIN_1Q_MATS["H"]):
        return [Gate("H", (q,), tag=tag)]
    a, b, c = zyz_angles(m)
    if abs(_wrap(b)) < _EPS:
        return _emit_rz(a + c, q, tag)
    h = Gate("H", (q,), tag=tag)
    out = _emit_rz(c - np.pi / 2, q, tag) + [h] + _emit_rz(b, q, tag) + [h]
    return out + _emit_rz(a + np.pi / 2, q, tag)


def _emit_heron(m: np.ndarray, q: int, tag: str) -> list[Gate]:
    for kind in ("X", "SX"):
        if _matches(m, _PLAIN_1Q_MATS[kind]):
            return [Gate(kind, (q,), tag=tag)]
    a, b, c = zyz_angles(m)
    if abs(_wrap(b)) < _EPS:
        return _emit_rz(a + c, q, tag)
    ax, cx = a + np.pi / 2, c - np.pi / 2
    sx = Gate("SX", (q,), tag=tag)
    if abs(_wrap(b - np.pi / 2)) < _EPS:
        return _emit_rz(cx, q, tag) + [sx] + _emit_rz(ax, q, tag)
    out = _emit_rz(c, q, tag) + [sx] + _emit_rz(b + np.pi, q, tag) + [sx]
    return out + _emit_rz(a + np.pi, q, tag)


def _emit_ionq(m: np.ndarray, q: int, tag: str) -> list[Gate]:
    def tail(theta: float) -> list[Gate]:
        theta = _wrap(theta)
        if abs(theta) < _EPS:
            return []
        if abs(abs(theta) - np.pi) < _EPS:
            return [Gate("Z", (q,), tag=tag)]
        return [Gate("GPI", (q,), (0.0,), tag=tag),
                Gate("GPI", (q,), (theta / 2,), tag=tag)]

    if abs(m[0, 1]) < 1e-13 and abs(m[1, 0]) < 1e-13:
        return tail(float(np.angle(m[1, 1] / m[0, 0])))
    if abs(m[0, 0]) < 1e-13 and abs(m[1, 1]) < 1e-13:
        phi = float((np.angle(m[1, 0]) - np.angle(m[0, 1])) / 2)
        return [Gate("GPI", (q,), (phi,), tag=tag)]
    a, b, c = zyz_angles(m)
    first, second = a + np.pi, b + np.pi
    out = tail(first + second + c)
    out.append(Gate("GPI2", (q,), (_wrap(first + second),), tag=tag))
    out.append(Gate("GPI2", (q,), (_wrap(first),), tag=tag))
    return out


def _emit_1q(m: np.ndarray, q: int, tag: str, gate_set: str) -> list[Gate]:
    if _is_identity(m):
        return []
    if gate_set == "unconstrained":
        for kind, ref in _PLAIN_1Q_MATS.items():
            if _matches(m, ref):
                return [Gate(kind, (q,), tag=tag)]
        if abs(m[0, 1]) < 1e-13 and abs(m[1, 0]) < 1e-13:
            return _emit_rz(float(np.angle(m[1, 1] / m[0, 0])), q, tag)
        return [unitary1q_gate(m, q, tag)]
    if gate_set == "tket":
        a, b, c = zyz_angles(m)
        return [Gate("TK1", (q,), (a, b, c), tag=tag)]
    if gate_set in ("textbook", "star"):
        return _emit_zhz(m, q, tag)
    if gate_set == "heron":
        return _emit_heron(m, q, tag)
    if gate_set == "ionq":
        return _emit_ionq(m, q, tag)
    raise ValueError(f"unknown gate set {gate_set!r}")


def _fuse_1q(gates: list[Gate], gate_set: str) -> list[Gate]:
    out: list[Gate] = []
    pending: dict[int, tuple[np.ndarray, str]] = {}

    def flush(q: int) -> None:
        entry = pending.pop(q, None)
        if entry is not None:
            out.extend(_emit_1q(entry[0], q, entry[1], gate_set))

    for g in gates:
        if len(g.qubits) == 1:
            q = g.qubits[0]
            m, tag = pending.get(q, (_ID2, g.tag))
            pending[q] = (gate_matrix(g) @ m, tag)
        else:
            for q in g.qubits:
                flush(q)
            out.append(g)
    for q in sorted(pending):
        flush(q)
    return out


# --- peephole ----------------------------------------------------------------

_ROTATIONS = {"RX", "RY", "RZ", "Phase", "CPhase", "MS"}
_SYMMETRIC = {"CZ", "SWAP", "MS"}


def _same_wires(a: Gate, b: Gate) -> bool:
    if a.kind in _SYMMETRIC:
        return set(a.qubits) == set(b.qubits)
    return a.qubits == b.qubits


def _merge_pair(a: Gate, b: Gate, gate_set: str) -> list[Gate] | None:
    """Replacement for adjacent a then b on identical wires, or None."""
    if a.kind in _ROTATIONS and b.kind == a.kind and _same_wires(a, b):
        theta = _wrap(a.params[0] + b.params[0])
        if abs(theta) < _EPS:
            return []
        return [Gate(a.kind, a.qubits, (theta,), tag=a.tag)]
    if b.kind == a.inverse().kind and _same_wires(a, b):
        inv = a.inverse()
        if not inv.params:
            return [] if b.params == () else None
        if all(abs(_wrap(p - pb)) < _EPS
               for p, pb in zip(inv.params, b.params)):
            return []
    if a.kind == "TK1" and b.kind == "TK1" and a.qubits == b.qubits:
        m = gate_matrix(b) @ gate_matrix(a)
        return _emit_1q(m, a.qubits[0], a.tag, gate_set)
    if a.kind == "SX" and b.kind == "SX" and a.qubits == b.qubits:
        if gate_set in ("heron", "unconstrained"):
            return [Gate("X", a.qubits, tag=a.tag)]
    if a.kind == "Unitary1Q" and b.kind == "Unitary1Q" and a.qubits == b.qubits:
        m = gate_matrix(b) @ gate_matrix(a)
        return _emit_1q(m, a.qubits[0], a.tag, gate_set)
    return None


def _peephole_once(gates: list[Gate], gate_set: str) -> tuple[list[Gate], bool]:
    out: list[Gate] = []
    last_touch: dict[int, int] = {}
    changed = False
    for g in gates:
        if (g.kind in _ROTATIONS and len(g.params) == 1
                and abs(_wrap(g.params[0])) < _EPS):
            changed = True
            continue
        idxs = {last_touch.get(q, -1) for q in g.qubits}
        if len(idxs) == 1 and next(iter(idxs)) >= 0:
            i = idxs.pop()
            prev = out[i]
            if prev is not None and set(prev.qubits) == set(g.qubits):
                repl = _merge_pair(prev, g, gate_set)
                if repl is not None:
                    changed = True
                    out[i] = None
                    for q in prev.qubits:
                        del last_touch[q]
                    for r in repl:
                        out.append(r)
                        for q in r.qubits:
                            last_touch[q] = len(out) - 1
                    continue
        out.append(g)
        for q in g.qubits:
            last_touch[q] = len(out) - 1
    return [g for g in out if g is not None], changed


def _peephole(gates: list[Gate], gate_set: str) -> list[Gate]:
    for _ in range(50):
        gates, changed = _peephole_once(gates, gate_set)
        if not changed:
            return gates
    return gates


# --- driver -------------------------------------------------------------------

def rebase(circuit: Circuit, gate_set: str, elide_swaps: bool = True) -> Circuit:
    gs = gate_set.lower()
    if gs not in GATE_SETS:
        raise ValueError(f"unknown gate set {gate_set!r}")
    gates = list(circuit.gates)
    perm = circuit.output_permutation
    if gs in _RELABEL_SETS and elide_swaps:
        gates, extra = _elide_swaps(gates, circuit.width)
        perm = _compose_permutations(perm, extra, circuit.width)
    gates = _lower_multi(gates, circuit.width)
    if gs not in ("tket", "unconstrained"):
        gates = _lower_ccx(gates)
    if gs not in ("textbook", "unconstrained"):
        gates = _lower_swap(gates)
    if gs != "unconstrained":
        gates = _interleave_diagonal_runs(gates)
    gates = _canonical_2q(gates, gs)
    for _ in range(10):
        before = gates
        gates = _fuse_1q(gates, gs)
        gates = _peephole(gates, gs)
        if gates == before:
            break
    out = Circuit(circuit.width, circuit.registers)
    out.extend(gates)
    out.output_permutation = perm
    allowed = GATE_SETS[gs]
    for g in out.gates:
        if g.kind not in allowed:
            raise AssertionError(f"{g.kind} leaked into {gs} output")
    return out


# --- verification -------------------------------------------------------------

def logical_unitary(circuit: Circuit) -> np.ndarray:
    """Full unitary with any recorded output wire relabelling undone."""
    u = sim.unitary(circuit)
    perm = circuit.output_permutation
    if perm is None:
        return u
    w = circuit.width
    idx = np.empty(1 << w, dtype=np.int64)
    for logical in range(1 << w):
        phys = 0
        for q in range(w):
            bit = (logical >> (w - 1 - q)) & 1
            phys |= bit << (w - 1 - perm[q])
        idx[logical] = phys
    return u[idx, :]


def verify_equivalence(a: Circuit, b: Circuit, max_width: int = 10) -> float:
    """Max elementwise deviation after aligning global phase on the largest
    entry; raises if the width makes dense simulation unreasonable."""
    if a.width != b.width:
        raise ValueError("circuit widths differ")
    if a.width > max_width:
        raise ValueError(f"width {a.width} exceeds verification cap {max_width}")
    ua, ub = logical_unitary(a), logical_unitary(b)
    i, j = np.unravel_index(np.argmax(np.abs(ua)), ua.shape)
    if abs(ub[i, j]) < 1e-14:
        return float(np.max(np.abs(ua - ub)))
    phase = ua[i, j] / ub[i, j]
    phase /= abs(phase)
    return float(np.max(np.abs(ua - phase * ub)))


# --- reports ------------------------------------------------------------------

@dataclass
class RebaseReport:
    gate_set: str
    input_gate_count: int
    output_gate_count: int
    depth: DepthReport
    circuit: Circuit
    equivalence_checked: bool = False
    equivalence_error: float | None = None


def rebase_report(circuit: Circuit, gate_set: str, verify: bool = False,
                  elide_swaps: bool = True) -> RebaseReport:
    out = rebase(circuit, gate_set, elide_swaps=elide_swaps)
    report = RebaseReport(
        gate_set=gate_set.lower(),
        input_gate_count=len(circuit.gates),
        output_gate_count=len(out.gates),
        depth=out.depth_report(),
        circuit=out,
    )
    if verify:
        report.equivalence_checked = True
        report.equivalence_error = verify_equivalence(circuit, out)
    return report


def theoretical_counts(subroutine: str, qubits: int) -> int:
    """Closed-form reference gate counts used alongside measured ones."""
    name = subroutine.lower()
    if name == "qft":
        if qubits < 1:
            raise ValueError("qubit count must be positive")
        if qubits == 1:
            return 1
        return 4 + 4 * (qubits - 2) + (2 if qubits >= 5 else 0)
    if name == "fable":
        return 4 ** qubits
    raise ValueError(f"unknown subroutine {subroutine!r}")


# --- pipeline-level depth accounting -----------------------------------------

@dataclass
class PipelineDepthReport:
    gate_set: str
    width: int
    reps: int
    gate_count: int
    total_depth: int
    depth_by_tag: dict[str, int] = field(default_factory=dict)


def pipeline_depth(problem: DdeProblem, gate_set: str,
                   state_prep: str = "low_rank",
                   oaa_mode: str = "fixed_count",
                   oaa_reps: int | None = None,
                   fable_tolerance: float = 0.0) -> PipelineDepthReport:
    """Depth and counts of the rebased end-to-end circuit without simulating it.

    Segments are rebased independently (wire relabelling off so they still
    chain) and repetition blocks are tiled onto the schedule."""
    spec = PipelineSpec(problem=problem, state_prep=state_prep,
                        oaa_mode=oaa_mode, oaa_reps=oaa_reps,
                        fable_tolerance=fable_tolerance, reflection="fable")
    res = assemble_pipeline(spec)
    width = problem.circuit_width

    def lower(seg: list[Gate]) -> list[Gate]:
        c = Circuit(width)
        c.extend(seg)
        return rebase(c, gate_set, elide_swaps=False).gates

    seg = {name: lower(gates) for name, gates in res.segments.items()}
    order = [seg["prep"], seg["qft"], seg["fable"], seg["oaa_mark"]]
    order += [seg["oaa_rep"]] * res.reps
    order.append(seg["iqft"])

    heights: dict[int, int] = {}
    count = 0
    for block in order:
        heights = schedule_heights(block, heights)
        count += len(block)
    total = max(heights.values(), default=0)

    tag_gates: dict[str, list[Gate]] = {}
    for block in order:
        for g in block:
            tag_gates.setdefault(g.tag, []).append(g)
    depth_by_tag = {tag: schedule_depth(gs) for tag, gs in tag_gates.items()}

    return PipelineDepthReport(gate_set=gate_set.lower(), width=width,
                               reps=res.reps, gate_count=count,
                               total_depth=total, depth_by_tag=depth_by_tag)
