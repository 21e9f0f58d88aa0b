"""Gate-level circuit intermediate representation with tags, depth, and text serialisation."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

TAGS = ("StatePrep", "QFT", "FABLE", "OAA", "IQFT", "Other")

# kind -> (qubit arity, parameter count); arity None means variable (>= 2)
GATE_DEFS: dict[str, tuple[int | None, int]] = {
    "H": (1, 0), "X": (1, 0), "Z": (1, 0),
    "S": (1, 0), "Sdg": (1, 0), "T": (1, 0), "Tdg": (1, 0), "SX": (1, 0),
    "RX": (1, 1), "RY": (1, 1), "RZ": (1, 1), "Phase": (1, 1),
    "GPI": (1, 1), "GPI2": (1, 1),
    "TK1": (1, 3),
    "Unitary1Q": (1, 8),
    "CX": (2, 0), "CZ": (2, 0), "SWAP": (2, 0),
    "CPhase": (2, 1), "MS": (2, 1),
    "CCX": (3, 0),
    "MCX": (None, 0), "MCZ": (None, 0),
}

_CONTROLLED_KINDS = ("MCX", "MCZ")
_SELF_INVERSE = frozenset({"H", "X", "Z", "CX", "CZ", "SWAP", "CCX", "MCX", "MCZ"})
_NEGATE_PARAM = frozenset({"RX", "RY", "RZ", "Phase", "CPhase", "MS"})


@dataclass(frozen=True, slots=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    polarities: tuple[bool, ...] | None = None
    tag: str = "Other"

    def __post_init__(self) -> None:
        if self.kind not in GATE_DEFS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        arity, n_params = GATE_DEFS[self.kind]
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if arity is not None and len(self.qubits) != arity:
            raise ValueError(f"{self.kind} expects {arity} qubits, got {len(self.qubits)}")
        if arity is None and len(self.qubits) < 2:
            raise ValueError(f"{self.kind} expects at least 2 qubits")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.kind} operands must be distinct: {self.qubits}")
        if len(self.params) != n_params:
            raise ValueError(f"{self.kind} expects {n_params} params, got {len(self.params)}")
        if self.kind in _CONTROLLED_KINDS:
            pol = self.polarities
            if pol is None:
                pol = (True,) * (len(self.qubits) - 1)
            pol = tuple(bool(b) for b in pol)
            if len(pol) != len(self.qubits) - 1:
                raise ValueError(
                    f"{self.kind} on {len(self.qubits)} qubits expects "
                    f"{len(self.qubits) - 1} control polarities, got {len(pol)}"
                )
            object.__setattr__(self, "polarities", pol)
        elif self.polarities is not None:
            raise ValueError(f"{self.kind} does not take control polarities")
        if self.tag not in TAGS:
            raise ValueError(f"unknown tag {self.tag!r}")

    @property
    def controls(self) -> tuple[int, ...]:
        return self.qubits[:-1] if self.kind in _CONTROLLED_KINDS else ()

    @property
    def target(self) -> int:
        return self.qubits[-1]

    def inverse(self) -> "Gate":
        if self.kind in _SELF_INVERSE:
            return self
        if self.kind in _NEGATE_PARAM:
            return Gate(self.kind, self.qubits, (-self.params[0],), tag=self.tag)
        if self.kind == "S":
            return Gate("Sdg", self.qubits, tag=self.tag)
        if self.kind == "Sdg":
            return Gate("S", self.qubits, tag=self.tag)
        if self.kind == "T":
            return Gate("Tdg", self.qubits, tag=self.tag)
        if self.kind == "Tdg":
            return Gate("T", self.qubits, tag=self.tag)
        if self.kind == "TK1":
            a, b, c = self.params
            return Gate("TK1", self.qubits, (-c, -b, -a), tag=self.tag)
        if self.kind == "GPI":
            return self
        if self.kind == "GPI2":
            return Gate("GPI2", self.qubits, (self.params[0] + np.pi,), tag=self.tag)
        if self.kind == "SX":
            return unitary1q_gate(gate_matrix(self).conj().T, self.qubits[0], self.tag)
        if self.kind == "Unitary1Q":
            return unitary1q_gate(gate_matrix(self).conj().T, self.qubits[0], self.tag)
        raise ValueError(f"no inverse rule for {self.kind}")  # pragma: no cover

    def retagged(self, tag: str) -> "Gate":
        return Gate(self.kind, self.qubits, self.params, self.polarities, tag)

    def remapped(self, offset: int) -> "Gate":
        return Gate(self.kind, tuple(q + offset for q in self.qubits),
                    self.params, self.polarities, self.tag)


_SQ = 1.0 / np.sqrt(2.0)
_FIXED_1Q = {
    "H": np.array([[_SQ, _SQ], [_SQ, -_SQ]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "Sdg": np.array([[1, 0], [0, -1j]], dtype=complex),
    "T": np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex),
    "Tdg": np.array([[1, 0], [0, np.exp(-1j * np.pi / 4)]], dtype=complex),
    "SX": 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex),
}


def _rx(t: float) -> np.ndarray:
    c, s = np.cos(t / 2), np.sin(t / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _ry(t: float) -> np.ndarray:
    c, s = np.cos(t / 2), np.sin(t / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz(t: float) -> np.ndarray:
    return np.array([[np.exp(-1j * t / 2), 0], [0, np.exp(1j * t / 2)]], dtype=complex)


def gate_matrix(g: Gate) -> np.ndarray:
    """Unitary of a fixed-arity gate; first listed qubit is the most significant bit."""
    k = g.kind
    if k in _FIXED_1Q:
        return _FIXED_1Q[k]
    if k == "RX":
        return _rx(g.params[0])
    if k == "RY":
        return _ry(g.params[0])
    if k == "RZ":
        return _rz(g.params[0])
    if k == "Phase":
        return np.array([[1, 0], [0, np.exp(1j * g.params[0])]], dtype=complex)
    if k == "GPI":
        t = g.params[0]
        return np.array([[0, np.exp(-1j * t)], [np.exp(1j * t), 0]], dtype=complex)
    if k == "GPI2":
        t = g.params[0]
        return _SQ * np.array([[1, -1j * np.exp(-1j * t)],
                               [-1j * np.exp(1j * t), 1]], dtype=complex)
    if k == "TK1":
        a, b, c = g.params
        return _rz(a) @ _ry(b) @ _rz(c)
    if k == "Unitary1Q":
        p = g.params
        return np.array([[p[0] + 1j * p[1], p[2] + 1j * p[3]],
                         [p[4] + 1j * p[5], p[6] + 1j * p[7]]], dtype=complex)
    if k == "CX":
        return np.array([[1, 0, 0, 0], [0, 1, 0, 0],
                         [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    if k == "CZ":
        return np.diag([1, 1, 1, -1]).astype(complex)
    if k == "SWAP":
        return np.array([[1, 0, 0, 0], [0, 0, 1, 0],
                         [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
    if k == "CPhase":
        return np.diag([1, 1, 1, np.exp(1j * g.params[0])]).astype(complex)
    if k == "MS":
        # exp(-i t/2 XX): entangling Molmer-Sorensen rotation
        t = g.params[0]
        c, s = np.cos(t / 2), -1j * np.sin(t / 2)
        return np.array([[c, 0, 0, s], [0, c, s, 0],
                         [0, s, c, 0], [s, 0, 0, c]], dtype=complex)
    if k == "CCX":
        m = np.eye(8, dtype=complex)
        m[[6, 7], :] = m[[7, 6], :]
        return m
    raise ValueError(f"no dense matrix for variable-arity kind {k}")


def unitary1q_gate(matrix: np.ndarray, qubit: int, tag: str = "Other") -> Gate:
    """Wrap a 2x2 unitary as a gate literal."""
    m = np.asarray(matrix, dtype=complex)
    params = []
    for entry in m.reshape(-1):
        params.extend((float(entry.real), float(entry.imag)))
    return Gate("Unitary1Q", (qubit,), tuple(params), tag=tag)


class Circuit:
    """Ordered gate list on a fixed-width qubit line-up with named registers."""

    def __init__(self, width: int,
                 registers: dict[str, tuple[int, int]] | None = None) -> None:
        if width < 1:
            raise ValueError("circuit width must be >= 1")
        self.width = width
        self.registers: dict[str, tuple[int, int]] = dict(registers or {})
        for name, (start, size) in self.registers.items():
            if start < 0 or size < 1 or start + size > width:
                raise ValueError(f"register {name!r} out of range for width {width}")
        self.gates: list[Gate] = []
        # wire holding each logical qubit at the end (None means identity)
        self.output_permutation: tuple[int, ...] | None = None

    def append(self, gate: Gate) -> "Circuit":
        if max(gate.qubits) >= self.width:
            raise ValueError(
                f"gate {gate.kind} on {gate.qubits} exceeds width {self.width}")
        self.gates.append(gate)
        return self

    def extend(self, gates: Iterable[Gate]) -> "Circuit":
        for g in gates:
            self.append(g)
        return self

    def add(self, kind: str, *qubits: int, params: tuple[float, ...] = (),
            polarities: tuple[bool, ...] | None = None, tag: str = "Other") -> "Circuit":
        return self.append(Gate(kind, qubits, params, polarities, tag))

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def copy(self) -> "Circuit":
        c = Circuit(self.width, self.registers)
        c.gates = list(self.gates)
        c.output_permutation = self.output_permutation
        return c

    def compose(self, other: "Circuit") -> "Circuit":
        if other.width != self.width:
            raise ValueError("cannot compose circuits of different widths")
        c = self.copy()
        c.gates.extend(other.gates)
        return c

    def inverse(self) -> "Circuit":
        c = Circuit(self.width, self.registers)
        for g in reversed(self.gates):
            c.append(g.inverse())
        return c

    def retagged(self, tag: str) -> "Circuit":
        c = Circuit(self.width, self.registers)
        c.gates = [g.retagged(tag) for g in self.gates]
        return c

    def embedded(self, width: int, offset: int,
                 registers: dict[str, tuple[int, int]] | None = None) -> "Circuit":
        """Copy onto a wider line-up with all qubit indices shifted."""
        c = Circuit(width, registers)
        for g in self.gates:
            c.append(g.remapped(offset))
        return c

    def count_by_kind(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for g in self.gates:
            counts[g.kind] = counts.get(g.kind, 0) + 1
        return counts

    def depth(self) -> int:
        return schedule_depth(self.gates)

    def depth_report(self) -> "DepthReport":
        by_tag: dict[str, int] = {}
        for tag in TAGS:
            tagged = [g for g in self.gates if g.tag == tag]
            if tagged:
                by_tag[tag] = schedule_depth(tagged)
        return DepthReport(
            width=self.width,
            gate_count=len(self.gates),
            total_depth=self.depth(),
            depth_by_tag=by_tag,
            count_by_kind=self.count_by_kind(),
        )

    # --- text serialisation -------------------------------------------------

    def serialize(self) -> str:
        lines = [f"qubits {self.width}"]
        for name, (start, size) in self.registers.items():
            lines.append(f"reg {name} {start} {size}")
        if self.output_permutation is not None:
            lines.append("perm " + ",".join(str(q) for q in self.output_permutation))
        for g in self.gates:
            qs = ",".join(str(q) for q in g.qubits)
            ps = ",".join(repr(p) for p in g.params) if g.params else "-"
            pol = ("".join("c" if b else "o" for b in g.polarities)
                   if g.polarities is not None else "-")
            lines.append(f"{g.kind} {qs} {ps} {pol} {g.tag}")
        return "\n".join(lines) + "\n"

    @classmethod
    def deserialize(cls, text: str) -> "Circuit":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("qubits "):
            raise ValueError("serialised circuit must start with a qubits line")
        width = int(lines[0].split()[1])
        registers: dict[str, tuple[int, int]] = {}
        gates: list[Gate] = []
        permutation: tuple[int, ...] | None = None
        for ln in lines[1:]:
            parts = ln.split()
            if parts[0] == "reg":
                registers[parts[1]] = (int(parts[2]), int(parts[3]))
                continue
            if parts[0] == "perm":
                permutation = tuple(int(q) for q in parts[1].split(","))
                continue
            kind, qs, ps, pol, tag = parts
            qubits = tuple(int(q) for q in qs.split(","))
            params = tuple(float(p) for p in ps.split(",")) if ps != "-" else ()
            polarities = tuple(ch == "c" for ch in pol) if pol != "-" else None
            gates.append(Gate(kind, qubits, params, polarities, tag))
        c = cls(width, registers)
        c.extend(gates)
        c.output_permutation = permutation
        return c


def schedule_depth(gates: Iterable[Gate]) -> int:
    """As-soon-as-possible layer count; every gate occupies one layer."""
    frontier: dict[int, int] = {}
    depth = 0
    for g in gates:
        layer = 1 + max((frontier.get(q, 0) for q in g.qubits), default=0)
        for q in g.qubits:
            frontier[q] = layer
        if layer > depth:
            depth = layer
    return depth


def schedule_heights(gates: Iterable[Gate], heights: dict[int, int] | None = None
                     ) -> dict[int, int]:
    """Per-qubit frontier after scheduling gates on top of given start heights."""
    frontier = dict(heights or {})
    for g in gates:
        layer = 1 + max((frontier.get(q, 0) for q in g.qubits), default=0)
        for q in g.qubits:
            frontier[q] = layer
    return frontier


@dataclass
class DepthReport:
    width: int
    gate_count: int
    total_depth: int
    depth_by_tag: dict[str, int] = field(default_factory=dict)
    count_by_kind: dict[str, int] = field(default_factory=dict)
