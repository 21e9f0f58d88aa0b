"""Exact statevector simulation, shot sampling, and shot-count bounds."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Gate, gate_matrix
from .problem import DdeProblem, GridField

_DIAG_1Q = frozenset({"Z", "S", "Sdg", "T", "Tdg", "RZ", "Phase"})


def zero_state(width: int) -> np.ndarray:
    state = np.zeros(1 << width, dtype=complex)
    state[0] = 1.0
    return state


def apply_gate(state: np.ndarray, width: int, gate: Gate) -> None:
    """Apply one gate in place; qubit 0 is the most significant index bit.

    state may be (2**width,) or (2**width, batch); the batch axis rides along.
    """
    extra = state.shape[1:]
    view = state.reshape((2,) * width + extra)
    k = gate.kind

    if k in ("CX", "CCX", "MCX"):
        if k == "MCX":
            controls, pols = gate.qubits[:-1], gate.polarities
        else:
            controls, pols = gate.qubits[:-1], (True,) * (len(gate.qubits) - 1)
        target = gate.qubits[-1]
        idx: list = [slice(None)] * view.ndim
        for c, pol in zip(controls, pols):
            idx[c] = 1 if pol else 0
        sub = view[tuple(idx)]
        t_eff = target - sum(1 for c in controls if c < target)
        sub = np.moveaxis(sub, t_eff, 0)
        tmp = sub[0].copy()
        sub[0] = sub[1]
        sub[1] = tmp
        return

    if k in ("CZ", "CPhase", "MCZ"):
        idx = [slice(None)] * view.ndim
        if k == "MCZ":
            for c, pol in zip(gate.qubits[:-1], gate.polarities):
                idx[c] = 1 if pol else 0
            idx[gate.qubits[-1]] = 1
            phase = -1.0
        else:
            idx[gate.qubits[0]] = 1
            idx[gate.qubits[1]] = 1
            phase = -1.0 if k == "CZ" else np.exp(1j * gate.params[0])
        view[tuple(idx)] *= phase
        return

    if k == "SWAP":
        a, b = gate.qubits
        idx01: list = [slice(None)] * view.ndim
        idx10: list = [slice(None)] * view.ndim
        idx01[a], idx01[b] = 0, 1
        idx10[a], idx10[b] = 1, 0
        s01 = view[tuple(idx01)]
        s10 = view[tuple(idx10)]
        tmp = s01.copy()
        s01[...] = s10
        s10[...] = tmp
        return

    if k in _DIAG_1Q:
        m = gate_matrix(gate)
        sub = np.moveaxis(view, gate.qubits[0], 0)
        if m[0, 0] != 1.0:
            sub[0] *= m[0, 0]
        sub[1] *= m[1, 1]
        return

    if k == "X":
        sub = np.moveaxis(view, gate.qubits[0], 0)
        tmp = sub[0].copy()
        sub[0] = sub[1]
        sub[1] = tmp
        return

    if k == "MS":
        m = gate_matrix(gate)
        a, b = gate.qubits
        sub = np.moveaxis(view, (a, b), (0, 1))
        blocks = [sub[0, 0].copy(), sub[0, 1].copy(), sub[1, 0].copy(), sub[1, 1].copy()]
        for i in range(4):
            sub[i >> 1, i & 1] = (m[i, 0] * blocks[0] + m[i, 1] * blocks[1]
                                  + m[i, 2] * blocks[2] + m[i, 3] * blocks[3])
        return

    # generic dense single-qubit gate
    m = gate_matrix(gate)
    sub = np.moveaxis(view, gate.qubits[0], 0)
    top = sub[0].copy()
    sub[0] = m[0, 0] * top + m[0, 1] * sub[1]
    sub[1] = m[1, 0] * top + m[1, 1] * sub[1]


def run(circuit: Circuit, initial: np.ndarray | None = None) -> np.ndarray:
    """Final statevector (or batch of columns) after the whole gate list."""
    if initial is None:
        state = zero_state(circuit.width)
    else:
        state = np.array(initial, dtype=complex)
        if state.shape[0] != 1 << circuit.width:
            raise ValueError("initial state length does not match circuit width")
    for g in circuit.gates:
        apply_gate(state, circuit.width, g)
    return state


def unitary(circuit: Circuit) -> np.ndarray:
    """Dense unitary of the circuit, built by running all basis columns at once."""
    n = 1 << circuit.width
    return run(circuit, np.eye(n, dtype=complex))


def postselect(state: np.ndarray, width: int,
               pattern: dict[int, int]) -> tuple[np.ndarray, float]:
    """Collapse the listed qubits to fixed bits.

    Returns the normalised state on the remaining qubits and the branch
    probability; a zero-probability branch comes back as a zero vector.
    """
    view = state.reshape((2,) * width)
    idx: list = [slice(None)] * width
    for q, bit in pattern.items():
        idx[q] = int(bit)
    sub = np.array(view[tuple(idx)], dtype=complex).reshape(-1)
    prob = float(np.sum(np.abs(sub) ** 2))
    if prob > 0.0:
        sub = sub / np.sqrt(prob)
    return sub, prob


def sample_counts(probabilities: np.ndarray, n_shots: int,
                  seed: int | np.random.Generator) -> np.ndarray:
    """Multinomial shot counts over the given outcome distribution."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    p = np.clip(np.asarray(probabilities, dtype=float), 0.0, None)
    total = p.sum()
    if total <= 0.0:
        raise ValueError("cannot sample from an all-zero distribution")
    return rng.multinomial(int(n_shots), p / total)


@dataclass
class MeasurementReport:
    mode: str
    n_shots: int
    usable_shots: int
    branch_probability: float
    success_fraction: float
    counts: np.ndarray


def good_pattern(registers: dict[str, tuple[int, int]]) -> dict[int, int]:
    """Measurement pattern selecting the amplified solution branch."""
    pattern: dict[int, int] = {}
    start, size = registers["AA_flag"]
    pattern[start] = 1
    for name in ("flag", "zeros"):
        start, size = registers[name]
        for q in range(start, start + size):
            pattern[q] = 0
    return pattern


def measure_state(state: np.ndarray, width: int,
                  registers: dict[str, tuple[int, int]], n_shots: int,
                  seed: int | np.random.Generator,
                  mode: str = "postselect") -> MeasurementReport:
    """Sample the solution register from the final pipeline state.

    postselect mode draws every shot from the conditioned branch; raw mode
    draws from the full register and discards shots outside the branch.
    """
    pattern = good_pattern(registers)
    sub, prob = postselect(state, width, pattern)
    if mode == "postselect":
        counts = sample_counts(np.abs(sub) ** 2, n_shots, seed)
        return MeasurementReport("postselect", n_shots, n_shots, prob, 1.0, counts)
    if mode != "raw":
        raise ValueError(f"unknown measurement mode {mode!r}")
    full = sample_counts(np.abs(state) ** 2, n_shots, seed)
    idx = np.arange(full.size)
    keep = np.ones(full.size, dtype=bool)
    for q, bit in pattern.items():
        keep &= ((idx >> (width - 1 - q)) & 1) == bit
    start, size = registers["state"]
    shift = width - (start + size)
    s_vals = (idx[keep] >> shift) & ((1 << size) - 1)
    counts = np.zeros(1 << size, dtype=full.dtype)
    np.add.at(counts, s_vals, full[keep])
    usable = int(counts.sum())
    frac = usable / n_shots if n_shots > 0 else 0.0
    return MeasurementReport("raw", n_shots, usable, prob, frac, counts)


def recover_distribution(counts: np.ndarray, problem: DdeProblem,
                         reference: GridField | None = None) -> GridField:
    """Field on the grid from shot counts: sqrt of shot frequencies, rescaled.

    The sampled frequencies estimate the squared amplitudes of the encoded
    field divided by its l2 norm, so with a reference field the magnitudes are
    rescaled by the reference's l2 norm and reuse its signs (shot counts alone
    cannot determine them).  Without a reference the values are normalised to
    unit Riemann mass instead.
    """
    amps = np.sqrt(np.asarray(counts, dtype=float))
    values = amps.reshape(problem.shape)
    if reference is not None:
        norm = float(np.sqrt((values ** 2).sum()))
        if norm > 0.0:
            values = values * (float(np.linalg.norm(reference.values)) / norm)
        values = np.where(reference.values < 0.0, -values, values)
        return GridField(problem, values)
    total = values.sum() * problem.cell_volume
    if total > 0.0:
        values = values / total
    return GridField(problem, values)


def hoeffding_shots(delta: float, eps: float) -> int:
    """Shots guaranteeing max deviation <= eps with confidence 1 - delta."""
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    if delta <= 0.0:
        raise ValueError("delta must be positive")
    bound = -np.log(delta / 2.0) / (2.0 * eps * eps)
    return max(0, int(np.ceil(bound)))


@dataclass
class EpsilonReport:
    eps_classical: float
    eps_quantum: float
    eps_total: float


def epsilon_report(analytic: GridField, classical: GridField,
                   quantum: GridField) -> EpsilonReport:
    """Classical discretisation error, quantum readout error, and their sum."""
    eps_c = float(np.max(np.abs(classical.values - analytic.values)))
    eps_q = float(np.max(np.abs(quantum.values - classical.values)))
    return EpsilonReport(eps_c, eps_q, eps_c + eps_q)
