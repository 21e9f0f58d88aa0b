"""Circuit synthesis: state prep, Fourier blocks, diagonal encoding, amplification."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Gate
from .classical import analytic_solution_nd, classical_diag_solve, eigen_spectrum, error_inf, initial_condition
from .fourier import fft_nd
from .problem import DdeProblem
from . import sim


def gray_code(i: int) -> int:
    return i ^ (i >> 1)


def sfwht(a: np.ndarray) -> np.ndarray:
    """Scaled Walsh-Hadamard transform: butterfly with a half factor per stage."""
    out = np.array(a, dtype=float)
    n = out.size
    h = 1
    while h < n:
        for start in range(0, n, 2 * h):
            x = out[start:start + h].copy()
            y = out[start + h:start + 2 * h].copy()
            out[start:start + h] = (x + y) / 2.0
            out[start + h:start + 2 * h] = (x - y) / 2.0
        h *= 2
    return out


def isfwht(a: np.ndarray) -> np.ndarray:
    """Inverse of sfwht: the same butterfly without the half factor."""
    out = np.array(a, dtype=float)
    n = out.size
    h = 1
    while h < n:
        for start in range(0, n, 2 * h):
            x = out[start:start + h].copy()
            y = out[start + h:start + 2 * h].copy()
            out[start:start + h] = x + y
            out[start + h:start + 2 * h] = x - y
        h *= 2
    return out


def gray_permutation(a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    for i in range(a.size):
        out[i] = a[gray_code(i)]
    return out


def inverse_gray_permutation(a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    for i in range(a.size):
        out[gray_code(i)] = a[i]
    return out


def multiplexor_angles(angles: np.ndarray) -> np.ndarray:
    """Ladder rotation angles realising the given per-branch rotation angles."""
    return gray_permutation(sfwht(np.asarray(angles, dtype=float)))


def reconstruct_angles(ladder_angles: np.ndarray) -> np.ndarray:
    """Per-branch angles realised by (possibly truncated) ladder angles."""
    return isfwht(inverse_gray_permutation(np.asarray(ladder_angles, dtype=float)))


def synth_multiplexed_rotation(kind: str, angles: np.ndarray,
                               controls: tuple[int, ...], target: int,
                               tag: str = "Other",
                               cutoff: float | None = None) -> list[Gate]:
    """Gray-ladder uniformly controlled rotation.

    cutoff None emits every ladder step; a float drops ladder angles with
    magnitude at or below it and merges the freed CX pairs by parity.
    """
    angles = np.asarray(angles, dtype=float)
    m = angles.size
    k = len(controls)
    if m != 1 << k:
        raise ValueError("need one angle per control pattern")
    hat = multiplexor_angles(angles)
    gates: list[Gate] = []
    pending = 0
    for i in range(m):
        if cutoff is None or abs(hat[i]) > cutoff:
            b = 0
            while pending:
                if pending & 1:
                    gates.append(Gate("CX", (controls[k - 1 - b], target), tag=tag))
                pending >>= 1
                b += 1
            gates.append(Gate(kind, (target,), (float(hat[i]),), tag=tag))
        pending ^= gray_code(i) ^ gray_code((i + 1) % m)
    b = 0
    while pending:
        if pending & 1:
            gates.append(Gate("CX", (controls[k - 1 - b], target), tag=tag))
        pending >>= 1
        b += 1
    return gates


# --- state preparation ------------------------------------------------------

def synth_stateprep_naive(amplitudes: np.ndarray, qubits: tuple[int, ...],
                          tag: str = "StatePrep") -> list[Gate]:
    """Full cascade of uniformly controlled RY rotations, one level per qubit.

    Emits every ladder step regardless of angle value, so gate count and
    depth depend only on the register size.
    """
    amps = np.asarray(amplitudes, dtype=float).reshape(-1)
    q = len(qubits)
    if amps.size != 1 << q:
        raise ValueError("amplitude count must match register size")
    norm = np.linalg.norm(amps)
    if norm == 0.0:
        raise ValueError("cannot prepare the zero vector")
    if np.min(amps) < -1e-12:
        raise ValueError("amplitudes must be non-negative")
    amps = np.abs(amps) / norm
    gates: list[Gate] = []
    for k in range(q):
        blocks = amps.reshape(1 << k, 2, -1)
        r0 = np.linalg.norm(blocks[:, 0, :], axis=1)
        r1 = np.linalg.norm(blocks[:, 1, :], axis=1)
        theta = 2.0 * np.arctan2(r1, r0)
        gates.extend(synth_multiplexed_rotation(
            "RY", theta, tuple(qubits[:k]), qubits[k], tag, cutoff=None))
    return gates


def synth_stateprep_sparse(amplitudes: np.ndarray, qubits: tuple[int, ...],
                           tag: str = "StatePrep",
                           infidelity_budget: float = 1e-8) -> list[Gate]:
    """Compressed cascade for a single register.

    At each level only branches carrying weight above sqrt(budget/2) receive
    a rotation, conditioned on just the address bits that distinguish them.
    Branches below the cut hold too little amplitude for a wrong rotation to
    move the prepared state past the fidelity budget.
    """
    amps = np.asarray(amplitudes, dtype=float).reshape(-1)
    q = len(qubits)
    if amps.size != 1 << q:
        raise ValueError("amplitude count must match register size")
    norm = np.linalg.norm(amps)
    if norm == 0.0:
        raise ValueError("cannot prepare the zero vector")
    if np.min(amps) < -1e-12:
        raise ValueError("amplitudes must be non-negative")
    amps = np.abs(amps) / norm
    w_cut = np.sqrt(infidelity_budget / 2.0)
    gates: list[Gate] = []
    for k in range(q):
        blocks = amps.reshape(1 << k, 2, -1)
        r0 = np.linalg.norm(blocks[:, 0, :], axis=1)
        r1 = np.linalg.norm(blocks[:, 1, :], axis=1)
        weight = np.hypot(r0, r1)
        theta = 2.0 * np.arctan2(r1, r0)
        kept = [j for j in range(1 << k) if weight[j] > w_cut]
        if not kept:
            continue
        varying = [b for b in range(k)
                   if len({(j >> (k - 1 - b)) & 1 for j in kept}) > 1]
        if not varying:
            th = float(theta[kept[0]])
            if abs(th) > 1e-12:
                gates.append(Gate("RY", (qubits[k],), (th,), tag=tag))
            continue
        r = len(varying)
        reduced = np.zeros(1 << r)
        for j in kept:
            idx = 0
            for i, b in enumerate(varying):
                idx |= ((j >> (k - 1 - b)) & 1) << (r - 1 - i)
            reduced[idx] = theta[j]
        controls = tuple(qubits[b] for b in varying)
        gates.extend(synth_multiplexed_rotation(
            "RY", reduced, controls, qubits[k], tag, cutoff=1e-12))
    return gates


def synth_stateprep_lowrank(amplitudes: np.ndarray, qubits: tuple[int, ...],
                            block_sizes: tuple[int, ...] | None = None,
                            tag: str = "StatePrep",
                            rank_tol: float = 1e-10,
                            infidelity_budget: float = 1e-8) -> list[Gate]:
    """Product-split preparation across register blocks.

    Performs a Schmidt split at each block boundary; when every split has a
    single significant singular value the factors are prepared independently
    with the compressed single-register cascade, otherwise the whole register
    falls back to the full cascade.  The fidelity budget is shared evenly
    between the factors.
    """
    amps = np.asarray(amplitudes, dtype=float).reshape(-1)
    q = len(qubits)
    if amps.size != 1 << q:
        raise ValueError("amplitude count must match register size")
    norm = np.linalg.norm(amps)
    if norm == 0.0:
        raise ValueError("cannot prepare the zero vector")
    amps = amps / norm
    if block_sizes is None:
        block_sizes = (q,)
    if sum(block_sizes) != q:
        raise ValueError("block sizes must cover the register")
    per_block = infidelity_budget / len(block_sizes)
    gates: list[Gate] = []
    rest = amps
    offset = 0
    for h in block_sizes[:-1]:
        mat = rest.reshape(1 << h, -1)
        u, s, vt = np.linalg.svd(mat, full_matrices=False)
        if s.size > 1 and s[1] > rank_tol:
            return synth_stateprep_naive(np.abs(amps), qubits, tag)
        u0, v0 = u[:, 0], vt[0]
        if u0.sum() < 0.0:
            u0, v0 = -u0, -v0
        if min(u0.min(), v0.min()) < -1e-8:
            return synth_stateprep_naive(np.abs(amps), qubits, tag)
        u0 = np.maximum(u0, 0.0)
        v0 = np.maximum(v0, 0.0)
        gates.extend(synth_stateprep_sparse(
            u0, tuple(qubits[offset:offset + h]), tag, per_block))
        rest = v0
        offset += h
    gates.extend(synth_stateprep_sparse(
        np.abs(rest), tuple(qubits[offset:]), tag, per_block))
    return gates


# --- Fourier blocks ---------------------------------------------------------

def synth_qft(qubits: tuple[int, ...], tag: str = "QFT") -> list[Gate]:
    """Fourier block matching the forward discrete transform (negative phases)."""
    q = len(qubits)
    gates: list[Gate] = []
    for i in range(q):
        gates.append(Gate("H", (qubits[i],), tag=tag))
        for k in range(i + 1, q):
            angle = -np.pi / float(1 << (k - i))
            gates.append(Gate("CPhase", (qubits[k], qubits[i]), (angle,), tag=tag))
    for i in range(q // 2):
        gates.append(Gate("SWAP", (qubits[i], qubits[q - 1 - i]), tag=tag))
    return gates


def synth_iqft(qubits: tuple[int, ...], tag: str = "IQFT") -> list[Gate]:
    return [g.inverse().retagged(tag) for g in reversed(synth_qft(qubits))]


# --- diagonal block encoding ------------------------------------------------

@dataclass
class FableSpec:
    q: int
    diagonal: np.ndarray
    tolerance: float
    alpha: float
    subnormalization: float
    cutoff: float
    max_error: float
    ry_kept: int
    rz_kept: int


def _fable_reconstruction_error(diag: np.ndarray, subnorm: float,
                                theta_hat: np.ndarray, phi_hat: np.ndarray,
                                cutoff: float) -> float:
    th = np.where(np.abs(theta_hat) > cutoff, theta_hat, 0.0)
    ph = np.where(np.abs(phi_hat) > cutoff, phi_hat, 0.0)
    theta = reconstruct_angles(th)
    phi = reconstruct_angles(ph)
    approx = subnorm * np.cos(theta / 2.0) * np.exp(-0.5j * phi)
    return float(np.max(np.abs(approx - diag)))


def synth_fable(diagonal: np.ndarray, tolerance: float = 0.0,
                tag: str = "FABLE") -> tuple[Circuit, FableSpec]:
    """Block encoding of a diagonal operator on a copy-ladder ancilla register.

    The returned circuit acts on [flag, copy register, state register]; on the
    branch where flag and copy register both read zero it applies
    diag(d) / subnormalization to the state register.
    """
    d = np.asarray(diagonal, dtype=complex).reshape(-1)
    n = d.size
    if n < 2 or n & (n - 1):
        raise ValueError("diagonal length must be a power of two >= 2")
    q = n.bit_length() - 1
    alpha = max(1.0, float(np.max(np.abs(d))))
    subnorm = alpha * n
    theta = 2.0 * np.arccos(np.abs(d) / subnorm)
    phi = -2.0 * np.angle(d)
    theta_hat = multiplexor_angles(theta)
    phi_hat = multiplexor_angles(phi)

    cutoff = 0.0
    if tolerance > 0.0:
        cand = np.unique(np.concatenate(
            [[0.0], np.abs(theta_hat), np.abs(phi_hat)]))
        lo, hi = 0, cand.size - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            err = _fable_reconstruction_error(d, subnorm, theta_hat, phi_hat,
                                              float(cand[mid]))
            if err <= tolerance:
                lo = mid
            else:
                hi = mid - 1
        cutoff = float(cand[lo])
    max_error = _fable_reconstruction_error(d, subnorm, theta_hat, phi_hat, cutoff)

    flag = 0
    zeros = tuple(range(1, q + 1))
    state = tuple(range(q + 1, 2 * q + 1))
    circ = Circuit(2 * q + 1, {"flag": (0, 1), "zeros": (1, q), "state": (q + 1, q)})
    for i in range(q):
        circ.add("CX", state[i], zeros[i], tag=tag)
    ry = synth_multiplexed_rotation("RY", theta, zeros, flag, tag, cutoff=cutoff)
    circ.extend(ry)
    rz: list[Gate] = []
    if np.any(np.abs(phi_hat) > cutoff):
        rz = synth_multiplexed_rotation("RZ", phi, zeros, flag, tag, cutoff=cutoff)
        circ.extend(rz)
    for i in range(q):
        circ.add("CX", state[i], zeros[i], tag=tag)
    spec = FableSpec(
        q=q, diagonal=d, tolerance=tolerance, alpha=alpha,
        subnormalization=subnorm, cutoff=cutoff, max_error=max_error,
        ry_kept=sum(1 for g in ry if g.kind == "RY"),
        rz_kept=sum(1 for g in rz if g.kind == "RZ"),
    )
    return circ, spec


# --- amplitude amplification ------------------------------------------------

def oaa_repetitions(problem: DdeProblem, mode: str = "fixed_count",
                    amplitude: float | None = None) -> int:
    """Reflection pair count: closed-form dimensional scaling or the
    amplitude-derived optimum."""
    if mode == "fixed_count":
        return int(np.floor((4.0 * np.sqrt(problem.n_t)) ** (problem.d / 2.0)))
    if mode == "oracle_count":
        if amplitude is None:
            raise ValueError("oracle_count mode needs the unamplified amplitude")
        a = min(1.0, max(0.0, amplitude))
        theta = np.arcsin(a)
        if theta <= 0.0:
            return 0
        return max(0, int(np.floor(np.pi / (4.0 * theta) - 0.5)))
    raise ValueError(f"unknown repetition mode {mode!r}")


def _oaa_mark(registers: dict[str, tuple[int, int]], tag: str = "OAA") -> Gate:
    aa = registers["AA_flag"][0]
    flag = registers["flag"][0]
    z0, zq = registers["zeros"]
    ctrls = (flag,) + tuple(range(z0, z0 + zq))
    return Gate("MCX", ctrls + (aa,), polarities=(False,) * len(ctrls), tag=tag)


def _oaa_phase(registers: dict[str, tuple[int, int]], tag: str = "OAA") -> Gate:
    aa = registers["AA_flag"][0]
    flag = registers["flag"][0]
    z0, zq = registers["zeros"]
    ctrls = (flag,) + tuple(range(z0, z0 + zq))
    return Gate("MCZ", ctrls + (aa,), polarities=(False,) * len(ctrls), tag=tag)


def oaa_rep_block(fable_gates: list[Gate],
                  registers: dict[str, tuple[int, int]],
                  tag: str = "OAA") -> list[Gate]:
    """One amplification round: reflect about the marked branch, then about
    the encoding-block image of the start subspace."""
    aa = registers["AA_flag"][0]
    mark = _oaa_mark(registers, tag)
    phase = _oaa_phase(registers, tag)
    fwd = [g.retagged(tag) for g in fable_gates]
    bwd = [g.inverse().retagged(tag) for g in reversed(fable_gates)]
    return [Gate("Z", (aa,), tag=tag), mark, *bwd, mark, phase, mark, *fwd, mark]


def oaa_zero_reflection(width: int, registers: dict[str, tuple[int, int]],
                        tag: str = "OAA") -> list[Gate]:
    """Phase flip of the all-zeros basis state of the whole circuit."""
    aa = registers["AA_flag"][0]
    others = tuple(i for i in range(width) if i != aa)
    return [Gate("X", (aa,), tag=tag),
            Gate("MCZ", others + (aa,), polarities=(False,) * len(others),
                 tag=tag),
            Gate("X", (aa,), tag=tag)]


def oaa_rep_block_full(forward_gates: list[Gate], width: int,
                       registers: dict[str, tuple[int, int]],
                       tag: str = "OAA") -> list[Gate]:
    """One amplification round reflecting about the image of the entire
    forward pass, so every spectral mode is rotated by the same angle."""
    aa = registers["AA_flag"][0]
    fwd = [g.retagged(tag) for g in forward_gates]
    bwd = [g.inverse().retagged(tag) for g in reversed(forward_gates)]
    return ([Gate("Z", (aa,), tag=tag)] + bwd
            + oaa_zero_reflection(width, registers, tag) + fwd)


def synth_oaa(fable_gates: list[Gate], registers: dict[str, tuple[int, int]],
              reps: int, tag: str = "OAA") -> list[Gate]:
    gates: list[Gate] = [_oaa_mark(registers, tag)]
    block = oaa_rep_block(fable_gates, registers, tag) if reps > 0 else []
    for _ in range(reps):
        gates.extend(block)
    return gates


# --- full pipeline ----------------------------------------------------------

@dataclass
class PipelineSpec:
    problem: DdeProblem
    state_prep: str = "low_rank"
    oaa_mode: str = "fixed_count"
    oaa_reps: int | None = None
    fable_tolerance: float = 0.0
    reflection: str = "full"


@dataclass
class PipelineResult:
    circuit: Circuit
    registers: dict[str, tuple[int, int]]
    fable: FableSpec
    reps: int
    amplitude: float
    segments: dict[str, list[Gate]]


def pipeline_registers(problem: DdeProblem) -> dict[str, tuple[int, int]]:
    q = problem.state_qubits
    return {"AA_flag": (0, 1), "flag": (1, 1), "zeros": (2, q), "state": (q + 2, q)}


def success_amplitude(problem: DdeProblem, diagonal: np.ndarray,
                      subnorm: float) -> float:
    """Unamplified weight of the solution branch after the encoding step."""
    p0 = initial_condition(problem).values
    psi = p0.reshape(-1)
    psi = psi / np.linalg.norm(psi)
    n = psi.size
    psi_hat = fft_nd(psi.reshape(problem.shape).astype(complex)).reshape(-1)
    psi_hat = psi_hat / np.sqrt(n)
    return float(np.linalg.norm(diagonal * psi_hat) / subnorm)


def assemble_pipeline(spec: PipelineSpec) -> PipelineResult:
    prob = spec.problem
    qa = prob.qubits_per_axis
    q = prob.state_qubits
    registers = pipeline_registers(prob)
    state_qubits = tuple(range(q + 2, 2 * q + 2))

    p0 = initial_condition(prob).values.reshape(-1)
    psi0 = p0 / np.linalg.norm(p0)
    if spec.state_prep == "naive":
        prep = synth_stateprep_naive(psi0, state_qubits)
    elif spec.state_prep == "low_rank":
        prep = synth_stateprep_lowrank(psi0, state_qubits,
                                       block_sizes=(qa,) * prob.d)
    else:
        raise ValueError(f"unknown state prep method {spec.state_prep!r}")

    qft: list[Gate] = []
    for axis in range(prob.d):
        qft.extend(synth_qft(state_qubits[axis * qa:(axis + 1) * qa]))
    iqft: list[Gate] = []
    for axis in range(prob.d):
        iqft.extend(synth_iqft(state_qubits[axis * qa:(axis + 1) * qa]))

    lam = eigen_spectrum(prob).powered().reshape(-1)
    fable_local, fspec = synth_fable(lam, spec.fable_tolerance)
    fable = [g.remapped(1) for g in fable_local.gates]

    amplitude = success_amplitude(prob, lam, fspec.subnormalization)
    if spec.oaa_reps is not None:
        reps = int(spec.oaa_reps)
    else:
        reps = oaa_repetitions(prob, spec.oaa_mode, amplitude)

    mark = [_oaa_mark(registers)]
    if spec.reflection == "full":
        forward = prep + qft + fable + mark
        rep_block = oaa_rep_block_full(forward, prob.circuit_width, registers)
    elif spec.reflection == "fable":
        rep_block = oaa_rep_block(fable, registers)
    else:
        raise ValueError(f"unknown reflection mode {spec.reflection!r}")
    circuit = Circuit(prob.circuit_width, registers)
    circuit.extend(prep)
    circuit.extend(qft)
    circuit.extend(fable)
    circuit.extend(mark)
    for _ in range(reps):
        circuit.extend(rep_block)
    circuit.extend(iqft)
    segments = {"prep": prep, "qft": qft, "fable": fable, "oaa_mark": mark,
                "oaa_rep": rep_block, "iqft": iqft}
    return PipelineResult(circuit=circuit, registers=registers, fable=fspec,
                          reps=reps, amplitude=amplitude, segments=segments)


# --- end-to-end solve -------------------------------------------------------

@dataclass
class QuantumSolveResult:
    pipeline: PipelineResult
    measurement: sim.MeasurementReport
    distribution: object
    errors: sim.EpsilonReport


def default_fable_tolerance(problem: DdeProblem, fraction: float = 0.1) -> float:
    """Fraction of the measured grid discretisation error."""
    analytic = analytic_solution_nd(problem, problem.T)
    classical = classical_diag_solve(problem)
    return fraction * error_inf(classical, analytic)


def quantum_solve(problem: DdeProblem, n_shots: int, seed: int,
                  state_prep: str = "low_rank", oaa_mode: str = "fixed_count",
                  oaa_reps: int | None = None,
                  fable_tolerance: float | None = None,
                  measure_mode: str = "postselect",
                  reflection: str = "full") -> QuantumSolveResult:
    """Synthesize, simulate, and read out the full pipeline for one problem."""
    if fable_tolerance is None:
        fable_tolerance = default_fable_tolerance(problem)
    spec = PipelineSpec(problem, state_prep=state_prep, oaa_mode=oaa_mode,
                        oaa_reps=oaa_reps, fable_tolerance=fable_tolerance,
                        reflection=reflection)
    result = assemble_pipeline(spec)
    state = sim.run(result.circuit)
    meas = sim.measure_state(state, result.circuit.width, result.registers,
                             n_shots, seed, measure_mode)
    analytic = analytic_solution_nd(problem, problem.T)
    classical = classical_diag_solve(problem)
    dist = sim.recover_distribution(meas.counts, problem, reference=classical)
    errors = sim.epsilon_report(analytic, classical, dist)
    return QuantumSolveResult(pipeline=result, measurement=meas,
                              distribution=dist, errors=errors)
