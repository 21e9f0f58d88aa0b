"""Command-line workbench emitting CSV/markdown reports and matching figures."""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import plots, sim
from .circuit import Circuit
from .classical import (analytic_solution_nd, classical_diag_solve,
                        eigen_spectrum, initial_condition)
from .problem import DdeProblem
from .rebase import pipeline_depth, rebase, theoretical_counts
from .scenario import Scenario, ScenarioError, load_scenario
from .synth import (PipelineSpec, assemble_pipeline, default_fable_tolerance,
                    quantum_solve, synth_fable, synth_qft,
                    synth_stateprep_lowrank, synth_stateprep_naive)

WIDTH_CAP = 26
EXIT_OK = 0
EXIT_SCENARIO = 2
EXIT_CAP = 3


class WidthCapError(RuntimeError):
    """Simulation was requested beyond the configured memory cap."""


@dataclass
class ResourceEstimate:
    logical_qubits: int
    physical_lower_bound: int
    star_depth: int
    budget_percent: float


def resource_estimate(problem: DdeProblem, star_depth: int) -> ResourceEstimate:
    w = problem.circuit_width
    return ResourceEstimate(
        logical_qubits=w,
        physical_lower_bound=5 * w,
        star_depth=star_depth,
        budget_percent=100.0 * star_depth / 300.0,
    )


# --- output helpers -----------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".12g")
    return str(value)


def _write_csv(path: str, header: list[str], rows: list[tuple]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _check_width(problem: DdeProblem) -> None:
    if problem.circuit_width > WIDTH_CAP:
        raise WidthCapError(
            f"simulation needs {problem.circuit_width} qubits, above the "
            f"{WIDTH_CAP}-qubit cap; reduce n_x or d")


def _fable_tol(sc: Scenario, problem: DdeProblem) -> float:
    if sc.fable_tolerance is not None:
        return sc.fable_tolerance
    return default_fable_tolerance(problem)


# --- subcommands --------------------------------------------------------------

def cmd_solve(sc: Scenario, no_plots: bool) -> int:
    prob = sc.problem()
    _check_width(prob)
    res = quantum_solve(prob, sc.N_shots, sc.seed,
                        state_prep=sc.state_prep_method, oaa_mode=sc.oaa_mode,
                        fable_tolerance=sc.fable_tolerance,
                        reflection=sc.reflection)
    initial = initial_condition(prob).values
    classical = classical_diag_solve(prob).values
    quantum = res.distribution.values
    err = res.errors

    coords = prob.grid()
    if prob.d == 1:
        header = ["x", "initial", "analytic", "classical", "quantum"]
        analytic = analytic_solution_nd(prob, prob.T).values
        rows = [(coords[0][i], initial[i], analytic[i], classical[i],
                 quantum[i]) for i in range(prob.n_x)]
    else:
        header = [f"x_{ax}" for ax in range(prob.d)]
        header += ["initial", "classical", "quantum"]
        rows = [tuple(c[idx] for c in coords)
                + (initial[idx], classical[idx], quantum[idx])
                for idx in np.ndindex(prob.shape)]
    summary = ["epsilon_summary", err.eps_classical, err.eps_quantum,
               err.eps_total]
    summary += [""] * (len(header) - len(summary))
    rows.append(tuple(summary))
    _write_csv(os.path.join(sc.out, "solve.csv"), header, rows)

    if not no_plots:
        if prob.d == 1:
            plots.plot_solve_1d(coords[0], initial, analytic, classical,
                                quantum, os.path.join(sc.out, "solve.png"))
        elif prob.d == 2:
            extent = (-prob.L, prob.L - prob.dx, -prob.L, prob.L - prob.dx)
            plots.plot_solve_2d(classical, quantum, extent,
                                os.path.join(sc.out, "solve.png"))
    print(f"solve: d={prob.d} n_x={prob.n_x} shots={sc.N_shots} "
          f"eps_c={_fmt(err.eps_classical)} eps_q={_fmt(err.eps_quantum)} "
          f"eps={_fmt(err.eps_total)} "
          f"branch_probability={_fmt(res.measurement.branch_probability)}")
    return EXIT_OK


def cmd_error_scan(sc: Scenario, no_plots: bool) -> int:
    rows = []
    for n_x in sc.n_x_list:
        prob = sc.problem(n_x=n_x)
        _check_width(prob)
        res = quantum_solve(prob, sc.N_shots, sc.seed,
                            state_prep=sc.state_prep_method,
                            oaa_mode=sc.oaa_mode,
                            fable_tolerance=sc.fable_tolerance,
                            reflection=sc.reflection)
        err = res.errors
        rows.append((n_x, err.eps_total, err.eps_classical, err.eps_quantum))
        print(f"error-scan: n_x={n_x} eps={_fmt(err.eps_total)} "
              f"eps_c={_fmt(err.eps_classical)} eps_q={_fmt(err.eps_quantum)}")
    rows.sort(key=lambda r: r[0])
    _write_csv(os.path.join(sc.out, "error_scan.csv"),
               ["n_x", "eps", "eps_c", "eps_q"], rows)
    if not no_plots:
        plots.plot_error_scan([r[0] for r in rows], [r[1] for r in rows],
                              [r[2] for r in rows], [r[3] for r in rows],
                              os.path.join(sc.out, "error_scan.png"))
    return EXIT_OK


def cmd_depth_scan(sc: Scenario, no_plots: bool) -> int:
    rows = []
    for sub in sc.subroutines:
        name = sub.upper()
        for q in sc.q_list:
            n_x = 1 << q
            theory = theoretical_counts(name, q)
            rows.append((name, "theoretical", q, n_x, theory, theory))
            for gs in sc.gate_sets:
                if name == "QFT":
                    circ = Circuit(q)
                    circ.extend(synth_qft(tuple(range(q))))
                else:
                    prob = sc.problem(d=1, n_x=n_x)
                    diag = eigen_spectrum(prob).powered()
                    circ, _ = synth_fable(diag, tolerance=sc.fable_tolerance
                                          or 0.0)
                out = rebase(circ, gs)
                rows.append((name, gs, q, n_x, out.depth(), len(out.gates)))
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    _write_csv(os.path.join(sc.out, "depth_scan.csv"),
               ["subroutine", "gate_set", "q", "n_x", "depth", "gate_count"],
               rows)
    if not no_plots:
        plots.plot_depth_scan(rows, os.path.join(sc.out, "depth_scan.png"))
    return EXIT_OK


_SCAN_TAGS = ("StatePrep", "QFT", "FABLE", "OAA")


def cmd_gateset_scan(sc: Scenario, no_plots: bool) -> int:
    anchor_prob = sc.problem(d=1, n_x=16)
    anchor = pipeline_depth(anchor_prob, "tket",
                            state_prep=sc.state_prep_method,
                            oaa_mode=sc.oaa_mode,
                            fable_tolerance=sc.fable_tolerance or 0.0
                            ).total_depth
    rows = []
    for dim, n_x in sc.points:
        prob = sc.problem(d=dim, n_x=n_x)
        scaling = (dim**2 * n_x ** (dim / 2.0)) / 16.0**0.5
        theory = anchor * scaling
        for gs in sc.gate_sets:
            rep = pipeline_depth(prob, gs, state_prep=sc.state_prep_method,
                                 oaa_mode=sc.oaa_mode,
                                 fable_tolerance=sc.fable_tolerance or 0.0)
            for tag in _SCAN_TAGS:
                rows.append((dim, n_x, gs, tag,
                             rep.depth_by_tag.get(tag, 0), theory))
            rows.append((dim, n_x, gs, "Total", rep.total_depth, theory))
            print(f"gateset-scan: d={dim} n_x={n_x} {gs} "
                  f"total={rep.total_depth} reps={rep.reps}")
    rows.sort(key=lambda r: (r[0], r[1], r[2], r[3]))
    _write_csv(os.path.join(sc.out, "gateset_scan.csv"),
               ["d", "n_x", "gate_set", "tag", "depth", "theoretical"], rows)
    if not no_plots:
        plots.plot_gateset_scan(rows, os.path.join(sc.out, "gateset_scan.png"))
    return EXIT_OK


def cmd_resource_table(sc: Scenario, no_plots: bool) -> int:
    del no_plots
    lines = [
        "| scenario | logical qubits | physical qubits (lower bound) "
        "| STAR depth | budget used |",
        "| --- | --- | --- | --- | --- |",
    ]
    for dim, n_x in sc.points:
        prob = sc.problem(d=dim, n_x=n_x)
        rep = pipeline_depth(prob, "star", state_prep=sc.state_prep_method,
                             oaa_mode=sc.oaa_mode,
                             fable_tolerance=sc.fable_tolerance or 0.0)
        est = resource_estimate(prob, rep.total_depth)
        lines.append(
            f"| d={dim}, n_x={n_x} | {est.logical_qubits} "
            f"| >={est.physical_lower_bound} | {est.star_depth} "
            f"| {_fmt(est.budget_percent)}% |")
    text = "\n".join(lines) + "\n"
    with open(os.path.join(sc.out, "resource_table.md"), "w",
              encoding="utf-8") as fh:
        fh.write(text)
    print(text, end="")
    return EXIT_OK


def cmd_shots_scan(sc: Scenario, no_plots: bool) -> int:
    prob = sc.problem()
    _check_width(prob)
    spec = PipelineSpec(problem=prob, state_prep=sc.state_prep_method,
                        oaa_mode=sc.oaa_mode,
                        fable_tolerance=_fable_tol(sc, prob),
                        reflection=sc.reflection)
    res = assemble_pipeline(spec)
    state = sim.run(res.circuit)
    analytic = analytic_solution_nd(prob, prob.T)
    classical = classical_diag_solve(prob)
    delta = 0.1
    rows = []
    for i, n_shots in enumerate(sc.N_list):
        meas = sim.measure_state(state, res.circuit.width, res.registers,
                                 n_shots, sc.seed + i)
        dist = sim.recover_distribution(meas.counts, prob, reference=classical)
        err = sim.epsilon_report(analytic, classical, dist)
        bound = float(np.sqrt(-np.log(delta / 2.0) / (2.0 * n_shots)))
        rows.append((n_shots, err.eps_quantum, bound))
        print(f"shots-scan: N={n_shots} eps_q={_fmt(err.eps_quantum)} "
              f"bound={_fmt(bound)}")
    rows.sort(key=lambda r: r[0])
    _write_csv(os.path.join(sc.out, "shots_scan.csv"),
               ["N", "eps_q", "bound"], rows)
    if not no_plots:
        plots.plot_shots_scan([r[0] for r in rows], [r[1] for r in rows],
                              [r[2] for r in rows],
                              os.path.join(sc.out, "shots_scan.png"))
    return EXIT_OK


def cmd_stateprep_compare(sc: Scenario, no_plots: bool) -> int:
    rows = []
    for dim in sc.d_list:
        for n_x in sc.n_x_list:
            prob = sc.problem(d=dim, n_x=n_x)
            q = prob.state_qubits
            psi = initial_condition(prob).values.reshape(-1)
            psi = psi / np.linalg.norm(psi)
            wires = tuple(range(q))
            naive = Circuit(q)
            naive.extend(synth_stateprep_naive(psi, wires))
            low = Circuit(q)
            low.extend(synth_stateprep_lowrank(
                psi, wires, block_sizes=(prob.qubits_per_axis,) * dim))
            nd = rebase(naive, "tket").depth()
            ld = rebase(low, "tket").depth()
            reduction = 100.0 * (1.0 - ld / nd) if nd else 0.0
            rows.append((dim, n_x, q, nd, ld, reduction))
            print(f"stateprep-compare: d={dim} n_x={n_x} naive={nd} "
                  f"low_rank={ld} reduction={_fmt(reduction)}%")
    rows.sort(key=lambda r: (r[0], r[1]))
    _write_csv(os.path.join(sc.out, "stateprep_compare.csv"),
               ["d", "n_x", "q", "naive_depth", "lowrank_depth",
                "reduction_percent"], rows)
    if not no_plots:
        plots.plot_stateprep_compare(rows,
                                     os.path.join(sc.out,
                                                  "stateprep_compare.png"))
    return EXIT_OK


_HANDLERS = {
    "solve": cmd_solve,
    "error-scan": cmd_error_scan,
    "depth-scan": cmd_depth_scan,
    "gateset-scan": cmd_gateset_scan,
    "resource-table": cmd_resource_table,
    "shots-scan": cmd_shots_scan,
    "stateprep-compare": cmd_stateprep_compare,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdde",
        description="Drift-diffusion quantum-solver workbench: classical "
                    "references, circuit synthesis, gate-set rebasing, and "
                    "shot-sampled simulation reports.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _HANDLERS:
        sp = sub.add_parser(name)
        sp.add_argument("--scenario", help="key=value scenario file")
        sp.add_argument("--seed", type=int, help="override scenario seed")
        sp.add_argument("--gateset",
                        help="override gate sets (comma separated)")
        sp.add_argument("--out", help="override output directory")
        sp.add_argument("--no-plots", action="store_true",
                        help="skip figure rendering")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sc = load_scenario(args.scenario) if args.scenario else Scenario()
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.gateset:
            overrides["gate_sets"] = tuple(
                g.strip().lower() for g in args.gateset.split(",") if g.strip())
        if args.out:
            overrides["out"] = args.out
        if overrides:
            sc = sc.updated(**overrides)
        sc.validate()
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_SCENARIO
    os.makedirs(sc.out, exist_ok=True)
    try:
        return _HANDLERS[args.command](sc, args.no_plots)
    except WidthCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_SCENARIO


if __name__ == "__main__":
    sys.exit(main())
