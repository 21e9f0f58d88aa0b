"""Workbench for solving periodic drift-diffusion problems on quantum circuits.

The package couples classical references (closed-form solution, explicit
stepping, spectral diagonalisation) with a six-stage circuit pipeline
(state preparation, Fourier transform, diagonal block encoding, oblivious
amplitude amplification, inverse transform, measurement), gate-set rebasing,
and an exact shot-sampled simulator behind the `qdde` command-line tool.
"""
from __future__ import annotations

from .circuit import Circuit, DepthReport, Gate, gate_matrix, schedule_depth
from .classical import (analytic_solution, analytic_solution_nd,
                        classical_diag_solve, eigen_spectrum, eigenvalues_1d,
                        error_inf, ftcs_solve, ftcs_step, initial_condition)
from .fourier import fft, fft_nd, ifft, ifft_nd
from .problem import DdeProblem, EigenSpectrum, GridField, SpectralField
from .rebase import (GATE_SETS, PipelineDepthReport, RebaseReport,
                     logical_unitary, pipeline_depth, rebase, rebase_report,
                     theoretical_counts, verify_equivalence, zyz_angles)
from .scenario import Scenario, ScenarioError, load_scenario, parse_scenario
from .sim import (EpsilonReport, MeasurementReport, epsilon_report,
                  hoeffding_shots, measure_state, postselect,
                  recover_distribution, run, sample_counts, unitary)
from .synth import (FableSpec, PipelineResult, PipelineSpec,
                    QuantumSolveResult, assemble_pipeline,
                    default_fable_tolerance, oaa_repetitions, quantum_solve,
                    success_amplitude, synth_fable, synth_iqft,
                    synth_multiplexed_rotation, synth_qft,
                    synth_stateprep_lowrank, synth_stateprep_naive,
                    synth_stateprep_sparse)

__all__ = [
    "Circuit", "DepthReport", "Gate", "gate_matrix", "schedule_depth",
    "analytic_solution", "analytic_solution_nd", "classical_diag_solve",
    "eigen_spectrum", "eigenvalues_1d", "error_inf", "ftcs_solve",
    "ftcs_step", "initial_condition",
    "fft", "fft_nd", "ifft", "ifft_nd",
    "DdeProblem", "EigenSpectrum", "GridField", "SpectralField",
    "GATE_SETS", "PipelineDepthReport", "RebaseReport", "logical_unitary",
    "pipeline_depth", "rebase", "rebase_report", "theoretical_counts",
    "verify_equivalence", "zyz_angles",
    "Scenario", "ScenarioError", "load_scenario", "parse_scenario",
    "EpsilonReport", "MeasurementReport", "epsilon_report", "hoeffding_shots",
    "measure_state", "postselect", "recover_distribution", "run",
    "sample_counts", "unitary",
    "FableSpec", "PipelineResult", "PipelineSpec", "QuantumSolveResult",
    "assemble_pipeline", "default_fable_tolerance", "oaa_repetitions",
    "quantum_solve", "success_amplitude", "synth_fable", "synth_iqft",
    "synth_multiplexed_rotation", "synth_qft", "synth_stateprep_lowrank",
    "synth_stateprep_naive", "synth_stateprep_sparse",
]
