"""Classical solvers: closed-form solution, explicit stepping, spectral diagonalisation."""
from __future__ import annotations

import numpy as np

from .fourier import fft_nd, ifft_nd
from .problem import DdeProblem, EigenSpectrum, GridField


def analytic_solution(prob: DdeProblem, x: np.ndarray | float, t: float,
                      t0: float = 0.0) -> np.ndarray:
    """Closed-form density along one axis at time t for a point source history.

    p(x, t) = (4 pi D (t-t0) + 2 pi)^(-1/2)
              * exp(-(a (t-t0) + (x-x0))^2 / (4 D (t-t0) + 2))

    The drift term moves the peak from x0 to x0 - a (t-t0).
    """
    s = t - t0
    x = np.asarray(x, dtype=float)
    norm = (4.0 * np.pi * prob.D * s + 2.0 * np.pi) ** -0.5
    width = 4.0 * prob.D * s + 2.0
    return norm * np.exp(-((prob.a * s + (x - prob.x0)) ** 2) / width)


def analytic_solution_nd(prob: DdeProblem, t: float, t0: float = 0.0) -> GridField:
    """Product of the per-axis closed form over all d axes, sampled on the grid."""
    axis_profile = analytic_solution(prob, prob.axis(), t, t0)
    values = axis_profile
    for _ in range(prob.d - 1):
        values = np.multiply.outer(values, axis_profile)
    return GridField(prob, values)


def initial_condition(prob: DdeProblem) -> GridField:
    """Sampled t=0 density, renormalised so the Riemann sum integrates to one."""
    return analytic_solution_nd(prob, 0.0).normalized()


def ftcs_step(prob: DdeProblem, values: np.ndarray) -> np.ndarray:
    """One forward-time centred-space update with periodic wraparound.

    The x+dx neighbour weight is D dt/dx^2 + a dt/(2 dx); the x-dx weight
    carries the opposite drift sign.
    """
    diff = prob.D * prob.dt / prob.dx**2
    drift = prob.a * prob.dt / (2.0 * prob.dx)
    out = (1.0 - 2.0 * prob.d * diff) * values
    for axis in range(prob.d):
        out += (diff + drift) * np.roll(values, -1, axis=axis)
        out += (diff - drift) * np.roll(values, +1, axis=axis)
    return out


def ftcs_solve(prob: DdeProblem, p0: GridField | None = None) -> GridField:
    """Advance the initial density by n_t explicit steps."""
    prob.warn_if_unstable()
    field = initial_condition(prob) if p0 is None else p0
    values = field.values.copy()
    for _ in range(prob.n_t):
        values = ftcs_step(prob, values)
    return GridField(prob, values)


def eigenvalues_1d(prob: DdeProblem) -> np.ndarray:
    """One-axis update eigenvalues on frequency bins j = 0..n_x-1.

    lambda_j = 1 - (4 D dt/dx^2) sin^2(pi j / n_x)
                 + i (a dt/dx) sin(2 pi j / n_x)
    """
    j = np.arange(prob.n_x)
    damp = 4.0 * prob.D * prob.dt / prob.dx**2
    osc = prob.a * prob.dt / prob.dx
    return (1.0 - damp * np.sin(np.pi * j / prob.n_x) ** 2
            + 1j * osc * np.sin(2.0 * np.pi * j / prob.n_x))


def eigen_spectrum(prob: DdeProblem) -> EigenSpectrum:
    """Full d-dimensional spectrum: per-axis contributions add, so

    lambda_(j1..jd) = 1 - sum_k [ (4 D dt/dx^2) sin^2(pi j_k/n_x)
                                  - i (a dt/dx) sin(2 pi j_k/n_x) ]
    """
    contrib = eigenvalues_1d(prob) - 1.0
    total = np.zeros(prob.shape, dtype=complex)
    for axis in range(prob.d):
        shape = [1] * prob.d
        shape[axis] = prob.n_x
        total = total + contrib.reshape(shape)
    return EigenSpectrum(prob, 1.0 + total)


def classical_diag_solve(prob: DdeProblem, p0: GridField | None = None) -> GridField:
    """Evolve by diagonalising the periodic update in Fourier space.

    Forward transform, multiply by lambda^n_t, inverse transform; the result
    matches n_t explicit steps to round-off because the update operator is
    circulant along every axis.
    """
    prob.warn_if_unstable()
    field = initial_condition(prob) if p0 is None else p0
    lam_n = eigen_spectrum(prob).powered()
    coeffs = fft_nd(field.values) * lam_n
    return GridField(prob, ifft_nd(coeffs).real)


def error_inf(f: GridField | np.ndarray, g: GridField | np.ndarray) -> float:
    """Max-norm deviation between two fields on the same grid."""
    fv = f.values if isinstance(f, GridField) else np.asarray(f)
    gv = g.values if isinstance(g, GridField) else np.asarray(g)
    return float(np.abs(fv - gv).max())
