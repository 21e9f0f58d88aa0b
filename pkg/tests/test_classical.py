"""Classical solver oracles: stepping weights, spectra, and error levels."""
from __future__ import annotations

import numpy as np
import pytest

from qdde import (DdeProblem, GridField, analytic_solution, analytic_solution_nd,
                  classical_diag_solve, eigen_spectrum, eigenvalues_1d,
                  error_inf, ftcs_solve, ftcs_step, initial_condition)
from qdde.fourier import fft, fft_nd, ifft, ifft_nd


def test_step_weights_from_delta_probe():
    # L=20, n_x=32: diff = D dt/dx^2 = 0.015712, drift = a dt/(2 dx) = 0.009464
    prob = DdeProblem(d=1, n_x=32, L=20)
    delta = np.zeros(32)
    delta[10] = 1.0
    out = ftcs_step(prob, delta)
    assert out[10] == pytest.approx(0.968576, abs=1e-12)
    assert out[9] == pytest.approx(0.025176, abs=1e-12)
    assert out[11] == pytest.approx(0.006248, abs=1e-12)
    assert np.all(np.delete(out, (9, 10, 11)) == 0.0)


def test_step_conserves_discrete_sum():
    rng = np.random.default_rng(3)
    prob = DdeProblem(d=2, n_x=8, L=20)
    values = rng.random((8, 8))
    out = ftcs_step(prob, values)
    assert out.sum() == pytest.approx(values.sum(), rel=1e-13)


def test_eigenvalues_against_dense_step_operator():
    # oracle: eigenvalues of the circulant one-step matrix built column by column
    prob = DdeProblem(d=1, n_x=8, L=20)
    dense = np.zeros((8, 8))
    for j in range(8):
        e = np.zeros(8)
        e[j] = 1.0
        dense[:, j] = ftcs_step(prob, e)
    oracle = np.linalg.eigvals(dense)
    mine = eigenvalues_1d(prob)
    order = np.lexsort((oracle.imag, oracle.real))
    order_m = np.lexsort((mine.imag, mine.real))
    assert np.allclose(oracle[order], mine[order_m], atol=1e-12)


def test_eigenvalue_endpoints_and_stability():
    prob = DdeProblem(d=1, n_x=32, L=20)
    lam = eigenvalues_1d(prob)
    assert lam[0] == 1.0
    assert lam[16] == pytest.approx(0.937152, abs=1e-12)
    assert np.all(np.abs(lam) <= 1.0 + 1e-15)
    assert eigen_spectrum(prob).alpha == pytest.approx(1.0, abs=1e-14)


def test_spectrum_adds_per_axis_contributions():
    prob = DdeProblem(d=2, n_x=8, L=20)
    lam1 = eigenvalues_1d(prob)
    spec = eigen_spectrum(prob).values
    for j in (0, 1, 3):
        for k in (0, 2, 5):
            expected = 1.0 + (lam1[j] - 1.0) + (lam1[k] - 1.0)
            assert spec[j, k] == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("d,n_x,n_t", [(1, 8, 5), (2, 4, 7), (3, 4, 3)])
def test_diag_solve_matches_stepping(d, n_x, n_t):
    prob = DdeProblem(d=d, n_x=n_x, n_t=n_t, L=20)
    assert error_inf(classical_diag_solve(prob), ftcs_solve(prob)) < 1e-12


def test_diag_solve_matches_stepping_on_random_field():
    rng = np.random.default_rng(11)
    prob = DdeProblem(d=1, n_x=16, n_t=20, L=20)
    p0 = GridField(prob, rng.random(16) + 0.1)
    assert error_inf(classical_diag_solve(prob, p0), ftcs_solve(prob, p0)) < 1e-12


def test_solution_mass_is_conserved():
    prob = DdeProblem(d=1, n_x=64, L=20)
    init = initial_condition(prob)
    assert init.mass == pytest.approx(1.0, abs=1e-13)
    final = ftcs_solve(prob)
    assert final.mass == pytest.approx(1.0, abs=1e-12)


def test_analytic_formula_spot_values():
    # literal arithmetic for one point: t=4, x=0, defaults a=0.2366 D=0.2455 x0=2
    prob = DdeProblem(d=1, n_x=32, L=20)
    s = 4.0
    norm = (4.0 * np.pi * 0.2455 * s + 2.0 * np.pi) ** -0.5
    val = norm * np.exp(-((0.2366 * s + (0.0 - 2.0)) ** 2) / (4.0 * 0.2455 * s + 2.0))
    assert analytic_solution(prob, 0.0, 4.0) == pytest.approx(val, rel=1e-14)


def test_initial_peak_and_final_peak_levels():
    prob = DdeProblem(d=1, n_x=32, L=20)
    init = initial_condition(prob)
    assert float(init.values.max()) == pytest.approx(0.352067185126, abs=1e-10)
    final = analytic_solution_nd(prob, prob.T)
    assert float(final.values.max()) == pytest.approx(0.162253647350, abs=1e-10)


def test_drift_moves_peak_leftward():
    prob = DdeProblem(d=1, n_x=128, L=20)
    final = analytic_solution_nd(prob, prob.T)
    x_peak = prob.axis()[int(np.argmax(final.values))]
    assert abs(x_peak - (prob.x0 - prob.a * prob.T)) <= prob.dx


def test_nd_solution_is_a_product_of_axis_profiles():
    prob = DdeProblem(d=2, n_x=8, L=20)
    axis_profile = analytic_solution(prob, prob.axis(), 3.0)
    field = analytic_solution_nd(prob, 3.0).values
    assert np.allclose(field, np.outer(axis_profile, axis_profile), atol=1e-15)


def test_discretization_error_reference_level():
    prob = DdeProblem(d=1, n_x=32, L=20)
    eps_c = error_inf(classical_diag_solve(prob),
                      analytic_solution_nd(prob, prob.T))
    assert eps_c == pytest.approx(0.0113522686896, rel=1e-9)


def test_discretization_error_falls_with_resolution():
    expected = {16: 0.0587552278117, 32: 0.0286792337239,
                64: 0.00588374873289, 128: 0.00112496724671}
    measured = {}
    for n_x in (16, 32, 64, 128):
        prob = DdeProblem(d=1, n_x=n_x, L=30)
        measured[n_x] = error_inf(classical_diag_solve(prob),
                                  analytic_solution_nd(prob, prob.T))
        assert measured[n_x] == pytest.approx(expected[n_x], rel=1e-8)
    series = [measured[n] for n in (16, 32, 64, 128)]
    assert all(a > b for a, b in zip(series, series[1:]))


def test_unstable_grid_warns():
    prob = DdeProblem(d=1, n_x=256, L=20)
    assert prob.stability_ratio > 1.0
    with pytest.warns(RuntimeWarning):
        ftcs_solve(prob)


def test_fft_matches_numpy():
    rng = np.random.default_rng(5)
    x = rng.normal(size=64) + 1j * rng.normal(size=64)
    assert np.allclose(fft(x), np.fft.fft(x), atol=1e-10)
    assert np.allclose(ifft(x), np.fft.ifft(x), atol=1e-10)
    y = rng.normal(size=(8, 16))
    assert np.allclose(fft_nd(y), np.fft.fftn(y), atol=1e-10)
    assert np.allclose(ifft_nd(y), np.fft.ifftn(y), atol=1e-10)


def test_fft_roundtrip_and_length_check():
    rng = np.random.default_rng(6)
    x = rng.normal(size=32)
    assert np.allclose(ifft(fft(x)), x, atol=1e-12)
    with pytest.raises(ValueError):
        fft(np.zeros(12))
