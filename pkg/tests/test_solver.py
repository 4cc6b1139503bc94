import numpy as np
import pytest

from fracmfe import constants
from fracmfe.diagnostics import symmetry_monotonicity
from fracmfe.grid import Field, integrate
from fracmfe.halflap import residual_check
from fracmfe.solver import (NEWTON, REACHED_END, SolveConfig, apply_T,
                            continue_branch, newton_solve, picard_solve,
                            tangent_map)


def test_apply_T_zero_field_gives_scaled_green_mass(grid256, kernel256):
    rho = 1.7
    u0 = Field(grid256, np.zeros(grid256.n))
    T = apply_T(u0, rho, kernel256)
    # T(0)(x) = (rho/2) int G_x; at x = 0 that is (rho/2) * c_G
    assert abs(T(0.0) - 0.5 * rho * constants.green_mass()) < 1e-10


def test_apply_T_linear_in_rho(grid256, kernel256):
    u0 = Field(grid256, np.zeros(grid256.n))
    t1 = apply_T(u0, 1e-8, kernel256)
    assert np.max(np.abs(t1.values)) < 1e-7          # vanishes as rho -> 0
    t2 = apply_T(u0, 2.0, kernel256)
    assert np.allclose(2.0 * apply_T(u0, 1.0, kernel256).values, t2.values,
                       atol=1e-15)


def test_apply_T_preserves_evenness(grid256, kernel256):
    u = Field(grid256, np.cos(2.0 * grid256.nodes))
    T = apply_T(u, 1.3, kernel256)
    assert np.max(np.abs(T.values - T.values[::-1])) < 1e-12


def test_apply_T_vanishes_at_boundary_and_outside(grid256, kernel256):
    u = Field(grid256, np.exp(-grid256.nodes**2))
    T = apply_T(u, 2.0, kernel256)
    assert T.values[0] == 0.0 and T.values[-1] == 0.0
    assert T(1.0) == 0.0 and T(1.7) == 0.0


def test_apply_T_overflow_signals_blowup(grid256, kernel256):
    u = Field(grid256, np.full(grid256.n, 701.0))
    with pytest.raises(OverflowError):
        apply_T(u, 1.0, kernel256)


def test_apply_T_rejects_nonpositive_rho(grid256, kernel256):
    u = Field(grid256, np.zeros(grid256.n))
    with pytest.raises(ValueError):
        apply_T(u, 0.0, kernel256)


def test_picard_at_pi(sol_pi):
    assert sol_pi.converged
    assert sol_pi.fixed_point_residual <= 1e-10
    rep = symmetry_monotonicity(sol_pi.u)
    assert rep.evenness_defect <= 1e-10
    assert rep.monotonicity_defect <= 1e-10
    assert rep.positivity_defect == 0.0
    interior = np.abs(sol_pi.u.grid.nodes) < 1.0
    assert np.all(sol_pi.u.values[interior] > 0.0)
    # u0_value is the maximum (peak at the origin)
    assert sol_pi.u0_value >= np.max(sol_pi.u.values)


def test_supercritical_rho_does_not_converge(grid256, kernel256):
    u0 = Field(grid256, np.zeros(grid256.n))
    try:
        res = picard_solve(7.0, u0, SolveConfig(max_iter=400), kernel256)
        assert not res.converged
    except OverflowError:
        pass


def test_small_rho_contraction_regime(grid256, kernel256):
    rho = 0.01
    u0 = Field(grid256, np.zeros(grid256.n))
    res = picard_solve(rho, u0, SolveConfig(), kernel256)
    assert res.converged and res.iterations <= 10
    bound = 0.5 * rho * constants.green_mass() * np.exp(2.0 * rho)
    assert np.max(res.u.values) <= bound


def test_newton_jacobian_matches_finite_differences(grid256, kernel256):
    rng = np.random.default_rng(11)
    u = 0.4 * np.exp(-2.0 * grid256.nodes**2) \
        + 0.05 * rng.standard_normal(grid256.n)
    v = rng.standard_normal(grid256.n)
    v /= np.max(np.abs(v))
    DT = tangent_map(u, 2.5, kernel256)
    h = 1e-6
    Tp = apply_T(Field(grid256, u + h * v), 2.5, kernel256).values
    Tm = apply_T(Field(grid256, u - h * v), 2.5, kernel256).values
    fd = (Tp - Tm) / (2.0 * h)
    assert np.max(np.abs(DT @ v - fd)) < 1e-6


def test_tangent_map_annihilates_constants(grid256, kernel256):
    u = 0.3 * np.cos(grid256.nodes)
    DT = tangent_map(u, 2.0, kernel256)
    # e^u / int e^u is invariant under u -> u + const, so DT @ 1 = 0
    # (up to roundoff of the two normalisation summations)
    assert np.max(np.abs(DT @ np.ones(grid256.n))) < 1e-13


def test_newton_matches_picard(grid256, kernel256, sol_pi):
    u0 = Field(grid256, np.zeros(grid256.n))
    res = newton_solve(np.pi, u0, SolveConfig(method=NEWTON, max_iter=40),
                       kernel256)
    assert res.converged
    assert np.max(np.abs(res.u.values - sol_pi.u.values)) < 1e-9


def test_normalization_identity(sol_pi):
    # with uhat = u - log(int e^u / rho), the exp-mass of uhat is rho
    u = sol_pi.u
    alpha = np.log(integrate(u.grid, np.exp(u.values)) / np.pi)
    mass = integrate(u.grid, np.exp(u.values - alpha))
    assert abs(mass - np.pi) < 1e-10


def test_fixed_point_consistency_strong_residual(sol_pi):
    # independent strong-form certificate for the converged solution
    res = residual_check(sol_pi.u, np.pi)
    assert res <= 50.0 * 1e-10 + 1e-6


def test_grid_refinement_stability(sol_pi, sol_pi_512):
    assert abs(sol_pi.u0_value - sol_pi_512.u0_value) <= 1e-6


def test_continue_small_range(grid256, kernel256):
    branch = continue_branch(0.5, 1.0, 0.1, grid=grid256, kernel=kernel256)
    assert branch.termination_reason == REACHED_END
    assert len(branch.points) == 6
    rhos = branch.rhos
    assert np.all(np.diff(rhos) > 0)
    for rho, res in branch.points:
        assert res.converged
        rep = symmetry_monotonicity(res.u)
        assert rep.evenness_defect <= 1e-10
        assert rep.monotonicity_defect <= 1e-10
        assert rep.positivity_defect == 0.0


def test_continue_rejects_bad_range(grid256, kernel256):
    with pytest.raises(ValueError):
        continue_branch(1.0, 0.5, 0.1, grid=grid256, kernel=kernel256)
    with pytest.raises(ValueError):
        continue_branch(0.0, 1.0, 0.1, grid=grid256, kernel=kernel256)


def test_solveconfig_validation():
    with pytest.raises(ValueError):
        SolveConfig(tol=0.0)
    with pytest.raises(ValueError):
        SolveConfig(damping=1.5)
    with pytest.raises(ValueError):
        SolveConfig(max_iter=0)
    with pytest.raises(ValueError):
        SolveConfig(method="bisection")
