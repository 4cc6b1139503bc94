"""Fixed-point and Newton solvers for the mean-field equation, plus
continuation of the solution branch in the parameter rho.

The equation solved is, in Green-representation form,

    u(x) = rho * int_I G_x(y) e^{u(y)} dy / int_I e^{u} dy   =: T_rho(u)(x)

discretised on a Grid through the assembled KernelMatrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .green import KernelMatrix, assemble_green_matrix
from .grid import Field, Grid, integrate

OVERFLOW_CAP = 700.0     # exp overflows past this; treated as blow-up regime

PICARD = "picard"
NEWTON = "newton"

REACHED_END = "reached_end"
NO_CONVERGENCE = "no_convergence"
U0_EXCEEDED_CAP = "u0_exceeded_cap"


@dataclass
class SolveConfig:
    max_iter: int = 2000
    tol: float = 1e-10
    damping: float = 1.0
    method: str = PICARD

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if not 0.0 < self.damping <= 1.0:
            raise ValueError("damping must lie in (0, 1]")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.method not in (PICARD, NEWTON):
            raise ValueError(f"unknown method {self.method!r}")


@dataclass
class SolveResult:
    u: Field
    rho: float
    converged: bool
    fixed_point_residual: float
    strong_residual: float
    iterations: int
    u0_value: float
    resolved: bool = True    # concentration scale resolved by the grid


@dataclass
class Branch:
    points: list = field(default_factory=list)   # (rho, SolveResult) pairs
    termination_reason: str = REACHED_END

    @property
    def rhos(self):
        return np.array([r for r, _ in self.points])

    @property
    def u0_values(self):
        return np.array([res.u0_value for _, res in self.points])


def kernel_for(grid):
    """Assembled Green matrix for a grid, cached on the grid object."""
    K = getattr(grid, "_green_kernel", None)
    if K is None:
        K = assemble_green_matrix(grid)
        grid._green_kernel = K
    return K


def apply_T(u, rho, kernel):
    """One application of the normalised Green operator.

    T_rho(u) = rho * K[e^u] / int e^u.  Raises OverflowError once u
    exceeds the exp cap, signalling the blow-up regime rather than a
    solver failure.
    """
    if rho <= 0:
        raise ValueError(f"rho must be positive, got {rho}")
    values = u.values if isinstance(u, Field) else np.asarray(u, dtype=float)
    if np.max(values) > OVERFLOW_CAP:
        raise OverflowError(
            f"max u = {np.max(values):.1f} exceeds {OVERFLOW_CAP}; "
            "blow-up regime reached")
    grid = kernel.grid
    eu = np.exp(values)
    out = rho * (kernel.entries @ eu) / np.dot(grid.weights, eu)
    return Field(grid, out)


def _center_spacing(grid):
    mid = grid.n // 2
    return float(grid.nodes[mid] - grid.nodes[mid - 1])


def _result(grid, values, rho, converged, fp_res, iters, kernel,
            with_strong):
    fld = Field(grid, values)
    resolved = True
    if converged:
        # a discrete fixed point whose concentration scale
        # r = 2 exp(-uhat(0)) falls below the node spacing at the origin
        # is a quadrature artifact: past the existence threshold the
        # exp-mass collapses onto single nodes and the discrete system
        # admits spurious solutions the continuum excludes
        alpha = np.log(integrate(grid, np.exp(values)) / rho)
        r = 2.0 * np.exp(-(fld(0.0) - alpha))
        if r < 4.0 * _center_spacing(grid):
            resolved = False
            converged = False
    strong = np.nan
    if with_strong and converged:
        from .halflap import residual_check
        strong = residual_check(fld, rho, num_points=9)
    return SolveResult(u=fld, rho=rho, converged=converged,
                       fixed_point_residual=fp_res,
                       strong_residual=strong, iterations=iters,
                       u0_value=fld(0.0), resolved=resolved)


def picard_solve(rho, u0, cfg=None, kernel=None, with_strong=False):
    """Damped fixed-point iteration u <- (1-d) u + d T_rho(u).

    Convergence is declared on the undamped residual
    ||T_rho(u) - u||_inf <= tol.  Running out of iterations returns a
    non-converged result; overflow of e^u raises OverflowError.
    """
    cfg = cfg or SolveConfig()
    grid = u0.grid
    kernel = kernel or kernel_for(grid)
    u = u0.values.copy()
    res = np.inf
    for it in range(1, cfg.max_iter + 1):
        T = apply_T(Field(grid, u), rho, kernel).values
        res = float(np.max(np.abs(T - u)))
        if res <= cfg.tol:
            return _result(grid, T, rho, True, res, it, kernel, with_strong)
        u = (1.0 - cfg.damping) * u + cfg.damping * T
    return _result(grid, u, rho, False, res, cfg.max_iter, kernel,
                   with_strong)


def tangent_map(values, rho, kernel):
    """Frechet derivative of T_rho at u, as a dense matrix.

    DT v = rho [ K(e^u v) / S - K(e^u) * int(e^u v) / S^2 ],  S = int e^u.
    Constants are annihilated: DT applied to the all-ones vector is 0.
    """
    grid = kernel.grid
    eu = np.exp(values)
    S = np.dot(grid.weights, eu)
    Keu = kernel.entries @ eu
    return rho * (kernel.entries * eu[None, :]) / S \
        - rho * np.outer(Keu, grid.weights * eu) / S**2


def newton_solve(rho, u0, cfg=None, kernel=None, with_strong=False):
    """Damped Newton iteration on F(u) = u - T_rho(u).

    Line search backtracks on ||F||_inf; a numerically singular
    Jacobian raises np.linalg.LinAlgError, which near the existence
    threshold signals an approaching fold.
    """
    cfg = cfg or SolveConfig(method=NEWTON, max_iter=60)
    grid = u0.grid
    kernel = kernel or kernel_for(grid)
    u = u0.values.copy()
    n = len(u)
    res = np.inf
    for it in range(1, cfg.max_iter + 1):
        T = apply_T(Field(grid, u), rho, kernel).values
        F = u - T
        res = float(np.max(np.abs(F)))
        if res <= cfg.tol:
            return _result(grid, u, rho, True, res, it, kernel, with_strong)
        J = np.eye(n) - tangent_map(u, rho, kernel)
        du = np.linalg.solve(J, -F)
        lam = 1.0
        for _ in range(40):
            trial = u + lam * du
            if np.max(trial) > OVERFLOW_CAP:
                lam *= 0.5
                continue
            eu = np.exp(trial)
            Ft = trial - rho * (kernel.entries @ eu) / np.dot(grid.weights, eu)
            if np.max(np.abs(Ft)) <= (1.0 - 0.25 * lam) * res:
                break
            lam *= 0.5
        else:
            return _result(grid, u, rho, False, res, it, kernel, with_strong)
        u = u + lam * du
    return _result(grid, u, rho, False, res, cfg.max_iter, kernel,
                   with_strong)


def solve(rho, u0, cfg=None, kernel=None, with_strong=False):
    """Picard for small rho, Newton beyond (contractivity degrades as the
    linearisation approaches singularity near the threshold)."""
    if cfg is not None:
        method = cfg.method
    else:
        method = PICARD if rho <= 4.0 else NEWTON
        cfg = SolveConfig(method=method,
                          max_iter=2000 if method == PICARD else 60)
    fn = picard_solve if method == PICARD else newton_solve
    return fn(rho, u0, cfg, kernel, with_strong)


def continue_branch(rho_start, rho_end, initial_step, cfg=None, grid=None,
                    kernel=None, u0_cap=50.0, min_step=1e-6,
                    with_strong=False):
    """March the solution branch from rho_start toward rho_end.

    Each accepted solution warm-starts the next solve; on failure the
    step is halved down to min_step.  Termination is encoded in the
    returned Branch rather than raised: reached_end, no_convergence, or
    u0_exceeded_cap.
    """
    if not 0.0 < rho_start < rho_end:
        raise ValueError(
            f"need 0 < rho_start < rho_end, got {rho_start}, {rho_end}")
    if grid is None:
        from .grid import build_grid
        grid = build_grid(256)
    kernel = kernel or kernel_for(grid)
    branch = Branch()
    u = Field(grid, np.zeros(grid.n))

    def attempt(rho):
        method_cfg = cfg
        if method_cfg is None:
            method_cfg = SolveConfig(method=PICARD if rho <= 4.0 else NEWTON,
                                     max_iter=2000 if rho <= 4.0 else 60)
        try:
            return solve(rho, u, method_cfg, kernel, with_strong)
        except (OverflowError, np.linalg.LinAlgError):
            return None

    res = attempt(rho_start)
    if res is None or not res.converged:
        branch.termination_reason = NO_CONVERGENCE
        return branch
    branch.points.append((rho_start, res))
    u = res.u
    rho = rho_start
    step = initial_step
    while rho < rho_end - 1e-12:
        trial = min(rho + step, rho_end)
        res = attempt(trial)
        if res is not None and res.converged:
            if res.u0_value > u0_cap:
                branch.termination_reason = U0_EXCEEDED_CAP
                return branch
            branch.points.append((trial, res))
            u, rho = res.u, trial
        else:
            step *= 0.5
            if step < min_step:
                branch.termination_reason = NO_CONVERGENCE
                return branch
    branch.termination_reason = REACHED_END
    return branch
