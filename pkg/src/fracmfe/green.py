"""Green function of the half-Laplacian on (-1, 1) with exterior condition 0.

Closed form, for x, y inside the interval:

    G_x(y) = (1/pi) * ( log( sqrt((1-x^2)(1-y^2)) + 1 - x*y ) - log|x - y| )
           = -(1/pi) log|x - y| + H(x, y)

and G_x(y) = 0 for |y| >= 1.  H is the regular part.  The discretised
operator f |-> int G_x(y) f(y) dy is assembled by product quadrature:
on panels near the singularity the factor log|x - y| is integrated
exactly against the panel interpolant via closed-form moments, elsewhere
plain Gauss quadrature is spectrally accurate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import CHEBYSHEV_LOBATTO, Field, Grid, log_moment


def green(x, y):
    """Green function G_x(y); zero for |y| >= 1, +inf on the diagonal."""
    if abs(x) >= 1.0:
        raise ValueError(f"green requires |x| < 1, got x={x}")
    y = np.asarray(y, dtype=float)
    scalar = y.ndim == 0
    y = np.atleast_1d(y)
    out = np.zeros_like(y)
    inside = np.abs(y) < 1.0
    yi = y[inside]
    with np.errstate(divide="ignore"):
        vals = (np.log(np.sqrt((1.0 - x * x) * (1.0 - yi * yi)) + 1.0 - x * yi)
                - np.log(np.abs(x - yi))) / np.pi
    out[inside] = np.where(yi == x, np.inf, vals)
    return float(out[0]) if scalar else out


def _regular_part_closed(x, y):
    """H on the closed square (continuous up to |x|, |y| = 1)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    arg = np.sqrt(np.maximum((1.0 - x * x) * (1.0 - y * y), 0.0)) \
        + 1.0 - x * y
    return np.log(arg) / np.pi


def regular_part(x, y):
    """Smooth part H(x, y) of the Green function; symmetric in (x, y)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(np.abs(x) >= 1.0) or np.any(np.abs(y) >= 1.0):
        raise ValueError("regular_part requires |x| < 1 and |y| < 1")
    return _regular_part_closed(x, y)


def pohozaev_kernel(x, y):
    """x * dH/dx in closed form; integrable (1-x^2)^(-1/2) growth as |x| -> 1."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(np.abs(x) >= 1.0):
        raise ValueError("pohozaev_kernel requires |x| < 1 (unbounded at +-1)")
    if np.any(np.abs(y) >= 1.0):
        raise ValueError("pohozaev_kernel requires |y| < 1")
    sx = np.sqrt(1.0 - x * x)
    sy = np.sqrt(1.0 - y * y)
    return (x / np.pi) * (-y - x * sy / sx) / (sx * sy + 1.0 - x * y)


def pohozaev_kernel_bounded(x, y):
    """pohozaev_kernel(x, y) * sqrt(1 - x^2): bounded on the closed square."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    sx = np.sqrt(1.0 - x * x)
    sy = np.sqrt(1.0 - y * y)
    return (x / np.pi) * (-y * sx - x * sy) / (sx * sy + 1.0 - x * y)


# ---------------------------------------------------------------------------
# log-kernel moments
# ---------------------------------------------------------------------------

def monomial_log_moments(s, kmax):
    """m_k(s) = int_{-1}^{1} tau^k log|tau - s| dtau for k = 0..kmax.

    Valid for any real s; the integrand is integrable so no principal
    value is needed even for s inside the interval.
    """
    lg1 = 0.0 if s == 1.0 else np.log(abs(1.0 - s))
    lg2 = 0.0 if s == -1.0 else np.log(abs(1.0 + s))
    A0 = lg1 - lg2
    c = np.array([2.0 / (k + 1) if k % 2 == 0 else 0.0
                  for k in range(kmax + 2)])
    spow = s ** np.arange(kmax + 2)
    m = np.empty(kmax + 1)
    for k in range(kmax + 1):
        boundary = (lg1 - (-1.0) ** (k + 1) * lg2) / (k + 1)
        rational = np.dot(spow[:k + 1][::-1], c[:k + 1]) + spow[k + 1] * A0
        m[k] = boundary - rational / (k + 1)
    return m


def chebyshev_log_moments(s, kmax):
    """I_k(s) = int_{-1}^{1} T_k(tau) log|tau - s| dtau for k = 0..kmax.

    Stable three-term recurrence for the finite Hilbert transforms
    A_m(s) = PV int T_m/(tau - s); requires |s| < 1.
    """
    A = np.empty(kmax + 2)
    lg1, lg2 = np.log(abs(1.0 - s)), np.log(abs(1.0 + s))
    A[0] = lg1 - lg2
    A[1] = 2.0 + s * A[0]
    for m in range(1, kmax + 1):
        tm = 0.0 if m % 2 == 1 else 2.0 / (1.0 - m * m)
        A[m + 1] = 2.0 * tm + 2.0 * s * A[m] - A[m - 1]
    out = np.empty(kmax + 1)
    mono = monomial_log_moments(s, min(1, kmax))
    out[0] = mono[0]
    if kmax >= 1:
        out[1] = mono[1]
    for k in range(2, kmax + 1):
        out[k] = (-lg1 - (-1.0) ** k * lg2) / (k * k - 1.0) \
            - 0.5 * (A[k + 1] / (k + 1) - A[k - 1] / (k - 1))
    return out


def _moment_cutoff(p):
    # inside the cutoff use exact moments; outside, plain Gauss on the
    # log kernel is already accurate and the moment formula would start
    # losing digits to cancellation
    return 2.5 if p <= 9 else 1.9


def _log_weights_lin(pan, x):
    """Weights w so that w . f(nodes) ~ int_panel f(y) log|x-y| dy."""
    p = len(pan.ref_x)
    h2 = 0.5 * (pan.b - pan.a)
    s = (x - 0.5 * (pan.a + pan.b)) / h2
    if abs(s) > _moment_cutoff(p):
        return pan.weights * np.log(np.abs(x - pan.nodes))
    m = monomial_log_moments(s, p - 1)
    const = np.array([2.0 / (k + 1) if k % 2 == 0 else 0.0 for k in range(p)])
    V = np.vander(pan.ref_x, p, increasing=True)
    return h2 * np.linalg.solve(V.T, m + np.log(h2) * const)


def _log_weights_sqrt(pan, x):
    """Same as _log_weights_lin for a sqrt-mapped panel.

    In the t variable |x - y| factors as |t - t0| * |t + t0| with
    t0 = sqrt(1 -+ x), giving two log singularities in tau.
    """
    p = len(pan.ref_x)
    tau = pan.ref_x
    t0 = np.sqrt(1.0 - x) if pan.kind == "sqrt+" else np.sqrt(1.0 + x)
    if pan.kind == "sqrt+":
        s1 = (pan.tm - t0) / pan.th
        s2 = (pan.tm + t0) / pan.th
        jac_c0, jac_c1 = 2.0 * pan.th * pan.tm, -2.0 * pan.th * pan.th
    else:
        s1 = (t0 - pan.tm) / pan.th
        s2 = -(t0 + pan.tm) / pan.th
        jac_c0, jac_c1 = 2.0 * pan.th * pan.tm, 2.0 * pan.th * pan.th
    jac = pan.jacobian(tau)
    w = pan.ref_w * jac * (2.0 * np.log(pan.th))
    cutoff = _moment_cutoff(p)
    V = None
    for s in (s1, s2):
        if abs(s) <= cutoff:
            if V is None:
                V = np.vander(tau, p, increasing=True)
                A = np.linalg.inv(V)        # A[k, j]: coeff of tau^k in l_j
                C = np.zeros((p + 1, p))
                C[:p, :] += jac_c0 * A
                C[1:p + 1, :] += jac_c1 * A
            m = monomial_log_moments(s, p)
            w = w + m @ C
        else:
            w = w + pan.ref_w * jac * np.log(np.abs(tau - s))
    return w


def _log_weights_chebyshev(grid, x):
    """Product-quadrature weights for the log kernel on a global
    Chebyshev-Lobatto panel."""
    n = grid.n
    mom = chebyshev_log_moments(float(x), n - 1)
    # values -> Chebyshev coefficients at Lobatto points (nodes increasing,
    # i.e. x_j = -cos(j pi / N))
    N = n - 1
    j = np.arange(n)
    C = 2.0 * np.cos(np.pi * np.outer(j, N - j) / N) / N
    C[:, 0] *= 0.5
    C[:, -1] *= 0.5
    C[0, :] *= 0.5
    C[-1, :] *= 0.5
    return mom @ C


def green_log_row(grid, x):
    """Weights approximating f |-> int_{-1}^{1} f(y) log|x - y| dy."""
    if grid.kind == CHEBYSHEV_LOBATTO:
        return _log_weights_chebyshev(grid, x)
    parts = []
    for pan in grid.panels:
        if pan.kind == "lin":
            parts.append(_log_weights_lin(pan, x))
        else:
            parts.append(_log_weights_sqrt(pan, x))
    return np.concatenate(parts)


def green_row(grid, x):
    """Quadrature row approximating f |-> int_I G_x(y) f(y) dy at any |x|<1."""
    hrow = grid.weights * _regular_part_closed(x, grid.nodes)
    return hrow - green_log_row(grid, x) / np.pi


@dataclass
class KernelMatrix:
    """Discretised Green operator: (K f)(x_i) = sum_j entries[i, j] f_j."""

    grid: Grid
    entries: np.ndarray = field(repr=False)

    def apply(self, values):
        return self.entries @ np.asarray(values, dtype=float)


def assemble_green_matrix(grid):
    """Assemble the Nystrom matrix of the Green operator on ``grid``.

    Rows at x_i = +-1 are identically zero (G vanishes there by
    continuity).  Row construction is independent per row with a fixed
    summation order, so the result does not depend on evaluation order.
    """
    n = grid.n
    K = np.zeros((n, n))
    for i, x in enumerate(grid.nodes):
        if abs(x) == 1.0:
            continue
        K[i] = green_row(grid, float(x))
    return KernelMatrix(grid=grid, entries=K)


def green_apply_at(kernel_or_grid, values, x):
    """int_I G_x(y) f(y) dy for arbitrary |x| < 1 from nodal values of f."""
    grid = getattr(kernel_or_grid, "grid", kernel_or_grid)
    return float(np.dot(green_row(grid, float(x)), values))


def weak_delta_test(grid, x, phi, box_size=512.0, samples=2**17):
    """Numerical check that the Green function inverts the half-Laplacian.

    Computes int_I G_x(y) * [(-Delta)^{1/2} phi](y) dy with the Fourier
    evaluator and returns it; for smooth phi that has decayed below
    roundoff outside (-1, 1) the result approximates phi(x).

    phi may be a callable on R or a (samples, values) uniform grid pair.
    """
    from scipy.interpolate import CubicSpline

    from .halflap import fourier_halflap

    if callable(phi):
        h = 2.0 * box_size / samples
        xg = -box_size + h * np.arange(samples)
        vals = np.asarray(phi(xg), dtype=float)
    else:
        xg, vals = phi
        xg = np.asarray(xg, dtype=float)
        vals = np.asarray(vals, dtype=float)
        box_size = -xg[0]
    psi = fourier_halflap(vals, box_size)
    spline = CubicSpline(xg, psi)
    row = green_row(grid, float(x))
    return float(np.dot(row, spline(grid.nodes)))
