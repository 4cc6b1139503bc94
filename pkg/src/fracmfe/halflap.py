"""Two independent evaluators of the half-Laplacian on the line.

``pv_halflap``      principal-value singular quadrature,
                    (1/pi) PV int (u(x) - u(y)) / (x - y)^2 dy
``fourier_halflap`` discrete Fourier multiplier |xi| on a uniform grid.

They share no code path and are used to cross-validate each other and
to certify solutions of the mean-field equation in strong form.
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy.integrate import quad
from scipy.special import sici

from .grid import Field, gauss_rule

_GAUSS32 = gauss_rule(32)


class TruncationWarning(UserWarning):
    """Input to fourier_halflap has not decayed at the box boundary."""


def _gauss_int(f, a, b):
    x, w = _GAUSS32
    xm, xr = 0.5 * (a + b), 0.5 * (b - a)
    return xr * np.dot(w, f(xm + xr * x))


def _pv_field(u, x, delta_max):
    """PV evaluator for a Field (supported in [-1, 1])."""
    grid = u.grid
    k = grid.panel_of(x)
    pan = grid.panels[k]
    delta = min(delta_max, 0.5 * (pan.b - pan.a))
    ux = u.eval_local(k, x)

    # near field: symmetric second difference kills the odd u'(x) term,
    # whose principal value is exactly zero; the panel-local polynomial
    # avoids spurious kinks of the piecewise interpolant
    def near(t):
        return (2.0 * ux - u.eval_local(k, x + t) - u.eval_local(k, x - t)) \
            / t**2

    total = _gauss_int(near, 0.0, delta / 3) + _gauss_int(near, delta / 3,
                                                          delta)

    def far(y):
        return (ux - u(y)) / (x - y)**2

    for a, b in ((-1.0, x - delta), (x + delta, 1.0)):
        if b <= a:
            continue
        inner = [float(p) for p in grid.breaks if a < p < b]
        val, _ = quad(far, a, b, points=inner or None, limit=300,
                      epsabs=1e-11, epsrel=1e-11)
        total += val

    # exterior tail: u vanishes outside [-1, 1], closed form
    total += ux * (1.0 / (1.0 - x) + 1.0 / (1.0 + x))
    return total / np.pi


def _pv_callable(u, x, support, delta):
    ux = float(u(np.asarray(x)))

    def near(t):
        return (2.0 * ux - u(x + t) - u(x - t)) / t**2

    total = _gauss_int(near, 0.0, delta)

    def far(y):
        return (ux - u(np.asarray(y))) / (x - y)**2

    if support is None or np.isinf(support):
        for a, b in ((-np.inf, x - delta), (x + delta, np.inf)):
            val, _ = quad(far, a, b, limit=400, epsabs=1e-11, epsrel=1e-11)
            total += val
    else:
        S = float(support)
        for a, b in ((-S, x - delta), (x + delta, S)):
            if b <= a:
                continue
            val, _ = quad(far, a, b, limit=300, epsabs=1e-11, epsrel=1e-11)
            total += val
        total += ux * (1.0 / (S - x) + 1.0 / (S + x))
    return total / np.pi


def pv_halflap(u, x, support=None, delta=0.05, margin=0.01):
    """Half-Laplacian at x by principal-value quadrature.

    u is either a Field (supported in [-1, 1]; evaluation is restricted
    to |x| < 1 - margin where the interpolant is smooth enough) or a
    callable on the whole line.  For callables, ``support`` gives the
    radius outside which u vanishes; None integrates the tails out to
    infinity, which is appropriate for smooth decaying functions.

    The near field uses the symmetric combination
    (2u(x) - u(x+t) - u(x-t)) / t^2, so the odd first-order term (whose
    principal value vanishes identically) never enters; the exterior of
    a finite support is added in closed form.
    """
    x = float(x)
    if isinstance(u, Field):
        if abs(x) >= 1.0 - margin:
            raise ValueError(
                f"pv_halflap on a Field needs |x| <= {1.0 - margin} "
                f"(boundary regularity), got x={x}")
        return _pv_field(u, x, delta_max=0.02)
    return _pv_callable(u, x, support, delta)


# ---------------------------------------------------------------------------
# Fourier multiplier evaluator
# ---------------------------------------------------------------------------

def _log_tail_transform(xi, L, A, B, side):
    """Fourier transform (Abel-regularised) of (A + B log|y|) on one tail.

    side=+1 integrates over y > L, side=-1 over y < -L; convention
    f_hat(xi) = int f(y) exp(-i xi y) dy.
    """
    out = np.zeros_like(xi, dtype=complex)
    nz = xi != 0.0
    ax = np.abs(xi[nz])
    si, ci = sici(ax * L)
    E = -ci - 1j * (np.pi / 2 - si)          # int_{L}^{inf} e^{-i|xi| y}/y dy
    I0 = np.exp(-1j * ax * L) / (1j * ax)
    Ilog = np.log(L) * I0 + E / (1j * ax)
    val = A * I0 + B * Ilog
    val = np.where(xi[nz] > 0, val, np.conj(val))
    if side < 0:
        val = np.conj(val)
    out[nz] = val
    return out


def _fit_log_tail(vals, L, h, i_fit, sign):
    """Fit u ~ A + B log|y| at a sample index near one box edge."""
    up = (vals[i_fit - 2] - vals[i_fit + 2]
          + 8.0 * (vals[i_fit + 1] - vals[i_fit - 1])) / (12.0 * h)
    S = abs(-L + h * i_fit)
    B = sign * S * up
    A = vals[i_fit] - B * np.log(S)
    return A, B


def fourier_halflap(values, box_size, tail="zero"):
    """Half-Laplacian of uniform samples on [-L, L) via the |xi| multiplier.

    values : samples at x_j = -L + j * (2L/N), N a power of two
    box_size : L
    tail : 'zero' treats u as zero outside the box (inputs must have
        decayed there, otherwise a TruncationWarning is issued);
        'log' fits u ~ A + B log|y| at each box edge and corrects the
        spectrum with the closed-form transform of the fitted tails,
        which makes slowly (logarithmically) growing inputs usable.

    Returns samples of the result on the same grid.
    """
    vals = np.asarray(values, dtype=float)
    N = vals.shape[0]
    if N & (N - 1) != 0:
        raise ValueError(f"sample count must be a power of two, got {N}")
    L = float(box_size)
    h = 2.0 * L / N
    xi = 2.0 * np.pi * np.fft.fftfreq(N, d=h)

    G = np.fft.fft(vals) * h * np.exp(1j * xi * L)   # continuous-FT phase
    BR = BL = 0.0
    if tail == "log":
        AR, BR = _fit_log_tail(vals, L, h, N - 3, +1)
        AL, BL = _fit_log_tail(vals, L, h, 2, -1)
        G = G + _log_tail_transform(xi, L, AR, BR, +1) \
              + _log_tail_transform(xi, L, AL, BL, -1)
    elif tail == "zero":
        edge = max(abs(vals[0]), abs(vals[-1]))
        if edge > 1e-8 * np.max(np.abs(vals)):
            warnings.warn(
                "input has not decayed at the box boundary; result carries "
                "O(edge/L) truncation error", TruncationWarning, stacklevel=2)
    else:
        raise ValueError(f"unknown tail model {tail!r}")

    W = np.abs(xi) * G
    # zero mode: lim |xi| u_hat(xi); nonzero only for log-growing tails,
    # where the hat function has a -pi B / |xi| singularity
    W[0] = -(BR + BL) * np.pi / 2.0
    return np.real(np.fft.ifft(W * np.exp(-1j * xi * L) / h))


def fourier_grid(box_size, samples):
    """Sample points x_j = -L + j * (2L/N) matching fourier_halflap."""
    h = 2.0 * float(box_size) / samples
    return -float(box_size) + h * np.arange(samples)


# ---------------------------------------------------------------------------
# strong-form residual
# ---------------------------------------------------------------------------

def residual_check(u, rho, num_points=39, margin=0.05):
    """Sup over interior checkpoints of the strong-form equation residual.

    Evaluates |pv_halflap(u, x) - rho e^{u(x)} / int e^u| on a uniform
    set of checkpoints with the given margin from the endpoints.
    """
    from .grid import integrate

    total = integrate(u.grid, np.exp(u.values))
    xs = np.linspace(-1.0 + margin, 1.0 - margin, num_points)
    worst = 0.0
    for x in xs:
        lhs = pv_halflap(u, float(x), margin=margin / 2)
        rhs = rho * np.exp(u(float(x))) / total
        worst = max(worst, abs(lhs - rhs))
    return worst
