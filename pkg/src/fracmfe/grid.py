"""Collocation grids, quadrature and interpolation on [-1, 1].

Two grid kinds are provided:

``chebyshev_lobatto``
    Cosine-spaced nodes with Clenshaw-Curtis weights and a single global
    polynomial interpolant (barycentric form).

``graded_composite``
    A composite panel grid built for functions that are smooth inside
    (-1, 1), may concentrate near the origin, and behave like
    sqrt(1 - x^2) at the endpoints.  Panels are geometrically graded
    toward 0 and toward +-1; the panels adjacent to the endpoints are
    parametrised in t = sqrt(1 -+ y), which makes sqrt-type endpoint
    behaviour analytic on the panel.  Each endpoint itself is covered by
    a thin Gauss-Radau panel so that +-1 are grid nodes with positive
    weights.

Exterior values are always zero: a Field evaluates to 0 for |x| >= 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_jacobi

CHEBYSHEV_LOBATTO = "chebyshev_lobatto"
GRADED_COMPOSITE = "graded_composite"
GRID_KINDS = (CHEBYSHEV_LOBATTO, GRADED_COMPOSITE)

GAUSS_ORDER = 8          # plain interior panels
SQRT_PANEL_ORDER = 12    # sqrt-mapped boundary panels
BOUNDARY_DEPTH = 1e-7    # width of the Radau panels hugging +-1
CENTER_DEPTH = 1e-3      # innermost center breakpoint, relative to 0.5


def gauss_rule(p):
    """p-point Gauss-Legendre rule on [-1, 1]."""
    return np.polynomial.legendre.leggauss(p)


def radau_rule(p, end):
    """p-point Gauss-Radau rule on [-1, 1] including the endpoint ``end``.

    Exact for polynomials up to degree 2p - 2; all weights positive.
    """
    xj, wj = roots_jacobi(p - 1, 0.0, 1.0)
    x = np.concatenate(([-1.0], xj))
    w = np.concatenate(([2.0 / p**2], wj / (1.0 + xj)))
    if end == +1:
        x, w = -x[::-1], w[::-1]
    return x, w


def barycentric_weights(x):
    n = len(x)
    w = np.ones(n)
    for j in range(n):
        w[j] = 1.0 / np.prod(x[j] - np.delete(x, j))
    return w


def _diff_matrix(x, bw):
    """Differentiation matrix for the interpolant on nodes x (bary weights bw)."""
    n = len(x)
    D = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                D[i, j] = (bw[j] / bw[i]) / (x[i] - x[j])
        D[i, i] = -np.sum(D[i])
    return D


class Panel:
    """One quadrature/interpolation panel [a, b] with local coordinate tau.

    kind 'lin':    y = ym + yr * tau
    kind 'sqrt+':  y = 1 - t^2 with t = tm - th * tau   (right boundary)
    kind 'sqrt-':  y = -1 + t^2 with t = tm + th * tau  (left boundary)

    The sqrt maps make functions with sqrt(1 -+ y) endpoint behaviour
    polynomial-friendly on the panel.
    """

    __slots__ = ("a", "b", "kind", "ref_x", "ref_w", "bw", "nodes",
                 "weights", "tm", "th", "_D")

    def __init__(self, a, b, kind, ref_x, ref_w):
        self.a, self.b, self.kind = a, b, kind
        self.ref_x, self.ref_w = ref_x, ref_w
        self.bw = barycentric_weights(ref_x)
        self._D = None
        if kind == "lin":
            ym, yr = 0.5 * (a + b), 0.5 * (b - a)
            self.nodes = ym + yr * ref_x
            self.weights = yr * ref_w
            self.tm = self.th = 0.0
        elif kind == "sqrt+":
            ta, tb = np.sqrt(1.0 - a), np.sqrt(1.0 - b)
            self.tm, self.th = 0.5 * (ta + tb), 0.5 * (ta - tb)
            t = self.tm - self.th * ref_x
            self.nodes = 1.0 - t * t
            self.weights = 2.0 * self.th * t * ref_w
        elif kind == "sqrt-":
            ta, tb = np.sqrt(1.0 + b), np.sqrt(1.0 + a)
            self.tm, self.th = 0.5 * (ta + tb), 0.5 * (ta - tb)
            t = self.tm + self.th * ref_x
            self.nodes = -1.0 + t * t
            self.weights = 2.0 * self.th * t * ref_w
        else:
            raise ValueError(f"unknown panel kind {kind!r}")

    def local(self, y):
        """Map physical y to the panel's local coordinate tau."""
        if self.kind == "lin":
            return (2.0 * y - self.a - self.b) / (self.b - self.a)
        if self.kind == "sqrt+":
            return (self.tm - np.sqrt(np.maximum(1.0 - y, 0.0))) / self.th
        return (np.sqrt(np.maximum(1.0 + y, 0.0)) - self.tm) / self.th

    def jacobian(self, tau):
        """dy/dtau evaluated at local coordinate tau (positive on the panel)."""
        tau = np.asarray(tau, dtype=float)
        if self.kind == "lin":
            return np.full_like(tau, 0.5 * (self.b - self.a))
        if self.kind == "sqrt+":
            return 2.0 * self.th * (self.tm - self.th * tau)
        return 2.0 * self.th * (self.tm + self.th * tau)

    @property
    def diff(self):
        if self._D is None:
            self._D = _diff_matrix(self.ref_x, self.bw)
        return self._D


@dataclass
class Grid:
    """Collocation nodes and quadrature weights for integrals over (-1, 1)."""

    nodes: np.ndarray
    weights: np.ndarray
    kind: str
    n: int
    panels: list = field(repr=False)
    breaks: np.ndarray = field(repr=False)
    offsets: np.ndarray = field(repr=False)

    def panel_of(self, x):
        """Index of the panel whose closed interval contains x."""
        k = np.searchsorted(self.breaks, x, side="right") - 1
        return int(min(max(k, 0), len(self.panels) - 1))

    def panel_values(self, values, k):
        return values[self.offsets[k]:self.offsets[k + 1]]


def _clenshaw_curtis(n):
    """Chebyshev-Lobatto nodes (increasing) and Clenshaw-Curtis weights."""
    N = n - 1
    theta = np.pi * np.arange(N + 1) / N
    x = -np.cos(theta)
    w = np.zeros(N + 1)
    ii = np.arange(1, N)
    v = np.ones(N - 1)
    if N % 2 == 0:
        w[0] = w[N] = 1.0 / (N**2 - 1)
        for k in range(1, N // 2):
            v -= 2.0 * np.cos(2.0 * k * theta[ii]) / (4.0 * k**2 - 1)
        v -= np.cos(N * theta[ii]) / (N**2 - 1)
    else:
        w[0] = w[N] = 1.0 / N**2
        for k in range(1, (N - 1) // 2 + 1):
            v -= 2.0 * np.cos(2.0 * k * theta[ii]) / (4.0 * k**2 - 1)
    w[ii] = 2.0 * v / N
    # enforce exact reflection symmetry (cosine evaluations can be off
    # by one ulp between mirrored angles)
    x = 0.5 * (x - x[::-1])
    x[0], x[-1] = -1.0, 1.0
    w = 0.5 * (w + w[::-1])
    return x, w


def _chebyshev_grid(n):
    x, w = _clenshaw_curtis(n)
    # one global panel; analytic barycentric weights, alternating with
    # halved endpoints (ordering is increasing, i.e. reversed cosine)
    pan = Panel.__new__(Panel)
    pan.a, pan.b, pan.kind = -1.0, 1.0, "lin"
    pan.ref_x, pan.ref_w = x, w
    bw = np.ones(n)
    bw[1::2] = -1.0
    bw[0] *= 0.5
    bw[-1] *= 0.5
    pan.bw = bw
    pan.nodes, pan.weights = x, w
    pan.tm = pan.th = 0.0
    pan._D = None
    return [pan]


def _graded_panels(n, depth_b, depth_c):
    n_sqrt = 2 * max(1, n // 256)
    pc = (n // 2 - SQRT_PANEL_ORDER * n_sqrt - GAUSS_ORDER) // GAUSS_ORDER
    if pc < 2:
        raise ValueError(f"n={n} too small for a graded_composite grid")
    rc = depth_c ** (1.0 / (pc - 1))
    gx, gw = gauss_rule(GAUSS_ORDER)
    sx, sw = gauss_rule(SQRT_PANEL_ORDER)

    cb = 0.5 * rc ** np.arange(pc - 1, -1, -1)   # pc breakpoints, last = 0.5
    right = [("lin", 0.0, cb[0])]
    for j in range(pc - 1):
        right.append(("lin", cb[j], cb[j + 1]))
    tgrid = np.geomspace(np.sqrt(0.5), np.sqrt(depth_b), n_sqrt + 1)
    ygrid = 1.0 - tgrid**2
    ygrid[0] = 0.5                               # share junction floats exactly
    ygrid[-1] = 1.0 - depth_b
    for k in range(n_sqrt):
        right.append(("sqrt+", ygrid[k], ygrid[k + 1]))
    right.append(("radau", 1.0 - depth_b, 1.0))

    panels = []
    for kind, a, b in reversed(right):
        if kind == "lin":
            panels.append(Panel(-b, -a, "lin", gx, gw))
        elif kind == "sqrt+":
            panels.append(Panel(-b, -a, "sqrt-", sx, sw))
        else:
            panels.append(Panel(-b, -a, "lin", *radau_rule(GAUSS_ORDER, -1)))
    for kind, a, b in right:
        if kind == "lin":
            panels.append(Panel(a, b, "lin", gx, gw))
        elif kind == "sqrt+":
            panels.append(Panel(a, b, "sqrt+", sx, sw))
        else:
            panels.append(Panel(a, b, "lin", *radau_rule(GAUSS_ORDER, +1)))
    return panels


def build_grid(n, kind=GRADED_COMPOSITE, boundary_depth=BOUNDARY_DEPTH,
               center_depth=CENTER_DEPTH):
    """Build a collocation grid with ``n`` nodes on [-1, 1].

    ``n`` must be even and at least 8 so that 0 stays interior to a
    symmetric node pairing (0 itself is never a node; evaluation there
    uses interpolation).  graded_composite additionally requires n to be
    a multiple of 16 and at least 96 to fill its panel budget.
    """
    if n < 8 or n % 2 != 0:
        raise ValueError(f"n must be even and >= 8, got {n}")
    if kind == CHEBYSHEV_LOBATTO:
        panels = _chebyshev_grid(n)
    elif kind == GRADED_COMPOSITE:
        if n % 16 != 0 or n < 96:
            raise ValueError(
                "graded_composite needs n to be a multiple of 16 and >= 96, "
                f"got {n}")
        panels = _graded_panels(n, boundary_depth, center_depth)
    else:
        raise ValueError(f"unknown grid kind {kind!r}")
    nodes = np.concatenate([p.nodes for p in panels])
    weights = np.concatenate([p.weights for p in panels])
    breaks = np.array([p.a for p in panels] + [panels[-1].b])
    offsets = np.concatenate(([0], np.cumsum([len(p.ref_x) for p in panels])))
    return Grid(nodes=nodes, weights=weights, kind=kind, n=len(nodes),
                panels=panels, breaks=breaks, offsets=offsets)


def integrate(grid, values):
    """Quadrature of nodal values: sum_i w_i f_i over (-1, 1)."""
    values = np.asarray(values, dtype=float)
    if values.shape != grid.nodes.shape:
        raise ValueError(
            f"expected {grid.nodes.shape[0]} values, got {values.shape}")
    return float(np.dot(grid.weights, values))


def log_moment(a, b, x):
    """Exact integral of log(1/|x - y|) over y in [a, b].

    Uses the antiderivative (y - x)(1 - log|y - x|), which extends
    continuously through y = x, so x inside [a, b] needs no special
    handling.
    """
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")

    def F(y):
        t = y - x
        if t == 0.0:
            return 0.0
        return t * (1.0 - np.log(abs(t)))

    return F(b) - F(a)


def _bary_eval(pan, vals, tau):
    d = tau - pan.ref_x
    hit = d == 0.0
    if np.any(hit):
        return float(vals[hit][0])
    kern = pan.bw / d
    return float(np.dot(kern, vals) / np.sum(kern))


class Field:
    """Real function sampled on a Grid, identically zero outside (-1, 1).

    Calling a Field evaluates the piecewise interpolant; exact node hits
    return the stored value bit-exactly, and |x| >= 1 returns 0.
    """

    def __init__(self, grid, values):
        values = np.asarray(values, dtype=float)
        if values.shape != grid.nodes.shape:
            raise ValueError(
                f"expected {grid.nodes.shape[0]} values, got {values.shape}")
        self.grid = grid
        self.values = values

    def _eval_one(self, x):
        if abs(x) > 1.0:
            return 0.0
        idx = np.searchsorted(self.grid.nodes, x)
        for j in (idx, idx - 1):
            if 0 <= j < self.grid.n and self.grid.nodes[j] == x:
                return float(self.values[j])
        if abs(x) == 1.0:   # endpoints are always nodes, handled above
            return 0.0
        k = self.grid.panel_of(x)
        pan = self.grid.panels[k]
        return _bary_eval(pan, self.grid.panel_values(self.values, k),
                          float(pan.local(x)))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if x.ndim == 0:
            return self._eval_one(float(x))
        return np.array([self._eval_one(float(v)) for v in x])

    def eval_local(self, k, x):
        """Evaluate panel k's polynomial at x (extends beyond the panel)."""
        pan = self.grid.panels[k]
        vals = self.grid.panel_values(self.values, k)
        x = np.asarray(x, dtype=float)
        if x.ndim == 0:
            return _bary_eval(pan, vals, float(pan.local(x)))
        return np.array([_bary_eval(pan, vals, float(pan.local(v)))
                         for v in x])

    def derivative(self, x):
        """d/dx of the interpolant at interior x."""
        x = float(x)
        if abs(x) >= 1.0:
            return 0.0
        k = self.grid.panel_of(x)
        pan = self.grid.panels[k]
        vals = self.grid.panel_values(self.values, k)
        dvals = pan.diff @ vals          # nodal derivative wrt tau
        tau = float(pan.local(x))
        return _bary_eval(pan, dvals, tau) / float(pan.jacobian(tau))


def interpolate(f, x):
    """Evaluate a Field at x; returns 0 for |x| >= 1."""
    return f(x)
