import numpy as np
import pytest
from scipy.integrate import quad

from fracmfe.grid import (CHEBYSHEV_LOBATTO, GRADED_COMPOSITE, Field,
                          build_grid, integrate, interpolate, log_moment)


@pytest.mark.parametrize("n,kind", [(8, CHEBYSHEV_LOBATTO),
                                    (32, CHEBYSHEV_LOBATTO),
                                    (96, GRADED_COMPOSITE),
                                    (256, GRADED_COMPOSITE),
                                    (512, GRADED_COMPOSITE)])
def test_grid_invariants(n, kind):
    g = build_grid(n, kind)
    assert g.n == n
    assert np.all(np.diff(g.nodes) > 0)
    assert g.nodes[0] == -1.0 and g.nodes[-1] == 1.0
    assert np.all(g.weights > 0)
    assert abs(np.sum(g.weights) - 2.0) < 1e-13
    assert np.max(np.abs(g.nodes + g.nodes[::-1])) == 0.0
    assert np.max(np.abs(g.weights - g.weights[::-1])) == 0.0


def test_chebyshev_nodes_are_cosine_spaced():
    g = build_grid(8, CHEBYSHEV_LOBATTO)
    expected = -np.cos(np.pi * np.arange(8) / 7)
    assert np.allclose(g.nodes, expected, atol=1e-15)
    assert np.pi / 7 not in g.nodes  # just spacing; +-1 at the ends
    assert g.nodes[0] == -1.0 and g.nodes[-1] == 1.0


@pytest.mark.parametrize("n", [7, 9, 4, 0])
def test_build_grid_rejects_bad_n(n):
    with pytest.raises(ValueError):
        build_grid(n, CHEBYSHEV_LOBATTO)


def test_build_grid_rejects_bad_graded_n():
    with pytest.raises(ValueError):
        build_grid(40, GRADED_COMPOSITE)
    with pytest.raises(ValueError):
        build_grid(48, GRADED_COMPOSITE)


def test_build_grid_rejects_unknown_kind():
    with pytest.raises(ValueError):
        build_grid(32, "uniform")


def test_integrate_constant(grid256):
    assert abs(integrate(grid256, np.ones(grid256.n)) - 2.0) < 1e-13


def test_integrate_runge_kernel(grid256):
    # int_{-1}^{1} 2/(1+x^2) dx = pi (arctan antiderivative)
    vals = 2.0 / (1.0 + grid256.nodes**2)
    assert abs(integrate(grid256, vals) - np.pi) < 1e-10


def test_integrate_half_disc(grid256):
    vals = np.sqrt(1.0 - grid256.nodes**2)
    assert abs(integrate(grid256, vals) - np.pi / 2) < 1e-6


def test_integrate_x_squared_n32():
    g = build_grid(32, CHEBYSHEV_LOBATTO)
    assert abs(integrate(g, g.nodes**2) - 2.0 / 3.0) < 1e-12


def test_integrate_rejects_length_mismatch(grid256):
    with pytest.raises(ValueError):
        integrate(grid256, np.ones(grid256.n - 1))


def test_quadrature_polynomial_exactness():
    # design orders: full polynomial degree on Chebyshev-Lobatto, degree 11
    # on the graded grid (limited by the sqrt-mapped boundary panels)
    g = build_grid(24, CHEBYSHEV_LOBATTO)
    for deg in range(0, 24):
        exact = 2.0 / (deg + 1) if deg % 2 == 0 else 0.0
        got = integrate(g, g.nodes**deg)
        assert abs(got - exact) < 1e-12
    g = build_grid(256, GRADED_COMPOSITE)
    for deg in range(0, 12):
        exact = 2.0 / (deg + 1) if deg % 2 == 0 else 0.0
        got = integrate(g, g.nodes**deg)
        assert abs(got - exact) < 1e-12


def test_evenness_transport(grid256):
    # even nodal values times an odd polynomial integrate to zero
    even = np.cosh(grid256.nodes)
    for odd in (grid256.nodes, grid256.nodes**3 - 3 * grid256.nodes):
        assert abs(integrate(grid256, even * odd)) < 1e-13


def test_log_moment_basics():
    assert abs(log_moment(0.0, 1.0, 0.0) - 1.0) < 1e-15
    assert abs(log_moment(-1.0, 1.0, 0.0) - 2.0) < 1e-15


def test_log_moment_rejects_empty_interval():
    with pytest.raises(ValueError):
        log_moment(1.0, 0.0, 0.5)


def test_log_moment_against_adaptive_oracle():
    rng = np.random.default_rng(42)

    def oracle(a, b, x):
        f = lambda y: -np.log(abs(x - y)) if y != x else 0.0
        if a < x < b:
            # split at the (integrable) singularity so the adaptive rule
            # only ever sees it as an interval endpoint
            va, _ = quad(f, a, x, limit=400, epsabs=1e-13, epsrel=1e-13)
            vb, _ = quad(f, x, b, limit=400, epsabs=1e-13, epsrel=1e-13)
            return va + vb
        val, _ = quad(f, a, b, limit=400, epsabs=1e-13, epsrel=1e-13)
        return val

    for _ in range(100):
        a = rng.uniform(-2.0, 1.0)
        b = a + rng.uniform(0.1, 2.0)
        # include singular points inside [a, b] as well as outside
        if rng.random() < 0.5:
            x = rng.uniform(a, b)
        else:
            x = rng.uniform(-3.0, 3.0)
        assert abs(log_moment(a, b, x) - oracle(a, b, x)) < 1e-12


@pytest.mark.parametrize("kind", [CHEBYSHEV_LOBATTO, GRADED_COMPOSITE])
def test_interpolation_node_round_trip(kind):
    n = 16 if kind == CHEBYSHEV_LOBATTO else 256
    g = build_grid(n, kind)
    rng = np.random.default_rng(3)
    f = Field(g, rng.standard_normal(g.n))
    for j in range(0, g.n, max(1, g.n // 17)):
        assert f(g.nodes[j]) == f.values[j]   # bit-exact


def test_interpolation_reproduces_cubic():
    g = build_grid(16, CHEBYSHEV_LOBATTO)
    f = Field(g, g.nodes**3)
    assert abs(f(0.3) - 0.027) < 1e-13


def test_interpolation_outside_interval_is_zero(grid256):
    f = Field(grid256, np.ones(grid256.n))
    assert f(1.5) == 0.0
    assert f(-2.0) == 0.0
    assert interpolate(f, 1.5) == 0.0


def test_interpolation_smooth_function_accuracy(grid256):
    f = Field(grid256, np.sin(3.0 * grid256.nodes))
    xs = np.linspace(-0.99, 0.99, 157)
    err = np.max(np.abs(f(xs) - np.sin(3.0 * xs)))
    assert err < 1e-8


def test_field_rejects_wrong_length(grid256):
    with pytest.raises(ValueError):
        Field(grid256, np.zeros(grid256.n + 1))


def test_field_derivative(grid256):
    f = Field(grid256, np.sin(2.0 * grid256.nodes))
    for x in (-0.7, -0.2, 0.0, 0.33, 0.8):
        assert abs(f.derivative(x) - 2.0 * np.cos(2.0 * x)) < 1e-8
