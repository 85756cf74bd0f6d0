import math

import numpy as np
import pytest
from scipy.integrate import quad

from isoheat.errors import WindowViolation
from isoheat.sturm import GridPotential, ZeroPotential, dirichlet_eigen, dirichlet_eigenvalues
from isoheat.sturm.flows import (
    admissible_window,
    dQ_gamma_at_zero,
    dQ_xi_first_order,
    dQ_xi_series,
    gamma_eigenfunction,
    gamma_flow,
    gamma_heat_content,
    h_coefficient,
    vector_field_X,
    vector_field_Y,
    xi_flow,
)
from isoheat.sturm.potential import uniform_grid
from isoheat.sturm.solver import heat_content_q

PI = math.pi
SQRT2 = math.sqrt(2.0)
ZERO = ZeroPotential()


def test_gamma_flow_at_zero_is_zero():
    x = np.linspace(0, 1, 101)
    np.testing.assert_array_equal(gamma_flow(3, 0.0)(x), np.zeros_like(x))


@pytest.mark.parametrize("n, s", [(1, -1.0), (2, 1.0), (3, 2.5), (2, -3.0)])
def test_theta_bounds(n, s):
    x = np.linspace(0, 1, 10_000)
    th = gamma_flow(n, s).theta(x)
    assert th.min() >= min(1.0, math.exp(s)) - 1e-15
    assert th.max() <= max(1.0, math.exp(s)) + 1e-15


def test_gamma_flow_matches_log_derivative():
    # gamma = -2 (log theta)'' by finite differences of the closed-form theta
    g = gamma_flow(2, 0.7)
    x = np.linspace(0.05, 0.95, 19)
    h = 1e-4
    lt = lambda y: np.log(g.theta(y))  # noqa: E731
    fd = -2 * (lt(x + h) - 2 * lt(x) + lt(x - h)) / h**2
    np.testing.assert_allclose(g(x), fd, atol=1e-5)
    np.testing.assert_allclose([g.scalar(v) for v in x], g(x), rtol=1e-13, atol=1e-13)


def test_gamma_flow_isospectral_example():
    lam = dirichlet_eigenvalues(gamma_flow(2, 1.0), 10)
    np.testing.assert_allclose(lam, (np.arange(1, 11) * PI) ** 2, rtol=0, atol=1e-8)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("s", [-1.0, 0.5, 2.0])
def test_gamma_flow_isospectral_grid(n, s):
    lam = dirichlet_eigenvalues(gamma_flow(n, s), 10)
    assert np.abs(lam - (np.arange(1, 11) * PI) ** 2).max() < 1e-7


def test_gamma_eigenfunction_at_zero():
    x = np.linspace(0, 1, 201)
    for j in (1, 2, 5):
        p = gamma_eigenfunction(2, 0.0, j)
        np.testing.assert_allclose(p.phi(x), SQRT2 * np.sin(j * PI * x), atol=1e-15)


@pytest.mark.parametrize("n, s, j", [(2, 0.5, 3), (2, 0.5, 2), (1, -1.0, 4), (3, 2.0, 1)])
def test_gamma_eigenfunction_residual(n, s, j):
    # spectral differentiation of the closed-form phi' on Chebyshev points
    p = gamma_eigenfunction(n, s, j)
    cheb = np.polynomial.Chebyshev.interpolate(p.dphi, 120, domain=[0, 1])
    x = np.linspace(0.01, 0.99, 99)
    d2 = cheb.deriv()(x)
    phi = p.phi(x)
    resid = -d2 + gamma_flow(n, s)(x) * phi - (j * PI) ** 2 * phi
    assert np.abs(resid).max() < 1e-8 * (j * PI) ** 2


@pytest.mark.parametrize("n, s, j", [(2, 0.5, 3), (1, 2.0, 1), (3, -1.0, 2)])
def test_gamma_eigenfunction_matches_solver(n, s, j):
    x = np.linspace(0, 1, 401)
    p = gamma_eigenfunction(n, s, j)
    num = dirichlet_eigen(gamma_flow(n, s), j)[-1]
    assert num.lam == pytest.approx(p.lam, abs=1e-8)
    np.testing.assert_allclose(num.phi(x), p.phi(x), atol=1e-8)
    assert num.integral == pytest.approx(p.integral, abs=1e-9)


def test_gamma_eigenfunction_normalised():
    for j in (1, 2, 4):
        phi = gamma_eigenfunction(2, 1.3, j).phi
        assert quad(lambda x: phi(x) ** 2, 0, 1, epsabs=1e-13, limit=200)[0] == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("j", range(1, 9))
def test_h_at_zero(j):
    assert h_coefficient(3, j, 0.0) == pytest.approx(SQRT2 * (1 - (-1) ** j) / (j * PI), abs=1e-13)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_h_derivatives_at_zero(n):
    h = 1e-4
    for j in range(1, 2 * n + 3):
        d = (h_coefficient(n, j, h) - h_coefficient(n, j, -h)) / (2 * h)
        if j == n:
            expected = -SQRT2 / (n * PI) * (1 + (-1) ** n) / 2
        elif j == 2 * n:
            expected = 1 / (SQRT2 * n * PI)
        else:
            expected = 0.0
        assert abs(d - expected) < 1e-6


def test_h_2n_second_order():
    for n in (1, 2):
        s1, s2 = 1e-3, 1e-4
        f = lambda s: h_coefficient(n, 2 * n, s) ** 2 / s**2  # noqa: E731
        lim = (s1 * f(s2) - s2 * f(s1)) / (s1 - s2)
        assert abs(lim - 1 / (2 * n * n * PI**2)) < 1e-6


def test_gamma_heat_content_matches_solver():
    t = 0.1
    assert gamma_heat_content(2, 0.5, t).value == pytest.approx(heat_content_q(gamma_flow(2, 0.5), t).value, abs=1e-10)


@pytest.mark.parametrize("n, t", [(1, 0.1), (2, 0.5), (1, 0.5), (2, 0.1)])
def test_dQ_gamma_vanishes(n, t):
    assert abs(dQ_gamma_at_zero(n, t)) < 1e-5


def test_second_difference_nonzero_for_even_n():
    h, t = 1e-2, 0.3
    q = lambda s: gamma_heat_content(2, s, t).value  # noqa: E731
    second = (q(h) + q(-h) - 2 * q(0)) / h**2
    assert abs(second) > 1e-4


def test_vector_field_X_at_zero():
    for n in (1, 2, 3):
        X = vector_field_X(ZERO, n)
        np.testing.assert_allclose(X.values, 4 * n * PI * np.sin(2 * n * PI * X.x), atol=1e-8)


def test_flow_consistency():
    h = 1e-3
    x = uniform_grid(1025)
    fd = (gamma_flow(2, h)(x) - gamma_flow(2, -h)(x)) / (2 * h)
    np.testing.assert_allclose(fd, vector_field_X(ZERO, 2).values, atol=1e-5)


def test_vector_field_Y_at_zero():
    Y = vector_field_Y(ZERO, 2)
    np.testing.assert_allclose(Y.values, -2 * np.cos(4 * PI * Y.x), atol=1e-9)


def test_vector_field_Y_preserves_E0():
    q = GridPotential.from_function(lambda x: 3 * np.cos(2 * PI * x) - 2 * np.cos(6 * PI * x) + 5 * np.cos(4 * PI * x))
    assert q.even and abs(q.mean) < 1e-10
    for n in (1, 2):
        Y = vector_field_Y(q, n)
        np.testing.assert_allclose(Y.values, Y.values[::-1], atol=1e-8)
        assert abs(Y.mean) < 1e-8


def test_window():
    lo, hi = admissible_window(2)
    assert lo == pytest.approx(-3 * PI**2) and hi == pytest.approx(5 * PI**2)
    with pytest.raises(WindowViolation):
        xi_flow(2, hi)
    with pytest.raises(WindowViolation):
        xi_flow(2, lo - 1)


def test_xi_flow_at_zero():
    st = xi_flow(2, 0.0)
    assert st.s == 0.0
    assert not np.any(st.q.values)


def test_xi_flow_contract(xi_2_3):
    lam = dirichlet_eigenvalues(xi_2_3.q, 5)
    expected = (np.arange(1, 6) * PI) ** 2
    expected[1] += 3.0
    np.testing.assert_allclose(lam, expected, rtol=0, atol=1e-4)
    np.testing.assert_allclose(xi_2_3.contract(5), expected)


def test_xi_flow_even_zero_mean(xi_2_3):
    v = xi_2_3.q.values
    assert np.abs(v - v[::-1]).max() < 1e-7
    assert abs(xi_2_3.q.mean) < 1e-10
    assert all(r.drift <= 1e-5 for r in xi_2_3.log if r.accepted)


def test_xi_series_against_partial_sum():
    t = 1.0
    j = np.arange(1, 400, 2)
    brute = np.sum(8 * np.exp(-j * j * PI * PI * t) / (j * j * PI * PI) * (1 / ((j * j - 4) * PI * PI) + 1 / (4 * PI * PI)))
    d = dQ_xi_series(2, t)
    assert abs(d.value - brute) < 1e-12
    assert not d.approximate
    lead = 8 * math.exp(-PI * PI) / PI**2 * (1 / (-3 * PI**2) + 1 / (4 * PI**2))
    assert abs(d.value - lead) < 1e-3 * abs(lead)


@pytest.mark.parametrize("t", [0.2, 1.0])
def test_xi_series_nonzero(t):
    assert dQ_xi_series(2, t).value != 0.0


def test_first_order_series_sign_and_size():
    # the even-n first-order series keeps only odd j, like the closed series
    for t in (0.2, 1.0):
        a, b = dQ_xi_first_order(2, t), dQ_xi_series(2, t).value
        assert np.sign(a) == np.sign(b)
        assert 0.5 < a / b < 1.0
