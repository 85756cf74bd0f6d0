"""Isospectral flows of L_q: the explicit gamma_n(s) family and the numerically integrated xi_n(s)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.special import erfc

from ..errors import NonpositiveTime, ToleranceNotMet, WindowViolation
from ..heatfun import HeatValue
from .potential import DEFAULT_GRID, GammaFlowPotential, GridPotential, Potential, project_even_zero_mean, uniform_grid
from .solver import EigenPair, _solve, dirichlet_eigenvalues, heat_content_q

PI = math.pi
SQRT2 = math.sqrt(2.0)


def gamma_flow(n: int, s: float) -> GammaFlowPotential:
    return GammaFlowPotential(n, float(s))


def _sin_product_tail(j: int, n: int, x):
    """int_x^1 2 sin(j pi r) sin(n pi r) dr."""
    x = np.asarray(x, dtype=float)
    if j == n:
        return 1.0 - x + np.sin(2 * n * PI * x) / (2 * n * PI)
    return np.sin((j + n) * PI * x) / ((j + n) * PI) - np.sin((j - n) * PI * x) / ((j - n) * PI)


def _gamma_phi(n: int, s: float, j: int):
    g = GammaFlowPotential(n, s)
    e = math.expm1(s)

    if j == n:
        c = math.exp(0.5 * s) * SQRT2

        def phi(x):
            return c * np.sin(n * PI * np.asarray(x, dtype=float)) / g.theta(x)

        def dphi(x):
            x = np.asarray(x, dtype=float)
            th, d1, _ = g.theta_derivatives(x)
            return c * (n * PI * np.cos(n * PI * x) * th - np.sin(n * PI * x) * d1) / (th * th)

        return phi, dphi

    def phi(x):
        x = np.asarray(x, dtype=float)
        return SQRT2 * (np.sin(j * PI * x) - e * np.sin(n * PI * x) / g.theta(x) * _sin_product_tail(j, n, x))

    def dphi(x):
        x = np.asarray(x, dtype=float)
        th, d1, _ = g.theta_derivatives(x)
        sn, cn = np.sin(n * PI * x), np.cos(n * PI * x)
        tail = _sin_product_tail(j, n, x)
        dtail = -2.0 * np.sin(j * PI * x) * sn
        ratio = sn / th
        dratio = (n * PI * cn * th - sn * d1) / (th * th)
        return SQRT2 * (j * PI * np.cos(j * PI * x) - e * (dratio * tail + ratio * dtail))

    return phi, dphi


def h_coefficient(n: int, j: int, s: float) -> float:
    """h_{n,j}(s) = int_0^1 phi_{j, gamma_n(s)}."""
    if n < 1 or j < 1:
        raise ValueError("n and j must be >= 1")
    phi, _ = _gamma_phi(n, float(s), j)
    value, _ = quad(phi, 0.0, 1.0, epsabs=1e-13, epsrel=1e-10, limit=400)
    return float(value)


def gamma_eigenfunction(n: int, s: float, j: int) -> EigenPair:
    """Closed-form eigenpair of gamma_n(s); the eigenvalue stays j^2 pi^2."""
    if n < 1 or j < 1:
        raise ValueError("n and j must be >= 1")
    phi, dphi = _gamma_phi(n, float(s), j)
    return EigenPair(j, (j * PI) ** 2, h_coefficient(n, j, s), phi, dphi)


def gamma_heat_content(n: int, s: float, t: float, eps: float = 1e-13) -> HeatValue:
    """Q_{gamma_n(s)}(t) = sum_j exp(-t j^2 pi^2) h_j(s)^2 from the closed forms."""
    t = float(t)
    if not t > 0:
        raise NonpositiveTime(f"t must be positive, got {t!r}")
    a = t * PI * PI
    J = 1
    while 0.5 * math.sqrt(PI / a) * float(erfc(math.sqrt(a) * J)) > eps:
        J += 1
    J = max(J, 2 * n)
    tail = 0.5 * math.sqrt(PI / a) * float(erfc(math.sqrt(a) * J))
    h = np.array([h_coefficient(n, j, s) for j in range(1, J + 1)])
    lam = (np.arange(1, J + 1) * PI) ** 2
    return HeatValue(float(np.dot(np.exp(-t * lam), h * h)), tail, t, J)


def dQ_gamma_at_zero(n: int, t: float, h: float = 1e-3, method: str = "closed") -> float:
    """Central difference (Q(h) - Q(-h)) / 2h of s -> Q_{gamma_n(s)}(t); O(h^2) by construction.

    ``method="numeric"`` uses the shooting eigensolver instead of the closed forms.
    """
    if method == "closed":
        q = lambda s: gamma_heat_content(n, s, t).value  # noqa: E731
    elif method == "numeric":
        q = lambda s: heat_content_q(gamma_flow(n, s), t, 1e-13).value  # noqa: E731
    else:
        raise ValueError(f"unknown method {method!r}")
    return (q(h) - q(-h)) / (2.0 * h)


# -- vector fields -------------------------------------------------------------

def _eigenvalue(q: Potential, n: int, guess: float | None = None) -> float:
    return float(dirichlet_eigenvalues(q, [n], guess=None if guess is None else [guess])[0])


def vector_field_X(q: Potential, n: int, x=None, lam: float | None = None) -> GridPotential:
    """X_n(q) = 2 d/dx phi_n^2 = 4 phi_n phi_n', sampled on the grid."""
    x = uniform_grid(DEFAULT_GRID) if x is None else np.asarray(x, dtype=float)
    lam = _eigenvalue(q, n, lam)
    qs = q.scalar

    def rhs(s, z):
        return [z[1], (qs(s) - lam) * z[0], z[0] * z[0]]

    sol = _solve(rhs, [0.0, 1.0, 0.0], x_eval=x, max_step=q.max_step)
    y, dy, _ = sol.y
    return GridPotential(4.0 * y * dy / sol.y[2, -1])


def vector_field_Y(q: Potential, n: int, x=None, lam: float | None = None) -> GridPotential:
    """Y_n(q) = -2 d/dx (a_n - [a_n] phi_n^2) with a_n = y1 y2 at lambda_n(q).

    Both derivatives come from the ODE states, so nothing is differenced
    numerically: a_n' = y1' y2 + y1 y2' and (phi_n^2)' = 2 y2 y2' / int y2^2.
    ``lam`` is an eigenvalue guess (refined by Newton).
    """
    x = uniform_grid(DEFAULT_GRID) if x is None else np.asarray(x, dtype=float)
    lam = _eigenvalue(q, n, lam)
    qs = q.scalar

    def rhs(s, z):
        c = qs(s) - lam
        return [z[1], c * z[0], z[3], c * z[2], z[0] * z[2], z[2] * z[2]]

    sol = _solve(rhs, [1.0, 0.0, 0.0, 1.0, 0.0, 0.0], x_eval=x, max_step=q.max_step)
    y1, dy1, y2, dy2, a_int, y2_sq = sol.y
    mean_a, norm2 = a_int[-1], y2_sq[-1]
    return GridPotential(-2.0 * (dy1 * y2 + y1 * dy2 - mean_a * 2.0 * y2 * dy2 / norm2))


# -- xi_n flow -----------------------------------------------------------------

def admissible_window(n: int) -> tuple[float, float]:
    """Open interval of s with (n-1)^2 pi^2 < n^2 pi^2 + s < (n+1)^2 pi^2."""
    return -(2 * n - 1) * PI * PI, (2 * n + 1) * PI * PI


def check_window(n: int, s: float) -> None:
    lo, hi = admissible_window(n)
    if not (lo < s < hi):
        raise WindowViolation(f"s={s!r} outside the admissible window ({lo:.6g}, {hi:.6g}) for n={n}")


@dataclass(frozen=True)
class StepRecord:
    s: float
    h: float
    drift: float
    accepted: bool


@dataclass(frozen=True)
class FlowState:
    n: int
    s: float
    q: GridPotential
    log: tuple[StepRecord, ...] = field(default=(), repr=False)

    def contract(self, J: int) -> np.ndarray:
        """Target eigenvalues j^2 pi^2 + s delta_{nj}, j = 1..J."""
        lam = (np.arange(1, J + 1) * PI) ** 2
        if self.n <= J:
            lam[self.n - 1] += self.s
        return lam


def _contract(n: int, s: float, J: int) -> np.ndarray:
    lam = (np.arange(1, J + 1) * PI) ** 2
    if n <= J:
        lam[n - 1] += s
    return lam


def _drift(q: GridPotential, n: int, s: float, J: int) -> float:
    target = _contract(n, s, J)
    lam = dirichlet_eigenvalues(q, J, guess=target)
    return float(np.abs(lam - target).max())


def xi_flow(
    n: int,
    s_target: float,
    steps: int | None = None,
    grid: int = DEFAULT_GRID,
    tol: float = 1e-6,
    max_halvings: int = 8,
) -> FlowState:
    """Integrate d xi/ds = Y_n(xi), xi(0) = 0 by classical RK4 up to s_target.

    Every stage is projected onto even zero-mean grid functions. After each
    step the eigenvalues j <= max(n + 1, 5) are recomputed and the step is
    rejected (and halved) if any drifts from j^2 pi^2 + s delta_{nj} by more
    than 10 * tol.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    check_window(n, s_target)
    x = uniform_grid(grid)
    values = np.zeros(grid)
    if s_target == 0:
        return FlowState(n, 0.0, GridPotential(values), ())
    if steps is None:
        steps = max(4, int(math.ceil(abs(s_target) / 0.25)))
    h = s_target / steps
    J = max(n + 1, 5)
    s = 0.0
    log: list[StepRecord] = []
    lam_n = (n * PI) ** 2

    def field_at(v, s_stage):
        return vector_field_Y(GridPotential(v), n, x, lam=lam_n + s_stage).values

    while abs(s_target - s) > 1e-14 * max(1.0, abs(s_target)):
        h = math.copysign(min(abs(h), abs(s_target - s)), s_target)
        for _ in range(max_halvings + 1):
            k1 = field_at(values, s)
            k2 = field_at(project_even_zero_mean(values + 0.5 * h * k1), s + 0.5 * h)
            k3 = field_at(project_even_zero_mean(values + 0.5 * h * k2), s + 0.5 * h)
            k4 = field_at(project_even_zero_mean(values + h * k3), s + h)
            trial = project_even_zero_mean(values + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4))
            drift = _drift(GridPotential(trial), n, s + h, J)
            ok = drift <= 10.0 * tol
            log.append(StepRecord(s + h, h, drift, ok))
            if ok:
                break
            h *= 0.5
        else:
            raise ToleranceNotMet(f"xi flow step at s={s:.6g} rejected after {max_halvings} halvings")
        values = trial
        s += h
    return FlowState(n, float(s_target), GridPotential(values), tuple(log))


# -- derivative of the heat content along xi_n ----------------------------------

@dataclass(frozen=True)
class XiDerivative:
    n: int
    t: float
    value: float
    tail_bound: float
    approximate: bool  # True when a finite-difference flow term is included


def _xi_series(n: int, t: float, eps: float, skip_n: bool) -> tuple[float, float]:
    """8 sum_{j odd} e^{-j^2 pi^2 t} / (j^2 pi^2) * (1/((j^2 - n^2) pi^2) + 1/(n^2 pi^2))."""
    a = t * PI * PI
    total = 0.0
    j = 1
    while True:
        if not (skip_n and j == n):
            total += 8.0 * math.exp(-a * j * j) / (j * j * PI * PI) * (1.0 / ((j * j - n * n) * PI * PI) + 1.0 / (n * n * PI * PI))
        if j > n:
            # |bracket| <= 2/(n^2 pi^2) once j > n; remaining odd j bounded by an erfc integral
            c = 8.0 / (j * j * PI * PI) * 2.0 / (n * n * PI * PI)
            tail = c * 0.5 * math.sqrt(PI / a) * float(erfc(math.sqrt(a) * j))
            if tail <= eps:
                return total, tail
        j += 2


def _int_y2(q: Potential, lam: float) -> float:
    qs = q.scalar

    def rhs(s, z):
        return [z[1], (qs(s) - lam) * z[0], z[0]]

    return float(_solve(rhs, [0.0, 1.0, 0.0], max_step=q.max_step).y[2, -1])


def dQ_xi_series(n: int, t: float, eps: float = 1e-14, h: float = 1e-2) -> XiDerivative:
    """d/ds Q_{xi_n(s)}(t) at s = 0 from the closed series.

    For odd n the j = n summand has the extra pieces -8t/(n^2 pi^2) e^{-n^2 pi^2 t}
    and 8 e^{-n^2 pi^2 t} d/ds int_0^1 y2(x, n^2 pi^2 + s, xi_n(s)) dx; the last
    derivative is a central difference along the integrated flow with step h,
    so the result is flagged approximate.
    """
    t = float(t)
    if not t > 0:
        raise NonpositiveTime(f"t must be positive, got {t!r}")
    if n < 1:
        raise ValueError("n must be >= 1")
    if n % 2 == 0:
        value, tail = _xi_series(n, t, eps, skip_n=False)
        return XiDerivative(n, t, value, tail, False)
    value, tail = _xi_series(n, t, eps, skip_n=True)
    w = math.exp(-(n * PI) ** 2 * t)
    value -= 8.0 * t / (n * PI) ** 2 * w
    ints = [_int_y2(xi_flow(n, s).q, (n * PI) ** 2 + s) for s in (h, -h)]
    value += 8.0 * w * (ints[0] - ints[1]) / (2.0 * h)
    return XiDerivative(n, t, value, tail, True)


def dQ_xi_finite_difference(n: int, t: float, h: float = 1e-2, eps: float = 1e-13) -> float:
    """(Q_{xi_n(h)}(t) - Q_{xi_n(-h)}(t)) / 2h with flows and heat contents computed numerically."""
    qp = heat_content_q(xi_flow(n, h).q, t, eps).value
    qm = heat_content_q(xi_flow(n, -h).q, t, eps).value
    return (qp - qm) / (2.0 * h)


def dQ_xi_first_order(n: int, t: float, eps: float = 1e-14) -> float:
    """d/ds Q_{xi_n(s)}(t) at s = 0 from first-order perturbation theory.

    xi_n'(0) = Y_n(0) = -2 cos(2 n pi x) couples odd j only to the odd modes
    k = |2n - j| and k = j + 2n, which gives for j != n

        d/ds h_j^2 = 4 / (pi^4 n j) * (1/((2n - j)(j - n)) + 1/((j + 2n)(j + n))),

    and for j = n (n odd) d/ds h_n^2 = 2 / (3 pi^4 n^4) plus -t h_n(0)^2 from
    d lambda_n / ds = 1.
    """
    t = float(t)
    if not t > 0:
        raise NonpositiveTime(f"t must be positive, got {t!r}")
    a = t * PI * PI
    total = 0.0
    j = 1
    while True:
        w = math.exp(-a * j * j)
        if j == n:
            total += w * (2.0 / (3.0 * PI**4 * n**4) - t * 8.0 / (n * PI) ** 2)
        else:
            total += w * 4.0 / (PI**4 * n * j) * (1.0 / ((2 * n - j) * (j - n)) + 1.0 / ((j + 2 * n) * (j + n)))
        if j > 3 * n and w * 8.0 / (PI**4 * n * j) * 0.5 * math.sqrt(PI / a) <= eps:
            return total
        j += 2
