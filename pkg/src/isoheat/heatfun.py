"""Heat trace and heat content: certified series, small-time laws, fits, large-time term."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import erfc

from .errors import DegenerateGroundState, IllConditionedFit, NonpositiveTime, UnsupportedConfiguration
from .geometry import (
    BC,
    Domain,
    PolygonInvariants,
    Rectangle,
    components,
    corner_coefficient,
    polygon_invariants,
    vertex_term,
)
from .spectra import PI, PI2, axis_family, check_supported, enumerate_modes, first_eigenvalues, triangle_kind

SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class HeatValue:
    value: float
    tail_bound: float
    t: float
    modes_used: int

    def to_dict(self) -> dict:
        return {"t": self.t, "value": self.value, "tail_bound": self.tail_bound, "modes_used": self.modes_used}


@dataclass(frozen=True)
class AsymptoticCoeffs:
    b0: float
    b1: float
    b2: float | None  # None: no corner law covers this configuration
    residual: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class LargeTimeLeading:
    lambda1: float
    amplitude: float
    lambda2: float
    multiplicity: int = 1


def _check_time(t: float) -> float:
    t = float(t)
    if not t > 0:
        raise NonpositiveTime(f"t must be positive, got {t!r}")
    return t


# -- heat trace via 1-D theta sums -------------------------------------------

def _theta(a: float, shift: float, start: int, stride: int, budget: float) -> tuple[float, float, int]:
    """sum_k exp(-a (k + shift)^2) over k = start, start + stride, ... with k + shift > 0.

    Returns (partial sum, certified tail bound, number of terms).
    """
    half = 0.5 * math.sqrt(math.pi / a)
    f_last = math.sqrt(max(math.log(max(half / (stride * budget), 1.0)), 0.0) / a)
    n = max(1, int(math.ceil((f_last - (start + shift)) / stride)) + 1)
    while True:
        freq = start + shift + stride * np.arange(n)
        tail = half * float(erfc(math.sqrt(a) * freq[-1])) / stride
        if tail <= budget:
            break
        n = 2 * n
    return float(np.exp(-a * freq * freq).sum()), tail, n


def _theta_bound(a: float) -> float:
    return 1.0 + 0.5 * math.sqrt(math.pi / a)


def _axis_theta(L: float, family: str, tau: float, budget: float):
    a = tau * PI2 / (L * L)
    if family == "DD":
        return _theta(a, 0.0, 1, 1, budget)
    if family == "DN":
        return _theta(a, -0.5, 1, 1, budget)
    # NN: k = 0 term handled separately, the rest are the D-D frequencies
    v, tail, n = _theta(a, 0.0, 1, 1, budget)
    return 1.0 + v, tail, n + 1


def _product(x, y):
    (a, ta, na), (b, tb, nb) = x, y
    return a * b, a * tb + b * ta + ta * tb, na * nb


def _polygon_trace(poly, tau: float, eps: float) -> tuple[float, float, int]:
    if isinstance(poly, Rectangle):
        bottom, right, top, left = poly.bc
        fx, fy = axis_family(left, right), axis_family(bottom, top)
        ub = max(_theta_bound(tau * PI2 / poly.a**2), _theta_bound(tau * PI2 / poly.b**2))
        delta = eps / (3.0 * ub)
        return _product(_axis_theta(poly.a, fx, tau, delta), _axis_theta(poly.b, fy, tau, delta))
    kind = triangle_kind(poly)
    if kind == "neumann_leg":
        L = poly.leg * math.sqrt(2.0)
        a = tau * PI2 / (L * L)
        delta = eps / (3.0 * _theta_bound(a))
        odd = _theta(a, 0.0, 1, 2, delta)
        even = _theta(a, 0.0, 2, 2, delta)
        return _product(odd, even)
    # (S(t)^2 -+ S(2t)) / 2 over the Dirichlet square of side leg
    a = tau * PI2 / poly.leg**2
    delta = eps / (3.0 * _theta_bound(a))
    s, ts, ns = _theta(a, 0.0, 1, 1, delta)
    s2, ts2, _ = _theta(2.0 * a, 0.0, 1, 1, delta)
    sign = -1.0 if kind == "dirichlet" else 1.0
    value = 0.5 * (s * s + sign * s2)
    return value, 0.5 * (2.0 * s * ts + ts * ts + ts2), ns * ns // 2


def heat_trace(d: Domain, t: float, eps: float = 1e-12) -> HeatValue:
    """Z(t) = sum exp(-t lambda_j), with |true - value| <= tail_bound <= eps."""
    t = _check_time(t)
    check_supported(d)
    parts = list(components(d))
    budget = eps / len(parts)
    value = tail = 0.0
    used = 0
    for poly, alpha in parts:
        v, b, n = _polygon_trace(poly, t / (alpha * alpha), budget)
        value += v
        tail += b
        used += n
    return HeatValue(value, tail, t, used)


# -- heat content via the mode stream ----------------------------------------

def content_cutoff(area: float, t: float, eps: float) -> float:
    """Smallest Lambda with area * exp(-t Lambda) <= eps."""
    return max(math.log(area / eps), 0.0) / t


def heat_content(d: Domain, t: float, eps: float = 1e-12) -> HeatValue:
    """Q(t) = sum exp(-t lambda_j) coeff_sq_j, truncated by the Bessel bound."""
    t = _check_time(t)
    check_supported(d)
    area = polygon_invariants(d).area
    # keep at least the ground mode so large-t values stay relatively accurate
    Lambda = max(content_cutoff(area, t, eps), float(first_eigenvalues(d, 1)[0]))
    stream = enumerate_modes(d, Lambda)
    value = float(np.dot(np.exp(-t * stream.lam), stream.coeff_sq))
    # sum of all coeff_sq is the area, so the omitted mass is what is left
    missing = max(area - float(stream.coeff_sq.sum()), 0.0)
    return HeatValue(value, missing * math.exp(-t * Lambda), t, len(stream))


# -- small-time laws -----------------------------------------------------------

def trace_asymptotic(p: PolygonInvariants, t: float) -> float:
    t = _check_time(t)
    if not p.all_dirichlet:
        raise UnsupportedConfiguration("heat-trace corner law needs an all-Dirichlet polygon")
    return p.area / (4 * PI * t) - p.boundary_length / (8 * math.sqrt(PI * t)) + vertex_term(p)


def content_corner_sum(p: PolygonInvariants, tol: float = 1e-12) -> float | None:
    """Coefficient of t in the small-time heat content, or None when not covered.

    Dirichlet-Dirichlet corners contribute c(g). A component with one Neumann
    edge is half of its reflected double: each Dirichlet-Neumann corner of
    angle g becomes a Dirichlet corner 2g of the double and contributes
    c(2g)/2.
    """
    if not p.halving_applicable:
        return None
    total = 0.0
    for k in p.corners:
        if k.kind == "DD":
            total += corner_coefficient(k.angle, tol)
        elif k.kind == "DN":
            if 2 * k.angle > PI:
                return None
            total += 0.5 * corner_coefficient(2 * k.angle, tol)
        else:
            return None
    return total


def content_coefficients(p: PolygonInvariants) -> AsymptoticCoeffs:
    return AsymptoticCoeffs(
        b0=p.area,
        b1=-2.0 * p.dirichlet_length / SQRT_PI,
        b2=content_corner_sum(p),
    )


def content_asymptotic(p: PolygonInvariants, t: float) -> float:
    """|P| - 2 pi^{-1/2} |dP_D| t^{1/2} + t * (corner sum)."""
    t = float(t)
    if t < 0:
        raise NonpositiveTime(f"t must be >= 0, got {t!r}")
    c = content_coefficients(p)
    if c.b2 is None:
        raise UnsupportedConfiguration("no corner coefficient for this boundary-condition pattern")
    return c.b0 + c.b1 * math.sqrt(t) + c.b2 * t


def default_fit_grid(t_min: float = 1e-4, t_max: float = 1e-2, steps: int = 16) -> np.ndarray:
    return np.geomspace(t_min, t_max, steps)


def fit_powers(ts: Sequence[float], values: Sequence[float], n_terms: int = 3) -> tuple[np.ndarray, float]:
    """Least-squares fit of values against t^{k/2}, k < n_terms.

    Returns (coefficients, max absolute residual).
    """
    ts = np.asarray(ts, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(ts) < max(4, n_terms + 1):
        raise IllConditionedFit(f"need at least {max(4, n_terms + 1)} time points, got {len(ts)}")
    basis = np.sqrt(ts)[:, None] ** np.arange(n_terms)[None, :]
    scale = np.abs(basis).max(axis=0)
    coef, *_ = np.linalg.lstsq(basis / scale, values, rcond=None)
    coef = coef / scale
    resid = float(np.abs(basis @ coef - values).max())
    return coef, resid


def fit_small_time(
    d: Domain,
    t_grid: Sequence[float] | None = None,
    eps: float = 1e-13,
    n_terms: int = 3,
    content: Callable[[float], float] | None = None,
) -> AsymptoticCoeffs:
    """Fit Q(t) on a log-spaced small-time grid against {1, t^{1/2}, t, ...}."""
    ts = default_fit_grid() if t_grid is None else np.asarray(t_grid, dtype=float)
    if len(ts) < 4:
        raise IllConditionedFit(f"need at least 4 time points, got {len(ts)}")
    if content is None:
        values = [heat_content(d, t, eps).value for t in ts]
    else:
        values = [content(t) for t in ts]
    coef, resid = fit_powers(ts, values, n_terms)
    return AsymptoticCoeffs(float(coef[0]), float(coef[1]), float(coef[2]), resid)


# -- large time --------------------------------------------------------------

def large_time_leading(d: Domain, allow_degenerate: bool = False) -> LargeTimeLeading:
    """Lowest eigenvalue, its heat-content amplitude and the next distinct eigenvalue.

    With ``allow_degenerate`` a multiple lowest eigenvalue is accepted and the
    amplitude is summed over its eigenspace (basis independent).
    """
    check_supported(d)
    count = 8
    while True:
        lam = first_eigenvalues(d, count)
        tol = 1e-9 * max(1.0, lam[0])
        if lam[-1] - lam[0] > tol:
            break
        count *= 2
    lambda1 = float(lam[0])
    lambda2 = float(lam[np.argmax(lam - lambda1 > tol)])
    stream = enumerate_modes(d, lambda1 + 0.5 * (lambda2 - lambda1))
    ground = np.abs(stream.lam - lambda1) <= tol
    mult = int(ground.sum())
    if mult > 1 and not allow_degenerate:
        raise DegenerateGroundState(f"lowest eigenvalue {lambda1:.12g} has multiplicity {mult}")
    return LargeTimeLeading(lambda1, float(stream.coeff_sq[ground].sum()), lambda2, mult)
