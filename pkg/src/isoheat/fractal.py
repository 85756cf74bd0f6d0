"""Self-similar bands P_alpha = disjoint union of alpha^j P, j >= 0.

Bands are symbolic (generator, alpha); every evaluation reports its own
truncation. The log-periodic parts of the small-time expansions are only
ever exposed as samples.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidRatio, UnsupportedConfiguration, WindowOutOfRange
from .geometry import Domain, PolygonInvariants, components, polygon_invariants, vertex_term
from .heatfun import HeatValue, _check_time, content_corner_sum, heat_content, heat_trace
from .spectra import PI, first_eigenvalues

SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class SelfSimilarBand:
    generator: Domain
    alpha: float

    def __post_init__(self):
        alpha = float(self.alpha)
        if not (0.0 < alpha < 1.0):
            raise InvalidRatio(f"band ratio must lie in (0, 1), got {self.alpha!r}")
        object.__setattr__(self, "alpha", alpha)
        if len(list(components(self.generator))) != 1:
            raise ValueError("band generator must be a single polygon")

    @property
    def generator_invariants(self) -> PolygonInvariants:
        return polygon_invariants(self.generator)

    @property
    def area(self) -> float:
        return self.generator_invariants.area / (1.0 - self.alpha**2)

    @property
    def boundary_length(self) -> float:
        return self.generator_invariants.boundary_length / (1.0 - self.alpha)

    @property
    def period(self) -> float:
        """Period in log t of the oscillatory terms."""
        return 2.0 * math.log(1.0 / self.alpha)

    def lambda1(self) -> float:
        return float(first_eigenvalues(self.generator, 1)[0])


def band_heat_trace(b: SelfSimilarBand, t: float, eps: float = 1e-12) -> HeatValue:
    """sum_j Z_P(t alpha^{-2j}), j = 0..j_max.

    Term j gets budget eps * 2^{-(j+2)}; the remaining sum is bounded by
    Z_P(t_j) r / (1 - r), r = exp(-lambda_1 t_j (alpha^{-2} - 1)), and the
    loop stops once that bound is below eps / 2.
    """
    t = _check_time(t)
    lam1 = b.lambda1()
    growth = b.alpha ** -2
    value = tail = 0.0
    used = 0
    j = 0
    tj = t
    while True:
        z = heat_trace(b.generator, tj, eps * 2.0 ** -(j + 2))
        value += z.value
        tail += z.tail_bound
        used += z.modes_used
        r = math.exp(-lam1 * tj * (growth - 1.0))
        rest = (z.value + z.tail_bound) * r / (1.0 - r)
        if rest <= 0.5 * eps:
            return HeatValue(value, tail + rest, t, used)
        j += 1
        tj *= growth


def band_heat_content(b: SelfSimilarBand, t: float, eps: float = 1e-12) -> HeatValue:
    """sum_j alpha^{2j} Q_P(t alpha^{-2j}) with a Bessel bound on the omitted copies."""
    t = _check_time(t)
    lam1 = b.lambda1()
    a2 = b.alpha**2
    area = b.generator_invariants.area
    value = tail = 0.0
    used = 0
    j = 0
    tj = t
    w = 1.0
    while True:
        q = heat_content(b.generator, tj, eps * 2.0 ** -(j + 2) / w)
        value += w * q.value
        tail += w * q.tail_bound
        used += q.modes_used
        # copies i > j: alpha^{2i} |P| exp(-lam1 t_i), summed geometrically
        rest = area * w * a2 * math.exp(-lam1 * tj / a2) / (1.0 - a2)
        if rest <= 0.5 * eps:
            return HeatValue(value, tail + rest, t, used)
        j += 1
        tj /= a2
        w *= a2


def log_coefficients(b: SelfSimilarBand) -> dict[str, float]:
    """Coefficients of log t (trace) and t log t (content) in the band expansions."""
    p = b.generator_invariants
    if not p.all_dirichlet:
        raise UnsupportedConfiguration("log coefficients need an all-Dirichlet generator")
    two_log = 2.0 * math.log(b.alpha)
    return {
        "c_trace": vertex_term(p) / two_log,
        "d_content": content_corner_sum(p) / two_log,
    }


# -- generator remainders ------------------------------------------------------

def trace_remainder(d: Domain, t: float, eps: float = 1e-13) -> float:
    """R(t) = Z_P(t) - |P|/(4 pi t) + |dP|/(8 sqrt(pi t)) - V(P)."""
    p = polygon_invariants(d)
    z = heat_trace(d, t, eps).value
    return z - p.area / (4 * PI * t) + p.boundary_length / (8 * math.sqrt(PI * t)) - vertex_term(p)


def content_remainder(d: Domain, t: float, eps: float = 1e-13) -> float:
    """S(t) = Q_P(t) - |P| + 2 pi^{-1/2} |dP| t^{1/2} - t * sum c(gamma_i)."""
    p = polygon_invariants(d)
    if not p.all_dirichlet:
        raise UnsupportedConfiguration("content remainder needs an all-Dirichlet generator")
    q = heat_content(d, t, eps).value
    return q - p.area + 2.0 * p.boundary_length * math.sqrt(t) / SQRT_PI - content_corner_sum(p) * t


def trace_U(b: SelfSimilarBand, t: float, eps: float) -> float:
    c = log_coefficients(b)["c_trace"]
    z = band_heat_trace(b, t, eps).value
    return z - b.area / (4 * PI * t) + b.boundary_length / (8 * math.sqrt(PI * t)) - c * math.log(t)


def content_T(b: SelfSimilarBand, t: float, eps: float) -> float:
    """T(t); the band content is evaluated with budget eps * t so T is good to eps."""
    d = log_coefficients(b)["d_content"]
    q = band_heat_content(b, t, eps * t).value
    return (q - b.area + 2.0 * b.boundary_length * math.sqrt(t) / SQRT_PI - d * t * math.log(t)) / t


@dataclass
class RenewalRemainder:
    """Samples of U (kind "trace") or T (kind "content") on a log-uniform grid.

    ``residual`` holds U(t) - U(t/alpha^2) - R(t), respectively
    T(t) - T(t/alpha^2) - S(t)/t, with both sides computed independently.
    ``forcing`` holds R(t), respectively S(t)/t.
    """

    kind: str
    alpha: float
    t: np.ndarray
    value: np.ndarray
    value_next: np.ndarray  # U or T at t / alpha^2
    forcing: np.ndarray
    residual: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.residual is None:
            self.residual = self.value - self.value_next - self.forcing

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "value", "residual"])
        for row in zip(self.t, self.value, self.residual):
            w.writerow([f"{x:.17g}" for x in row])
        return buf.getvalue()

    def fourier_summary(self, harmonics: int = 3) -> np.ndarray:
        """Least-squares Fourier coefficients of the samples in log t (period 2 log(1/alpha))."""
        x = np.log(self.t) * 2.0 * math.pi / (2.0 * math.log(1.0 / self.alpha))
        cols = [np.ones_like(x)]
        for k in range(1, harmonics + 1):
            cols += [np.cos(k * x), np.sin(k * x)]
        coef, *_ = np.linalg.lstsq(np.stack(cols, axis=1), self.value, rcond=None)
        return coef


DEFAULT_WINDOWS = {"trace": (5e-3, 2e-2), "content": (2.5e-3, 1e-2)}


def log_grid(b: SelfSimilarBand, t_min: float, t_max: float, points_per_period: int = 8) -> np.ndarray:
    periods = math.log(t_max / t_min) / b.period
    n = max(2, int(round(periods * points_per_period)) + 1)
    return np.geomspace(t_min, t_max, n)


def renewal_remainder(
    b: SelfSimilarBand,
    kind: str,
    t_grid: Sequence[float] | None = None,
    eps: float = 1e-9,
    check_window: bool = True,
) -> RenewalRemainder:
    if kind not in ("trace", "content"):
        raise ValueError(f"kind must be 'trace' or 'content', got {kind!r}")
    ts = log_grid(b, *DEFAULT_WINDOWS[kind]) if t_grid is None else np.asarray(t_grid, dtype=float)
    if math.log(ts.max() / ts.min()) < 2 * b.period * (1 - 1e-12):
        raise ValueError("time grid must span at least two periods of the log-periodic term")
    a2 = b.alpha**2
    if kind == "trace":
        value = np.array([trace_U(b, t, eps) for t in ts])
        nxt = np.array([trace_U(b, t / a2, eps) for t in ts])
        forcing = np.array([trace_remainder(b.generator, t, 0.1 * eps) for t in ts])
    else:
        value = np.array([content_T(b, t, eps) for t in ts])
        nxt = np.array([content_T(b, t / a2, eps) for t in ts])
        forcing = np.array([content_remainder(b.generator, t, 0.1 * eps * t) / t for t in ts])
    if check_window and np.abs(forcing).max() > 100 * eps:
        raise WindowOutOfRange(
            f"generator remainder reaches {np.abs(forcing).max():.3g} > 100*eps in the requested window"
        )
    return RenewalRemainder(kind, b.alpha, ts, value, nxt, forcing)


def _base_point(b: SelfSimilarBand, t: float) -> float:
    """The point theta in [1, alpha^-2) with t = alpha^{2k} theta for an integer k."""
    a2 = b.alpha**2
    k = math.floor(math.log(t) / math.log(a2))
    theta = t / a2**k
    while theta < 1.0:
        theta /= a2
    while theta >= 1.0 / a2:
        theta *= a2
    return theta


def periodic_trace_term(b: SelfSimilarBand, t: float, eps: float = 1e-12, t_floor: float = 1e-3) -> float:
    """Sample of the log-periodic trace term at t.

    Equals U(theta) + sum_{i>=0} R(alpha^{2i+2} theta) with theta the base
    point of t in [1, alpha^-2); terms with argument below ``t_floor`` are
    dropped (their size is of the generator remainder there).
    """
    theta = _base_point(b, t)
    total = trace_U(b, theta, eps)
    s = theta * b.alpha**2
    while s >= t_floor:
        total += trace_remainder(b.generator, s, eps)
        s *= b.alpha**2
    return total


def periodic_content_term(b: SelfSimilarBand, t: float, eps: float = 1e-12, t_floor: float = 1e-3) -> float:
    """Sample of the log-periodic content term: T(theta) + sum_i S(s_i)/s_i."""
    theta = _base_point(b, t)
    total = content_T(b, theta, eps)
    s = theta * b.alpha**2
    while s >= t_floor:
        total += content_remainder(b.generator, s, eps * s) / s
        s *= b.alpha**2
    return total


def trace_expansion(b: SelfSimilarBand, t: float, eps: float = 1e-12) -> float:
    """Small-time expansion of the band trace including the sampled periodic term."""
    c = log_coefficients(b)["c_trace"]
    return (
        b.area / (4 * PI * t)
        - b.boundary_length / (8 * math.sqrt(PI * t))
        + c * math.log(t)
        + periodic_trace_term(b, t, eps)
    )


def content_expansion(b: SelfSimilarBand, t: float, eps: float = 1e-12) -> float:
    d = log_coefficients(b)["d_content"]
    return (
        b.area
        - 2.0 * b.boundary_length * math.sqrt(t) / SQRT_PI
        + d * t * math.log(t)
        + t * periodic_content_term(b, t, eps)
    )
