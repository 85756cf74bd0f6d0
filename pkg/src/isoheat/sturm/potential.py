"""Potentials q on [0, 1] for L_q = -d^2/dx^2 + q with Dirichlet ends."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicSpline

from ..errors import SolverFailure

MIN_GRID = 257
DEFAULT_GRID = 1025


class Potential:
    """Interface: vectorised ``__call__``, fast ``scalar``, ``mean`` and ``bounds``."""

    even: bool = False
    # largest ODE step; grid potentials cap it at a few knot spacings so the
    # integrator's error estimate sees the spline pieces
    max_step: float = math.inf

    def __call__(self, x):
        raise NotImplementedError

    def scalar(self, x: float) -> float:
        return float(self(np.asarray(x)))

    @property
    def mean(self) -> float:
        raise NotImplementedError

    def bounds(self) -> tuple[float, float]:
        """(lower, upper) bounds of q on [0, 1]."""
        raise NotImplementedError

    def reflected(self) -> "Potential":
        return GridPotential(self(uniform_grid(DEFAULT_GRID))[::-1].copy())

    def sample(self, n: int = DEFAULT_GRID) -> "GridPotential":
        return GridPotential(np.asarray(self(uniform_grid(n)), dtype=float))

    def to_dict(self) -> dict:
        raise NotImplementedError


def uniform_grid(n: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, n)


class ZeroPotential(Potential):
    even = True

    def __call__(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def scalar(self, x: float) -> float:
        return 0.0

    @property
    def mean(self) -> float:
        return 0.0

    def bounds(self) -> tuple[float, float]:
        return 0.0, 0.0

    def reflected(self) -> "ZeroPotential":
        return self

    def to_dict(self) -> dict:
        return {"type": "zero"}

    def __repr__(self) -> str:
        return "ZeroPotential()"


@dataclass(frozen=True)
class GammaFlowPotential(Potential):
    """-2 d^2/dx^2 log theta_n(x; s) with theta_n = 1 + (e^s - 1)(1 - x + sin(2 n pi x)/(2 n pi))."""

    n: int
    s: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")

    def theta(self, x):
        x = np.asarray(x, dtype=float)
        w = 2.0 * self.n * math.pi
        return 1.0 + math.expm1(self.s) * (1.0 - x + np.sin(w * x) / w)

    def theta_derivatives(self, x):
        x = np.asarray(x, dtype=float)
        e = math.expm1(self.s)
        w = 2.0 * self.n * math.pi
        d1 = -2.0 * e * np.sin(self.n * math.pi * x) ** 2
        d2 = -w * e * np.sin(w * x)
        return self.theta(x), d1, d2

    def __call__(self, x):
        th, d1, d2 = self.theta_derivatives(x)
        r = d1 / th
        return -2.0 * (d2 / th - r * r)

    def scalar(self, x: float) -> float:
        e = math.expm1(self.s)
        w = 2.0 * self.n * math.pi
        sw = math.sin(w * x)
        th = 1.0 + e * (1.0 - x + sw / w)
        sn = math.sin(self.n * math.pi * x)
        r = -2.0 * e * sn * sn / th
        return -2.0 * (-w * e * sw / th - r * r)

    @property
    def mean(self) -> float:
        # integral of -2 (log theta)'' is -2 [theta'/theta] over the ends, and theta' vanishes there
        return 0.0

    def bounds(self) -> tuple[float, float]:
        e = abs(math.expm1(self.s))
        w = 2.0 * self.n * math.pi
        lo = min(1.0, math.exp(self.s))
        # |theta''| <= w e, |theta'| <= 2 e, theta >= min(1, e^s)
        return -2.0 * w * e / lo, 2.0 * w * e / lo + 2.0 * (2.0 * e / lo) ** 2

    def to_dict(self) -> dict:
        return {"type": "gamma", "n": int(self.n), "s": float(self.s)}


class GridPotential(Potential):
    """Samples on the uniform grid of [0, 1], interpolated by a not-a-knot cubic spline."""

    def __init__(self, values):
        values = np.asarray(values, dtype=float)
        if values.ndim != 1 or len(values) < MIN_GRID:
            raise ValueError(f"grid potential needs at least {MIN_GRID} samples")
        if not np.all(np.isfinite(values)):
            raise SolverFailure("grid potential has non-finite samples")
        self.values = values
        self.x = uniform_grid(len(values))
        self._spline = CubicSpline(self.x, values)
        self._coef = self._spline.c.T.tolist()
        self._h = 1.0 / (len(values) - 1)
        self._last = len(values) - 2
        self.max_step = 4.0 * self._h

    @classmethod
    def from_function(cls, f, n: int = DEFAULT_GRID) -> "GridPotential":
        return cls(np.asarray(f(uniform_grid(n)), dtype=float))

    def __call__(self, x):
        return self._spline(np.asarray(x, dtype=float))

    def scalar(self, x: float) -> float:
        i = int(x / self._h)
        if i > self._last:
            i = self._last
        elif i < 0:
            i = 0
        d = x - i * self._h
        c3, c2, c1, c0 = self._coef[i]
        return ((c3 * d + c2) * d + c1) * d + c0

    @cached_property
    def mean(self) -> float:
        return float(self._spline.integrate(0.0, 1.0))

    @cached_property
    def _fine_extrema(self) -> tuple[float, float]:
        v = self(np.linspace(0.0, 1.0, 8 * (len(self.values) - 1) + 1))
        return float(v.min()), float(v.max())

    def bounds(self) -> tuple[float, float]:
        lo, hi = self._fine_extrema
        pad = 1e-6 * max(1.0, hi - lo)
        return lo - pad, hi + pad

    @property
    def even(self) -> bool:
        return bool(np.allclose(self.values, self.values[::-1], rtol=0, atol=1e-12))

    def reflected(self) -> "GridPotential":
        return GridPotential(self.values[::-1].copy())

    def sample(self, n: int = DEFAULT_GRID) -> "GridPotential":
        if n == len(self.values):
            return self
        return super().sample(n)

    def to_dict(self) -> dict:
        return {"type": "grid", "values": self.values.tolist()}

    def __repr__(self) -> str:
        return f"GridPotential(N={len(self.values)}, mean={self.mean:.6g})"


def project_even_zero_mean(values: np.ndarray) -> np.ndarray:
    """Orthogonal projection of uniform-grid samples onto even, zero-mean functions."""
    v = 0.5 * (values + values[::-1])
    return v - GridPotential(v).mean


def potential_from_dict(obj: dict) -> Potential:
    kind = obj.get("type")
    if kind == "zero":
        return ZeroPotential()
    if kind == "gamma":
        return GammaFlowPotential(int(obj["n"]), float(obj["s"]))
    if kind == "grid":
        return GridPotential(obj["values"])
    raise ValueError(f"unknown potential type {kind!r}")
