"""Planar domains, their invariants and the two corner functionals.

Edge order is fixed per variant so boundary-condition patterns are
unambiguous in files and on the command line:

* ``Rectangle``: (bottom, right, top, left) for [0, a] x [0, b].
* ``RightIsoTriangle``: (horizontal leg, vertical leg, hypotenuse) for the
  triangle with vertices (0, 0), (leg, 0), (leg, leg).

A ``Union`` stores no placement; only spectral additivity is ever used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterator, Sequence, Union as _U

import numpy as np

from .errors import InvalidAngle, InvalidRatio, UnsupportedConfiguration
from .quadrature import adaptive_gk


class BC(str, Enum):
    D = "D"
    N = "N"

    @property
    def is_dirichlet(self) -> bool:
        return self is BC.D


def _bcs(values: Sequence, n: int) -> tuple[BC, ...]:
    out = tuple(BC(v.value if isinstance(v, BC) else str(v).upper()[:1]) for v in values)
    if len(out) != n:
        raise ValueError(f"expected {n} boundary conditions, got {len(out)}")
    return out


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (value > 0 and math.isfinite(value)):
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")
    return value


@dataclass(frozen=True)
class Rectangle:
    a: float
    b: float
    bc: tuple[BC, BC, BC, BC] = (BC.D, BC.D, BC.D, BC.D)

    def __post_init__(self):
        object.__setattr__(self, "a", _positive("a", self.a))
        object.__setattr__(self, "b", _positive("b", self.b))
        object.__setattr__(self, "bc", _bcs(self.bc, 4))


@dataclass(frozen=True)
class RightIsoTriangle:
    leg: float
    bc: tuple[BC, BC, BC] = (BC.D, BC.D, BC.D)

    def __post_init__(self):
        object.__setattr__(self, "leg", _positive("leg", self.leg))
        object.__setattr__(self, "bc", _bcs(self.bc, 3))


@dataclass(frozen=True)
class Scaled:
    inner: "Domain"
    alpha: float

    def __post_init__(self):
        alpha = float(self.alpha)
        if not (alpha > 0 and math.isfinite(alpha)):
            raise InvalidRatio(f"scale factor must be positive, got {self.alpha!r}")
        object.__setattr__(self, "alpha", alpha)


@dataclass(frozen=True)
class Union:
    parts: tuple["Domain", ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts:
            raise ValueError("Union needs at least one part")
        object.__setattr__(self, "parts", parts)


Domain = _U[Rectangle, RightIsoTriangle, Scaled, Union]
Polygon = _U[Rectangle, RightIsoTriangle]


def union(*parts: Domain) -> Union:
    return Union(tuple(parts))


def components(d: Domain, alpha: float = 1.0) -> Iterator[tuple[Polygon, float]]:
    """Yield ``(polygon, scale)`` for every connected piece, depth first."""
    if isinstance(d, (Rectangle, RightIsoTriangle)):
        yield d, alpha
    elif isinstance(d, Scaled):
        yield from components(d.inner, alpha * d.alpha)
    elif isinstance(d, Union):
        for part in d.parts:
            yield from components(part, alpha)
    else:
        raise TypeError(f"not a domain: {d!r}")


def scale(d: Domain, alpha: float) -> Domain:
    """Similarity copy ``alpha * d``; concrete variants are rescaled in place."""
    alpha = float(alpha)
    if not (alpha > 0 and math.isfinite(alpha)):
        raise InvalidRatio(f"scale factor must be positive, got {alpha!r}")
    if isinstance(d, Rectangle):
        return Rectangle(alpha * d.a, alpha * d.b, d.bc)
    if isinstance(d, RightIsoTriangle):
        return RightIsoTriangle(alpha * d.leg, d.bc)
    if isinstance(d, Scaled):
        return Scaled(d.inner, alpha * d.alpha)
    if isinstance(d, Union):
        return Union(tuple(scale(p, alpha) for p in d.parts))
    raise TypeError(f"not a domain: {d!r}")


@dataclass(frozen=True)
class Corner:
    angle: float
    left_bc: BC
    right_bc: BC
    component: int = 0

    @property
    def kind(self) -> str:
        return "".join(sorted(self.left_bc.value + self.right_bc.value))


@dataclass(frozen=True)
class PolygonInvariants:
    area: float
    boundary_length: float
    dirichlet_length: float
    corners: tuple[Corner, ...]
    # every component has at most one Neumann edge, so it is half of a
    # Dirichlet double obtained by reflecting across that edge
    halving_applicable: bool = True
    neumann_edges: tuple[int, ...] = field(default=())

    @property
    def all_dirichlet(self) -> bool:
        return all(n == 0 for n in self.neumann_edges)


def _polygon_pieces(p: Polygon) -> tuple[float, list[float], list[Corner]]:
    if isinstance(p, Rectangle):
        edges = [p.a, p.b, p.a, p.b]
        corners = [Corner(math.pi / 2, p.bc[i], p.bc[(i + 1) % 4]) for i in range(4)]
        return p.a * p.b, edges, corners
    c = p.leg
    edges = [c, c, c * math.sqrt(2.0)]
    h, v, hyp = p.bc
    corners = [
        Corner(math.pi / 2, h, v),
        Corner(math.pi / 4, v, hyp),
        Corner(math.pi / 4, hyp, h),
    ]
    return 0.5 * c * c, edges, corners


def polygon_invariants(d: Domain) -> PolygonInvariants:
    area = boundary = dirichlet = 0.0
    corners: list[Corner] = []
    neumann: list[int] = []
    for idx, (poly, alpha) in enumerate(components(d)):
        a, edges, cs = _polygon_pieces(poly)
        area += alpha * alpha * a
        boundary += alpha * sum(edges)
        dirichlet += alpha * sum(e for e, bc in zip(edges, poly.bc) if bc is BC.D)
        corners.extend(Corner(k.angle, k.left_bc, k.right_bc, idx) for k in cs)
        neumann.append(sum(bc is BC.N for bc in poly.bc))
    return PolygonInvariants(
        area=area,
        boundary_length=boundary,
        dirichlet_length=dirichlet,
        corners=tuple(corners),
        halving_applicable=all(n <= 1 for n in neumann),
        neumann_edges=tuple(neumann),
    )


def vertex_term(p: PolygonInvariants) -> float:
    """Corner contribution sum (pi^2 - g^2) / (24 pi g) to the heat trace."""
    if any(k.kind != "DD" for k in p.corners):
        raise UnsupportedConfiguration("vertex term is only defined for Dirichlet-Dirichlet corners")
    return sum((math.pi**2 - k.angle**2) / (24 * math.pi * k.angle) for k in p.corners)


def _corner_integrand(gamma: float):
    pg = math.pi - gamma
    limit0 = 4.0 * pg / math.pi

    def f(x):
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        small = x < 1e-8
        xs = x[~small]
        # exponential form; finite for arbitrarily large x
        num = -np.expm1(-2.0 * pg * xs)
        den = -np.expm1(-2.0 * math.pi * xs) * (1.0 + np.exp(-2.0 * gamma * xs))
        out[~small] = 8.0 * np.exp(-2.0 * gamma * xs) * num / den
        out[small] = limit0
        return out

    return f


def corner_cutoff(gamma: float, tol: float) -> float:
    """Truncation point X with analytic tail bound below ``tol / 2``.

    For x >= 1 the integrand is at most 8 exp(-2 g x) / (1 - exp(-2 pi)).
    """
    k = 1.0 / (1.0 - math.exp(-2.0 * math.pi))
    return max(1.0, math.log(2.0 * 8.0 * k / (2.0 * gamma * tol)) / (2.0 * gamma))


def corner_tail_bound(gamma: float, cutoff: float) -> float:
    k = 1.0 / (1.0 - math.exp(-2.0 * math.pi * cutoff))
    return 8.0 * k * math.exp(-2.0 * gamma * cutoff) / (2.0 * gamma)


@lru_cache(maxsize=256)
def corner_coefficient(gamma: float, tol: float = 1e-12) -> float:
    """Heat-content coefficient of a Dirichlet corner with opening ``gamma``.

    Integral of 4 sinh((pi - g) x) / (sinh(pi x) cosh(g x)) over [0, inf),
    accurate to ``tol`` (quadrature error plus analytic tail bound).
    """
    gamma = float(gamma)
    if not (0.0 < gamma <= math.pi):
        raise InvalidAngle(f"corner angle must lie in (0, pi], got {gamma!r}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if gamma == math.pi:
        return 0.0
    cutoff = corner_cutoff(gamma, tol)
    value, _ = adaptive_gk(_corner_integrand(gamma), 0.0, cutoff, tol=0.5 * tol)
    return value
