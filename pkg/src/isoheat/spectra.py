"""Closed-form Dirichlet/Neumann spectra of rectangles and right isosceles triangles.

Every mode carries its eigenvalue and ``coeff_sq``, the squared integral of
the L2-normalised eigenfunction (the Fourier coefficient of the constant 1).

Supported families
------------------
Rectangle, any per-edge pattern except Neumann on all four edges. Each axis
contributes a 1-D family: D-D ``sin(k pi x / L)``, D-N ``sin((k - 1/2) pi x / L)``,
N-N ``cos(k pi x / L)`` with k >= 0.

Right isosceles triangle with leg c:

* all Dirichlet: ``psi_ij = F_ij - F_ji`` with i > j >= 1 (parity ``anti``),
  where ``F_ij = sin(i pi x / c) sin(j pi y / c)``;
* Neumann hypotenuse: symmetric sums ``F_ij + F_ji`` with i >= j >= 1 (``sym``),
  the half of the Dirichlet square across its diagonal;
* Neumann on one leg: the Dirichlet triangle with leg c*sqrt(2) reflected across
  that leg, keeping modes with i + j odd (``odd``) and half their ``coeff_sq``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import UnsupportedDomain
from .geometry import BC, Domain, Polygon, Rectangle, RightIsoTriangle, components, polygon_invariants

PI = math.pi
PI2 = math.pi**2

PARITY_CODES = ("", "anti", "sym", "odd")


@dataclass(frozen=True)
class Mode:
    lam: float
    coeff_sq: float
    component: int
    idx1: int
    idx2: int
    parity: str = ""

    @property
    def label(self) -> tuple[int, int, int, str]:
        return (self.component, self.idx1, self.idx2, self.parity)


@dataclass(frozen=True)
class ModeStream:
    """All modes with eigenvalue <= ``cutoff``, sorted by (lam, component, idx1, idx2)."""

    lam: np.ndarray
    coeff_sq: np.ndarray
    component: np.ndarray
    idx1: np.ndarray
    idx2: np.ndarray
    parity: np.ndarray  # integer codes into PARITY_CODES
    cutoff: float

    def __len__(self) -> int:
        return len(self.lam)

    def __getitem__(self, k: int) -> Mode:
        return Mode(
            float(self.lam[k]),
            float(self.coeff_sq[k]),
            int(self.component[k]),
            int(self.idx1[k]),
            int(self.idx2[k]),
            PARITY_CODES[int(self.parity[k])],
        )

    def __iter__(self) -> Iterator[Mode]:
        return (self[k] for k in range(len(self)))

    def rows(self) -> list[tuple]:
        return [(m.lam, m.coeff_sq, m.component, m.idx1, m.idx2, m.parity) for m in self]


# -- one-dimensional factors -------------------------------------------------

def axis_family(start: BC, end: BC) -> str:
    if start is BC.D and end is BC.D:
        return "DD"
    if start is BC.N and end is BC.N:
        return "NN"
    return "DN"


def axis_modes(L: float, family: str, Lambda: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """1-D modes on [0, L] with omega^2 <= Lambda: (index k, omega^2, coeff_sq)."""
    kmax = int(math.ceil(L * math.sqrt(max(Lambda, 0.0)) / PI)) + 1
    if family == "NN":
        k = np.arange(0, kmax + 1)
        freq = k.astype(float)
        coeff = np.where(k == 0, L, 0.0)
    elif family == "DD":
        k = np.arange(1, kmax + 1)
        freq = k.astype(float)
        coeff = np.where(k % 2 == 1, 8.0 * L / (PI2 * freq**2), 0.0)
    elif family == "DN":
        k = np.arange(1, kmax + 2)
        freq = k - 0.5
        coeff = 2.0 * L / (PI2 * freq**2)
    else:
        raise ValueError(family)
    omega2 = PI2 * (freq / L) ** 2
    keep = omega2 <= Lambda
    return k[keep], omega2[keep], coeff[keep]


# -- triangle integrals ------------------------------------------------------

def _sine_integral(i: np.ndarray) -> np.ndarray:
    """Integral of sin(i pi x) over [0, 1]."""
    return (1.0 - (-1.0) ** i) / (PI * i)


def _lower_triangle_integral(i: np.ndarray, j: np.ndarray) -> np.ndarray:
    """Integral of sin(i pi x) sin(j pi y) over 0 < y < x < 1, for i != j."""
    s = i + j
    d = i - j
    sin_cos = 0.5 * ((1.0 - (-1.0) ** s) / (PI * s) + (1.0 - (-1.0) ** d) / (PI * d))
    return (_sine_integral(i) - sin_cos) / (PI * j)


def triangle_psi_integral(i, j, c: float = 1.0):
    """Integral of psi_ij = F_ij - F_ji over the triangle 0 < y < x < c (i > j)."""
    i = np.asarray(i, dtype=float)
    j = np.asarray(j, dtype=float)
    square = _sine_integral(i) * _sine_integral(j)
    return c * c * (2.0 * _lower_triangle_integral(i, j) - square)


def triangle_coeff_sq(i, j, c: float = 1.0):
    """(int psi_ij)^2 / ||psi_ij||^2 for the Dirichlet triangle; ||psi_ij||^2 = c^2/4."""
    return triangle_psi_integral(i, j, c) ** 2 / (0.25 * c * c)


def _sym_coeff_sq(i, j, c: float):
    i = np.asarray(i, dtype=float)
    j = np.asarray(j, dtype=float)
    square = c * c * _sine_integral(i) * _sine_integral(j)
    # half of the symmetric square mode: i > j has norm^2 c^2/4 on the
    # triangle, the diagonal modes c^2/8
    return np.where(i == j, 2.0 * square**2 / (c * c), 4.0 * square**2 / (c * c))


# -- per-polygon enumeration -------------------------------------------------

def triangle_kind(t: RightIsoTriangle) -> str:
    h, v, hyp = t.bc
    if h is BC.D and v is BC.D:
        return "dirichlet" if hyp is BC.D else "neumann_hyp"
    if hyp is BC.D and (h is BC.D) != (v is BC.D):
        return "neumann_leg"
    raise UnsupportedDomain(f"triangle boundary pattern {''.join(b.value for b in t.bc)} is not supported")


def check_supported(d: Domain) -> None:
    for poly, _ in components(d):
        if isinstance(poly, Rectangle):
            if all(b is BC.N for b in poly.bc):
                raise UnsupportedDomain("all-Neumann rectangle has a zero mode")
        else:
            triangle_kind(poly)


def _index_grid(kmax: int):
    ii, jj = np.meshgrid(np.arange(1, kmax + 1), np.arange(1, kmax + 1), indexing="ij")
    return ii.ravel(), jj.ravel()


def polygon_modes(p: Polygon, Lambda: float):
    """Unsorted (lam, coeff_sq, idx1, idx2, parity_code) of one unscaled polygon."""
    if isinstance(p, Rectangle):
        bottom, right, top, left = p.bc
        fx, fy = axis_family(left, right), axis_family(bottom, top)
        if fx == "NN" and fy == "NN":
            raise UnsupportedDomain("all-Neumann rectangle has a zero mode")
        kx, wx, cx = axis_modes(p.a, fx, Lambda)
        ky, wy, cy = axis_modes(p.b, fy, Lambda)
        lam = (wx[:, None] + wy[None, :]).ravel()
        coeff = (cx[:, None] * cy[None, :]).ravel()
        n = np.repeat(kx, len(ky))
        m = np.tile(ky, len(kx))
        keep = lam <= Lambda
        return lam[keep], coeff[keep], n[keep], m[keep], np.zeros(keep.sum(), dtype=int)

    kind = triangle_kind(p)
    c = p.leg if kind != "neumann_leg" else p.leg * math.sqrt(2.0)
    kmax = int(math.ceil(c * math.sqrt(max(Lambda, 0.0)) / PI)) + 1
    i, j = _index_grid(kmax)
    lam = PI2 * (i.astype(float) ** 2 + j.astype(float) ** 2) / (c * c)
    if kind == "dirichlet":
        keep = (i > j) & (lam <= Lambda)
        i, j, lam = i[keep], j[keep], lam[keep]
        return lam, triangle_coeff_sq(i, j, c), i, j, np.full(len(i), 1)
    if kind == "neumann_hyp":
        keep = (i >= j) & (lam <= Lambda)
        i, j, lam = i[keep], j[keep], lam[keep]
        return lam, _sym_coeff_sq(i, j, c), i, j, np.full(len(i), 2)
    keep = (i > j) & ((i + j) % 2 == 1) & (lam <= Lambda)
    i, j, lam = i[keep], j[keep], lam[keep]
    return lam, 0.5 * triangle_coeff_sq(i, j, c), i, j, np.full(len(i), 3)


def enumerate_modes(d: Domain, Lambda: float) -> ModeStream:
    """All modes of ``d`` with eigenvalue <= Lambda, exact multiplicity, sorted."""
    Lambda = float(Lambda)
    parts = []
    for comp, (poly, alpha) in enumerate(components(d)):
        lam, coeff, i1, i2, par = polygon_modes(poly, Lambda * alpha * alpha)
        parts.append((lam / (alpha * alpha), coeff * alpha * alpha, np.full(len(lam), comp), i1, i2, par))
    lam, coeff, comp, i1, i2, par = (np.concatenate(x) for x in zip(*parts))
    order = np.lexsort((i2, i1, comp, lam))
    return ModeStream(
        lam=lam[order],
        coeff_sq=coeff[order],
        component=comp[order].astype(int),
        idx1=i1[order].astype(int),
        idx2=i2[order].astype(int),
        parity=par[order].astype(int),
        cutoff=Lambda,
    )


def fourier_coeff_sq(poly: Polygon, idx1: int, idx2: int, alpha: float = 1.0) -> float:
    """(integral of the normalised eigenfunction)^2 for one labelled mode of ``alpha * poly``."""
    if isinstance(poly, Rectangle):
        bottom, right, top, left = poly.bc
        value = _axis_coeff(poly.a, axis_family(left, right), idx1) * _axis_coeff(
            poly.b, axis_family(bottom, top), idx2
        )
    else:
        kind = triangle_kind(poly)
        if kind == "dirichlet":
            value = float(triangle_coeff_sq(idx1, idx2, poly.leg)) if idx1 > idx2 else 0.0
        elif kind == "neumann_hyp":
            value = float(_sym_coeff_sq(idx1, idx2, poly.leg)) if idx1 >= idx2 else 0.0
        else:
            ok = idx1 > idx2 and (idx1 + idx2) % 2 == 1
            value = 0.5 * float(triangle_coeff_sq(idx1, idx2, poly.leg * math.sqrt(2.0))) if ok else 0.0
    return value * alpha * alpha


def _axis_coeff(L: float, family: str, k: int) -> float:
    if family == "NN":
        return L if k == 0 else 0.0
    if family == "DD":
        return 8.0 * L / (PI2 * k * k) if k % 2 == 1 else 0.0
    return 2.0 * L / (PI2 * (k - 0.5) ** 2)


def default_eig_tol(lam) -> np.ndarray:
    return 1e-9 * np.maximum(1.0, np.abs(lam))


def first_eigenvalues(d: Domain, count: int) -> np.ndarray:
    """The ``count`` lowest eigenvalues of ``d`` with multiplicity."""
    if count < 1:
        raise ValueError("count must be >= 1")
    check_supported(d)
    area = polygon_invariants(d).area
    Lambda = 4.0 * PI * count / area * 1.5 + 50.0
    while True:
        stream = enumerate_modes(d, Lambda)
        if len(stream) >= count:
            return stream.lam[:count].copy()
        Lambda *= 2.0


@dataclass(frozen=True)
class IsospectralResult:
    equal: bool
    first_mismatch: int | None  # 1-based eigenvalue index
    count: int


def isospectral_check(d1: Domain, d2: Domain, count: int, tol: float | None = None) -> IsospectralResult:
    """Compare the first ``count`` eigenvalues with multiplicity.

    ``tol`` is an absolute tolerance; by default 1e-9 * max(1, lambda).
    """
    l1 = first_eigenvalues(d1, count)
    l2 = first_eigenvalues(d2, count)
    bound = default_eig_tol(np.maximum(l1, l2)) if tol is None else tol
    bad = np.flatnonzero(np.abs(l1 - l2) > bound)
    if len(bad):
        return IsospectralResult(False, int(bad[0]) + 1, count)
    return IsospectralResult(True, None, count)
