"""Shooting eigensolver for -y'' + q y = lambda y on [0, 1], y(0) = y(1) = 0.

Index certification uses the Pruefer phase: with y = rho sin(theta),
y' = k rho cos(theta) for a fixed scale k > 0,

    theta' = k cos^2(theta) + (lambda - q) / k * sin^2(theta),  theta(0) = 0,

and lambda_j is the unique root of theta(1; lambda) = j pi. The phase is
increasing in lambda, and min-max gives the bracket
j^2 pi^2 + min q <= lambda_j <= j^2 pi^2 + max q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import erfc

from ..errors import BracketFailure, NonpositiveTime, SolverFailure, ToleranceNotMet
from ..heatfun import HeatValue
from .potential import DEFAULT_GRID, Potential, uniform_grid

PI = math.pi
RTOL = 1e-12
ATOL = 1e-14
MAX_NEWTON = 60


@dataclass(frozen=True)
class FundamentalSolutions:
    lam: float
    x: np.ndarray
    y1: np.ndarray
    dy1: np.ndarray
    y2: np.ndarray
    dy2: np.ndarray

    @property
    def wronskian(self) -> np.ndarray:
        return self.y1 * self.dy2 - self.dy1 * self.y2


@dataclass(frozen=True)
class EigenPair:
    """Normalised Dirichlet eigenfunction with phi'(0) > 0.

    ``phi`` and ``dphi`` accept scalars or arrays on [0, 1].
    """

    index: int
    lam: float
    integral: float
    phi: Callable
    dphi: Callable


def _solve(rhs, y0, x_eval=None, dense=False, rtol=RTOL, atol=ATOL, max_step=math.inf):
    sol = solve_ivp(
        rhs, (0.0, 1.0), np.asarray(y0, dtype=float), method="DOP853",
        t_eval=x_eval, dense_output=dense, rtol=rtol, atol=atol, max_step=max_step,
    )
    if not sol.success or not np.all(np.isfinite(sol.y)):
        raise SolverFailure(f"integration failed: {sol.message}")
    return sol


def fundamental_solutions(q: Potential, lam: float, x=None) -> FundamentalSolutions:
    """y1 (y(0)=1, y'(0)=0) and y2 (y(0)=0, y'(0)=1) with derivatives on a grid."""
    x = uniform_grid(DEFAULT_GRID) if x is None else np.asarray(x, dtype=float)
    qs = q.scalar

    def rhs(s, z):
        c = qs(s) - lam
        return [z[1], c * z[0], z[3], c * z[2]]

    sol = _solve(rhs, [1.0, 0.0, 0.0, 1.0], x_eval=x, max_step=q.max_step)
    y1, dy1, y2, dy2 = sol.y
    return FundamentalSolutions(float(lam), x, y1, dy1, y2, dy2)


# -- Pruefer phase -------------------------------------------------------------

def _scale(lam: np.ndarray, qmean: float) -> np.ndarray:
    return np.sqrt(np.maximum(lam - qmean, 1.0))


def prufer_phase(q: Potential, lam, k=None) -> tuple[np.ndarray, np.ndarray]:
    """theta(1; lambda) and d theta(1; lambda) / d lambda for a vector of lambdas."""
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    k = _scale(lam, q.mean) if k is None else np.broadcast_to(np.asarray(k, dtype=float), lam.shape)
    m = len(lam)
    qs = q.scalar

    def rhs(x, z):
        th, d = z[:m], z[m:]
        s, c = np.sin(th), np.cos(th)
        r = (lam - qs(x)) / k
        return np.concatenate([k * c * c + r * s * s, s * s / k + 2.0 * s * c * (r - k) * d])

    sol = _solve(rhs, np.zeros(2 * m), rtol=1e-13, atol=1e-13, max_step=q.max_step)
    end = sol.y[:, -1]
    return end[:m], end[m:]


def default_eigen_tol(lam: float) -> float:
    return 1e-12 * max(1.0, abs(lam))


def dirichlet_eigenvalues(q: Potential, indices: Sequence[int] | int, tol: float | None = None,
                          guess=None) -> np.ndarray:
    """Eigenvalues lambda_j for the given 1-based indices (an int J means 1..J)."""
    js = np.arange(1, indices + 1) if isinstance(indices, (int, np.integer)) else np.asarray(indices)
    if js.size == 0 or js.min() < 1:
        raise ValueError("eigenvalue indices must be >= 1")
    js = js.astype(float)
    qlo, qhi = q.bounds()
    base = js * js * PI * PI
    pad = 1e-9 * np.maximum(1.0, base)
    lo, hi = base + qlo - pad, base + qhi + pad
    target = js * PI
    lam = np.clip(base + q.mean if guess is None else np.asarray(guess, dtype=float), lo, hi)
    k = _scale(lam, q.mean)

    th_lo, _ = prufer_phase(q, lo, k)
    th_hi, _ = prufer_phase(q, hi, k)
    bad = ~((th_lo < target) & (th_hi > target))
    if bad.any():
        j = int(js[bad][0])
        raise BracketFailure(
            f"phase does not bracket index {j}: theta(lo)={th_lo[bad][0]:.6g}, "
            f"theta(hi)={th_hi[bad][0]:.6g}, target={j * PI:.6g}"
        )

    active = np.ones(len(js), dtype=bool)
    for _ in range(MAX_NEWTON):
        th, dth = prufer_phase(q, lam[active], k[active])
        f = th - target[active]
        idx = np.flatnonzero(active)
        lo[idx] = np.where(f < 0, lam[idx], lo[idx])
        hi[idx] = np.where(f > 0, lam[idx], hi[idx])
        step = f / dth
        new = lam[idx] - step
        outside = (new < lo[idx]) | (new > hi[idx])
        new = np.where(outside, 0.5 * (lo[idx] + hi[idx]), new)
        change = np.abs(new - lam[idx])
        lam[idx] = new
        tol_j = np.array([default_eigen_tol(v) if tol is None else tol for v in new])
        # a sign-certified bracket of width <= 2 tol pins the root to tol at
        # its midpoint; Newton can ping-pong across it at the phase noise floor
        tight = hi[idx] - lo[idx] <= 2.0 * tol_j
        lam[idx] = np.where(tight, 0.5 * (lo[idx] + hi[idx]), lam[idx])
        done = ((change <= tol_j) & ~outside) | tight
        active[idx[done]] = False
        if not active.any():
            return lam
    raise ToleranceNotMet(f"eigenvalue iteration did not converge for indices {js[active].astype(int).tolist()}")


# -- eigenfunctions ------------------------------------------------------------

def _shoot_y2(q: Potential, lam: np.ndarray, dense: bool):
    """y2, y2', int y2, int y2^2 for each lambda (vectorised)."""
    m = len(lam)
    qs = q.scalar

    def rhs(x, z):
        y, dy = z[:m], z[m:2 * m]
        return np.concatenate([dy, (qs(x) - lam) * y, y, y * y])

    y0 = np.zeros(4 * m)
    y0[m:2 * m] = 1.0
    return _solve(rhs, y0, dense=dense, max_step=q.max_step)


def dirichlet_eigen(q: Potential, J: int, tol: float | None = None, functions: bool = True) -> list[EigenPair]:
    """First J Dirichlet eigenpairs of L_q.

    With ``functions=False`` the ``phi``/``dphi`` handles are omitted (None),
    which skips storing the dense solution.
    """
    if J < 1:
        raise ValueError("J must be >= 1")
    lam = dirichlet_eigenvalues(q, J, tol)
    return eigenpairs_at(q, lam, np.arange(1, J + 1), functions)


def eigenpairs_at(q: Potential, lam: np.ndarray, indices, functions: bool = True) -> list[EigenPair]:
    lam = np.asarray(lam, dtype=float)
    m = len(lam)
    sol = _shoot_y2(q, lam, functions)
    end = sol.y[:, -1]
    norm = np.sqrt(end[3 * m:4 * m])
    integral = end[2 * m:3 * m] / norm
    pairs = []
    for i, j in enumerate(indices):
        if functions:
            phi = _component(sol.sol, i, norm[i])
            dphi = _component(sol.sol, m + i, norm[i])
        else:
            phi = dphi = None
        pairs.append(EigenPair(int(j), float(lam[i]), float(integral[i]), phi, dphi))
    return pairs


def _component(dense, row: int, norm: float):
    def f(x):
        x = np.asarray(x, dtype=float)
        v = dense(np.clip(x.ravel(), 0.0, 1.0))[row] / norm
        return v.reshape(x.shape) if x.ndim else float(v[0])
    return f


# -- heat content --------------------------------------------------------------

def content_modes(q: Potential, t: float, eps: float) -> tuple[int, float]:
    """Smallest J with sum_{j>J} exp(-t lambda_j) <= eps, using lambda_j >= pi^2 j^2 + min q."""
    qlo, _ = q.bounds()
    a = t * PI * PI
    half = 0.5 * math.sqrt(PI / a)
    shift = math.exp(-t * qlo)
    J = 1
    while True:
        tail = shift * half * float(erfc(math.sqrt(a) * J))
        if tail <= eps:
            return J, tail
        J += max(1, J // 4)


def heat_content_q(q: Potential, t: float, eps: float = 1e-12) -> HeatValue:
    """Q_q(t) = sum_j exp(-t lambda_j) (int phi_j)^2 with a certified tail (Bessel: (int phi)^2 <= 1)."""
    t = float(t)
    if not t > 0:
        raise NonpositiveTime(f"t must be positive, got {t!r}")
    J, tail = content_modes(q, t, eps)
    pairs = dirichlet_eigen(q, J, functions=False)
    lam = np.array([p.lam for p in pairs])
    h = np.array([p.integral for p in pairs])
    return HeatValue(float(np.dot(np.exp(-t * lam), h * h)), tail, t, J)


def heat_content_curve(q: Potential, ts: Sequence[float], eps: float = 1e-12) -> list[HeatValue]:
    """Q_q on several times from one eigen-decomposition (sized for the smallest t)."""
    ts = [float(t) for t in ts]
    if min(ts) <= 0:
        raise NonpositiveTime("all times must be positive")
    J, _ = content_modes(q, min(ts), eps)
    pairs = dirichlet_eigen(q, J, functions=False)
    lam = np.array([p.lam for p in pairs])
    h2 = np.array([p.integral for p in pairs]) ** 2
    out = []
    for t in ts:
        _, tail = _tail_at(q, t, J)
        out.append(HeatValue(float(np.dot(np.exp(-t * lam), h2)), tail, t, J))
    return out


def _tail_at(q: Potential, t: float, J: int) -> tuple[int, float]:
    qlo, _ = q.bounds()
    a = t * PI * PI
    return J, math.exp(-t * qlo) * 0.5 * math.sqrt(PI / a) * float(erfc(math.sqrt(a) * J))
