"""Claim-reproduction reports: one deterministic computation plan per claim id.

Each check passes iff |value - expected| <= tol (booleans: value == expected).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import catalog
from .fractal import (
    SelfSimilarBand,
    band_heat_content,
    band_heat_trace,
    content_expansion,
    log_coefficients,
    renewal_remainder,
    trace_expansion,
    trace_remainder,
    trace_U,
)
from .geometry import polygon_invariants
from .heatfun import fit_small_time, heat_content, large_time_leading
from .spectra import PI, enumerate_modes, isospectral_check
from .sturm.flows import (
    dQ_gamma_at_zero,
    dQ_xi_finite_difference,
    dQ_xi_first_order,
    dQ_xi_series,
    gamma_flow,
    gamma_heat_content,
    h_coefficient,
    xi_flow,
)
from .sturm.solver import dirichlet_eigenvalues

SQRT_PI = math.sqrt(PI)
SQRT2 = math.sqrt(2.0)

CLAIMS = (
    "example3",
    "example4",
    "example6",
    "theorem1",
    "corollary2",
    "corollary3",
    "bands_minus_EF",
    "corollary5",
    "theorem4_band",
    "schrod_theorem3",
    "schrod_corollary4",
    "schrod_xi",
)


@dataclass(frozen=True)
class Check:
    name: str
    value: Any
    expected: Any
    tol: float | None
    passed: bool
    provenance: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "expected": self.expected,
            "tol": self.tol,
            "pass": self.passed,
            "provenance": self.provenance,
        }


@dataclass(frozen=True)
class ReportSpec:
    claim: str
    tolerances: dict[str, float] = field(default_factory=dict)
    timing: bool = False


@dataclass(frozen=True)
class ReportResult:
    claim: str
    checks: tuple[Check, ...]
    runtime_ms: float | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "checks": [c.to_dict() for c in self.checks],
            "runtime_ms": self.runtime_ms,
        }


class UnknownClaim(ValueError):
    pass


class _Plan:
    """Collects checks, applying tolerance overrides by check name."""

    def __init__(self, overrides: dict[str, float]):
        self.overrides = overrides
        self.checks: list[Check] = []

    def close(self, name: str, value: float, expected: float, tol: float, provenance: str = "") -> None:
        tol = float(self.overrides.get(name, tol))
        value, expected = float(value), float(expected)
        ok = bool(math.isfinite(value) and abs(value - expected) <= tol)
        self.checks.append(Check(name, value, expected, tol, ok, provenance))

    def rel(self, name: str, value: float, expected: float, rtol: float, provenance: str = "") -> None:
        """Relative check; tol is reported in absolute units."""
        rtol = float(self.overrides.get(name, rtol))
        self.close(name, value, expected, rtol * abs(expected), provenance)

    def below(self, name: str, value: float, bound: float, provenance: str = "") -> None:
        self.close(name, abs(value), 0.0, bound, provenance)

    def flag(self, name: str, value: bool, expected: bool = True, provenance: str = "") -> None:
        self.checks.append(Check(name, bool(value), bool(expected), None, bool(value) == bool(expected), provenance))


def _multiplicity(d, lam: float) -> int:
    stream = enumerate_modes(d, lam * (1 + 1e-6))
    return int(np.sum(np.abs(stream.lam - lam) <= 1e-9 * lam))


def _large_time(plan: _Plan, label: str, d, lam1: float, amp: float, t: float = 3.0, allow_degenerate=False):
    lt = large_time_leading(d, allow_degenerate=allow_degenerate)
    plan.close(f"lambda1_{label}", lt.lambda1, lam1, 1e-9 * lam1, "formula")
    plan.close(f"amplitude_{label}", lt.amplitude, amp, 1e-12 * amp, "formula")
    area = polygon_invariants(d).area
    bound = math.exp(-(lt.lambda2 - lt.lambda1) * t) * area
    q = heat_content(d, t, 1e-30)
    plan.close(f"scaled_content_{label}_t{t:g}", math.exp(lam1 * t) * q.value, amp, bound, "series")
    return lt


# -- planar claims ---------------------------------------------------------------

def _example3(plan: _Plan) -> None:
    A, B = catalog.example3()
    for t in (0.01, 0.1, 1.0):
        qa, qb = heat_content(A, t), heat_content(B, t)
        plan.close(f"content_difference_t{t:g}", qa.value - qb.value, 0.0,
                   2.0 * max(qa.tail_bound, qb.tail_bound), "series")
    lam = 5 * PI**2 / 4
    plan.close("multiplicity_A", _multiplicity(A, lam), 1, 0.0, "formula")
    plan.close("multiplicity_B", _multiplicity(B, lam), 2, 0.0, "formula")
    res = isospectral_check(A, B, 10)
    plan.flag("isospectral", res.equal, False, "formula")


def _example4(plan: _Plan) -> None:
    A, B = catalog.example4()
    plan.flag("isospectral_1000", isospectral_check(A, B, 1000, tol=1e-9).equal, True, "formula")
    for label, d, b1 in (("A", A, -12 / SQRT_PI), ("B", B, -14 / SQRT_PI)):
        fit = fit_small_time(d)
        plan.rel(f"b1_{label}", fit.b1, b1, 1e-3, "fit")
        plan.rel(f"b0_{label}", fit.b0, polygon_invariants(d).area, 1e-8, "fit")


def _dirichlet_lengths(plan: _Plan) -> None:
    a, b = catalog.bands_minus_ef()
    plan.close("dirichlet_length_A_minus_E", polygon_invariants(a).dirichlet_length, 6 + 2 * SQRT2, 1e-12, "formula")
    plan.close("dirichlet_length_B_minus_F", polygon_invariants(b).dirichlet_length, 7 + SQRT2, 1e-12, "formula")


def _example6(plan: _Plan) -> None:
    E, F = catalog.example6()
    plan.flag("isospectral_1000", isospectral_check(E, F, 1000, tol=1e-9).equal, True, "formula")
    for label, d, b1 in (("E", E, -6 / SQRT_PI), ("F", F, -2 * (2 + SQRT2) / SQRT_PI)):
        plan.rel(f"b1_{label}", fit_small_time(d).b1, b1, 1e-3, "fit")
    _dirichlet_lengths(plan)


def _theorem1(plan: _Plan) -> None:
    A, B = catalog.chapman_pair()
    plan.flag("isospectral_1000", isospectral_check(A, B, 1000, tol=1e-9).equal, True, "formula")
    lam = 5 * PI**2 / 4
    la = _large_time(plan, "A", A, lam, 1024 / (9 * PI**4))
    lb = _large_time(plan, "B", B, lam, 1152 / (9 * PI**4))
    plan.close("lambda2_A", la.lambda2, 2 * PI**2, 1e-9 * 2 * PI**2, "formula")
    plan.close("lambda2_B", lb.lambda2, 2 * PI**2, 1e-9 * 2 * PI**2, "formula")
    plan.flag("isoheat", abs(la.amplitude - lb.amplitude) <= 1e-12, False, "formula")


def _corollary2(plan: _Plan) -> None:
    C, D = catalog.truncated_chapman(24)
    plan.flag("isospectral_500_truncated", isospectral_check(C, D, 500, tol=1e-9).equal, True, "formula")
    lam = 5 * PI**2 / 4
    _large_time(plan, "C", C, lam, 1024 / (9 * PI**4))
    _large_time(plan, "D", D, lam, 1152 / (9 * PI**4))
    for t in (1.0, 2.0, 3.0):
        qc, qd = heat_content(C, t, 1e-30).value, heat_content(D, t, 1e-30).value
        plan.flag(f"Q_C_below_Q_D_t{t:g}", qc < qd, True, "series")


def _corollary3(plan: _Plan) -> None:
    A, B = catalog.three_piece_bands()
    plan.flag("isospectral_500", isospectral_check(A, B, 500, tol=1e-9).equal, True, "formula")
    lam = 5 * PI**2 / 4
    _large_time(plan, "A", A, lam, 1600 / (9 * PI**4), allow_degenerate=True)
    _large_time(plan, "B", B, lam, 1664 / (9 * PI**4), allow_degenerate=True)


def _bands_minus_ef(plan: _Plan) -> None:
    a, b = catalog.bands_minus_ef()
    plan.flag("isospectral_500", isospectral_check(a, b, 500, tol=1e-9).equal, True, "formula")
    _dirichlet_lengths(plan)
    plan.rel("b1_A_minus_E", fit_small_time(a).b1, -2 * (6 + 2 * SQRT2) / SQRT_PI, 1e-3, "fit")
    plan.rel("b1_B_minus_F", fit_small_time(b).b1, -2 * (7 + SQRT2) / SQRT_PI, 1e-3, "fit")


# -- fractal claims --------------------------------------------------------------

def _chapman_band() -> SelfSimilarBand:
    return SelfSimilarBand(catalog.rect12(), 1 / SQRT2)


def _corollary5(plan: _Plan, eps: float = 1e-9) -> None:
    b = _chapman_band()
    plan.close("area_over_4pi_equals_1_over_pi", b.area / (4 * PI), 1 / PI, 1e-14, "formula")
    plan.close("log_coefficient", log_coefficients(b)["c_trace"], -1 / (4 * math.log(2)), 1e-14, "formula")
    rr = renewal_remainder(b, "trace", eps=eps)
    plan.below("renewal_residual_max", np.abs(rr.residual).max(), 5 * eps, "series")
    a2 = b.alpha**2
    # U(t) - U(alpha^2 t) - R(t) equals -(R(alpha^2 t) + R(t)); both are tiny in the window
    literal = [trace_U(b, t, eps) - trace_U(b, a2 * t, eps) - trace_remainder(b.generator, t, 0.1 * eps) for t in rr.t]
    plan.below("renewal_residual_literal_max", np.abs(literal).max(), 5 * eps, "series")
    plan.below("generator_remainder_max", np.abs(rr.forcing).max(), 1e-6, "series")
    plan.below("periodicity_residual_max", np.abs(rr.value - rr.value_next).max(), 1e-6, "series")
    for t in (1e-3, 1e-2):
        z = band_heat_trace(b, t, 1e-12).value
        plan.close(f"expansion_vs_trace_t{t:g}", trace_expansion(b, t), z, 1e-9, "series")


def _theorem4_band(plan: _Plan, eps: float = 1e-9) -> None:
    b = _chapman_band()
    plan.close("log_coefficient", log_coefficients(b)["d_content"], -16 / (PI * math.log(2)), 1e-10, "formula")
    rr = renewal_remainder(b, "content", eps=eps)
    plan.below("renewal_residual_max", np.abs(rr.residual).max(), 5 * eps, "series")
    plan.below("generator_remainder_max", np.abs(rr.forcing).max(), 1e-6, "series")
    plan.below("periodicity_residual_max", np.abs(rr.value - rr.value_next).max(), 1e-6, "series")
    for t in (1e-3, 1e-2):
        q = band_heat_content(b, t, 1e-13).value
        plan.close(f"expansion_vs_content_t{t:g}", content_expansion(b, t), q, 1e-10, "series")


# -- Schroedinger claims -----------------------------------------------------------

def _richardson_limit(f: Callable[[float], float], s1: float = 1e-3, s2: float = 1e-4) -> float:
    """Limit of f(s) as s -> 0 assuming f(s) = L + c s + O(s^2)."""
    return (s1 * f(s2) - s2 * f(s1)) / (s1 - s2)


def _schrod_theorem3(plan: _Plan) -> None:
    lam = dirichlet_eigenvalues(gamma_flow(2, 0.5), 10)
    plan.below("isospectral_gamma_2_0.5", np.abs(lam - (np.arange(1, 11) * PI) ** 2).max(), 1e-7, "series")
    h = 1e-4
    for n in (1, 2):
        d_n = (h_coefficient(n, n, h) - h_coefficient(n, n, -h)) / (2 * h)
        plan.close(f"dh_n_n{n}", d_n, -SQRT2 / (n * PI) * (1 + (-1) ** n) / 2, 1e-6, "series")
        d_2n = (h_coefficient(n, 2 * n, h) - h_coefficient(n, 2 * n, -h)) / (2 * h)
        plan.close(f"dh_2n_n{n}", d_2n, 1 / (SQRT2 * n * PI), 1e-6, "series")
        lim = _richardson_limit(lambda s: h_coefficient(n, 2 * n, s) ** 2 / s**2)
        plan.close(f"h2n_sq_over_s2_n{n}", lim, 1 / (2 * n * n * PI**2), 1e-6, "series")
    lim = _richardson_limit(lambda s: h_coefficient(2, 2, s) ** 2 / s**2)
    plan.close("hn_sq_over_s2_n2", lim, 2 / (4 * PI**2), 1e-6, "series")
    # Q_{gamma_2(s)}(t) - Q_0(t) = C s^2 + O(s^4); the Richardson limits from
    # s in {0.01, 0.02} and {0.02, 0.04} must agree and C must stay away from 0
    t = 0.3
    c = separation_estimates(2, t, (0.01, 0.02, 0.04))
    fine, coarse = (4 * c[0] - c[1]) / 3, (4 * c[1] - c[2]) / 3
    plan.flag("separation_nonzero", abs(fine) > 1e-6, True, "series")
    plan.below("separation_richardson_spread", (fine - coarse) / fine, 0.05, "series")


def separation_estimates(n: int, t: float, steps) -> list[float]:
    q0 = gamma_heat_content(n, 0.0, t).value
    return [(gamma_heat_content(n, s, t).value - q0) / s**2 for s in steps]


def _schrod_corollary4(plan: _Plan) -> None:
    for n in (1, 2):
        for t in (0.1, 0.5):
            plan.below(f"dQ_gamma_n{n}_t{t:g}", dQ_gamma_at_zero(n, t), 1e-5, "series")
            plan.below(f"dQ_gamma_numeric_n{n}_t{t:g}", dQ_gamma_at_zero(n, t, method="numeric"), 1e-5, "series")


def _schrod_xi(plan: _Plan) -> None:
    st = xi_flow(2, 3.0)
    lam = dirichlet_eigenvalues(st.q, 5)
    plan.below("xi_eigen_contract_max", np.abs(lam - st.contract(5)).max(), 1e-4, "series")
    v = st.q.values
    plan.below("xi_evenness", np.abs(v - v[::-1]).max(), 1e-7, "series")
    plan.below("xi_mean", st.q.mean, 1e-10, "series")
    fd = dQ_xi_finite_difference(2, 0.2)
    plan.rel("dQ_xi_series_vs_flow_t0.2", dQ_xi_series(2, 0.2).value, fd, 5e-3, "series")
    plan.rel("dQ_xi_first_order_vs_flow_t0.2", dQ_xi_first_order(2, 0.2), fd, 5e-3, "series")
    for t in (0.2, 1.0):
        plan.flag(f"dQ_xi_nonzero_t{t:g}", dQ_xi_series(2, t).value != 0.0, True, "series")


PLANS: dict[str, Callable[[_Plan], None]] = {
    "example3": _example3,
    "example4": _example4,
    "example6": _example6,
    "theorem1": _theorem1,
    "corollary2": _corollary2,
    "corollary3": _corollary3,
    "bands_minus_EF": _bands_minus_ef,
    "corollary5": _corollary5,
    "theorem4_band": _theorem4_band,
    "schrod_theorem3": _schrod_theorem3,
    "schrod_corollary4": _schrod_corollary4,
    "schrod_xi": _schrod_xi,
}


def run_report(spec: ReportSpec | str) -> ReportResult:
    if isinstance(spec, str):
        spec = ReportSpec(spec)
    if spec.claim not in PLANS:
        raise UnknownClaim(f"unknown claim {spec.claim!r}; choose from {', '.join(CLAIMS)}")
    plan = _Plan(dict(spec.tolerances))
    start = time.perf_counter()
    PLANS[spec.claim](plan)
    elapsed = (time.perf_counter() - start) * 1e3
    return ReportResult(spec.claim, tuple(plan.checks), elapsed if spec.timing else None)
