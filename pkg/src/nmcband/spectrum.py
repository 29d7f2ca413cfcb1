"""Straight-band quantities: the constant curvature h_R, the linearized
eigenvalues mu_k(R), bifurcation radii R_m = R_1/m, and the stability
verdict for straight bands.

Closed forms are the primary route (they stay stable as alpha
approaches 1, where the defining integrands degenerate); quadrature
companions are provided as independent oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import specfun
from .errors import BracketError, DomainError
from .quadrature import QuadratureSpec, adaptive_integrate, pv_integrate


@dataclass(frozen=True)
class SpectrumRow:
    """Eigenvalues mu_0..mu_K of the linearized operator at radius R."""

    radius: float
    eigenvalues: np.ndarray
    k_max: int


@dataclass(frozen=True)
class BifurcationRadii:
    """R_m = r1/m for m = 1..M; radii[m-1] holds R_m."""

    alpha: float
    r1: float
    radii: np.ndarray


def _check_radius(R):
    if not (R > 0.0 and math.isfinite(R)):
        raise DomainError(f"radius must be positive and finite, got {R!r}")


def h_r(params, R):
    """Curvature of the straight band of radius R:
    h_R = 2 B (2R)^(-a) / a, positive and strictly decreasing in R."""
    _check_radius(R)
    a = params.alpha
    return 2.0 * params.tail_constant * (2.0 * R) ** (-a) / a


def mu_k(params, R, k):
    """k-th eigenvalue of the linearized operator at the straight band:
    mu_k(R) = k^(1+a) C_a - F_(2+a)(0; 2R) - F_(2+a)(k; 2R)."""
    _check_radius(R)
    if k < 0:
        raise DomainError(f"mode index must be >= 0, got {k!r}")
    a = params.alpha
    _, _, c_a = specfun.singular_cosine_integrals(params)
    lead = float(k) ** (1.0 + a) * c_a if k > 0 else 0.0
    return lead - specfun.f_nu(2.0 + a, 0, 2.0 * R) - specfun.f_nu(2.0 + a, k, 2.0 * R)


def spectrum_row(params, R, k_max):
    vals = np.array([mu_k(params, R, k) for k in range(k_max + 1)])
    return SpectrumRow(radius=R, eigenvalues=vals, k_max=k_max)


def mu_k_quadrature(params, R, k, spec=None):
    """Independent quadrature route for mu_k: principal value of
    (1 - cos kt)|t|^(-2-a) minus the integral of
    (1 + cos kt)(t^2 + 4R^2)^(-(2+a)/2)."""
    _check_radius(R)
    a = params.alpha
    if spec is None:
        spec = QuadratureSpec(
            tail_order=2.0 + a, nodes_per_block=max(64, 4 * k + 16)
        )
    else:
        spec = QuadratureSpec(
            inner_cut=spec.inner_cut,
            period_blocks=spec.period_blocks,
            nodes_per_block=max(spec.nodes_per_block, 4 * k + 16),
            tail_order=2.0 + a,
        )

    def difference(t):
        # 1 - cos(kt) written as 2 sin^2(kt/2) and regrouped so nothing
        # overflows when the adaptive core probes t near 1e-300
        at = np.abs(t)
        singular = 2.0 * (np.sin(0.5 * k * t) / t) ** 2 * at ** (-a)
        return singular - (1.0 + np.cos(k * t)) * (
            t * t + 4.0 * R * R
        ) ** (-(2.0 + a) / 2.0)

    return pv_integrate(difference, spec)


def h_r_quadrature(params, R, spec=None):
    """Quadrature route for h_R = -2 * integral of G(t, 2R) - G(t, inf)."""
    from .kernel import g_gap  # local import avoids a cycle at import time

    _check_radius(R)
    if spec is None:
        spec = QuadratureSpec(tail_order=1.0 + params.alpha)

    def integrand(t):
        return 2.0 * g_gap(params, t, 2.0 * R)

    return pv_integrate(integrand, spec)


def find_r1(params, bracket_lo=1e-3, bracket_hi=10.0, tol=1e-12):
    """Radius R_1 where mu_1 vanishes, by Brent on the strictly
    increasing map R -> mu_1(R).  The bracket is expanded by doubling
    (and shrinking of the lower end) if it does not straddle the root."""
    if not (0.0 < bracket_lo < bracket_hi):
        raise DomainError("invalid bracket")
    lo, hi = bracket_lo, bracket_hi
    f_lo = mu_k(params, lo, 1)
    f_hi = mu_k(params, hi, 1)
    expansions = 0
    while f_lo > 0.0 and expansions < 60:
        lo /= 2.0
        f_lo = mu_k(params, lo, 1)
        expansions += 1
    while f_hi < 0.0 and expansions < 60:
        hi *= 2.0
        f_hi = mu_k(params, hi, 1)
        expansions += 1
    if not (f_lo < 0.0 < f_hi):
        raise BracketError(
            f"mu_1 does not change sign on [{lo:g}, {hi:g}] after expansion"
        )
    return brentq(lambda R: mu_k(params, R, 1), lo, hi, xtol=1e-300, rtol=max(tol, 9e-16))


def bifurcation_radii(params, m_max, tol=1e-12):
    r1 = find_r1(params, tol=tol)
    radii = r1 / np.arange(1, m_max + 1, dtype=float)
    return BifurcationRadii(alpha=params.alpha, r1=r1, radii=radii)


def classify_straight(params, R, tol=1e-10):
    """Straight-band verdict: Stable if mu_1(R) > tol, Unstable if
    mu_1(R) < -tol, Degenerate within the tolerance band."""
    m1 = mu_k(params, R, 1)
    if m1 > tol:
        return "Stable"
    if m1 < -tol:
        return "Unstable"
    return "Degenerate"
