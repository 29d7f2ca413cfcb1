"""Stability of the bifurcated branches.

Three independent routes to the amplitude-squared coefficient sigma of
the compressed Rayleigh quotient R_1(a) = sigma a^2 + O(a^3):

* sigma_integral_route: the three-term expression in the kernel
  derivatives K_z2, K_z2z2, evaluated by principal-value quadrature;
* sigma_specfun_route: the equivalent Gamma/Bessel closed form;
* sigma_fit_route: a least-squares fit of the tracked Rayleigh
  quotient along a computed branch (no perturbation theory at all).

The module also provides eigenpair continuation along a branch
(track_spectrum) and the compression quotient itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from .branch import BranchCurve, BranchPoint, build_generatrix
from .errors import (
    DegenerateDenominatorError,
    DomainError,
    FitQualityError,
    NoConvergenceError,
    TrackingError,
)
from .kernel import k_z2, k_z2z2
from .nmc import assemble_operator
from .quadrature import QuadratureSpec, pv_integrate
from .series import CosineSeries
from .spectrum import find_r1, mu_k_quadrature

SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class TrackedEigenpair:
    k: int
    mu: float
    vec: CosineSeries
    overlap: float


@dataclass(frozen=True)
class StabilityReport:
    alpha: float
    r1: float
    sigma_integral: float
    sigma_specfun: float
    sigma_fit: float
    verdict: str
    status: str = "ok"


def track_spectrum(
    params, point, k_track=(0, 1, 2), *, r_m=None, n_modes=None, assemble_kwargs=None
):
    """Eigenpairs of the assembled L(w) at a branch point, labeled by
    maximal overlap with the a = 0 eigenfunctions cos(k s)."""
    if r_m is None:
        r_m = find_r1(params) / point.m
    n_modes = n_modes if n_modes is not None else point.v.n_modes
    w = build_generatrix(point.m, point.a, point.gamma, point.v, r_m)
    op = assemble_operator(params, w, n_modes, **(assemble_kwargs or {}))
    gram = op.gram
    vals, vecs = eigh(op.entries, np.diag(gram))
    # eigh normalizes vecs^T G vecs = I
    out = []
    for k in k_track:
        overlaps = np.abs(vecs[k, :]) * math.sqrt(gram[k])
        idx = int(np.argmax(overlaps))
        if overlaps[idx] <= 0.9:
            raise TrackingError(
                f"eigenpair label k={k} ambiguous (best overlap "
                f"{overlaps[idx]:.3f} <= 0.9)"
            )
        coeffs = vecs[:, idx] * math.sqrt(gram[k])
        if coeffs[k] < 0.0:
            coeffs = -coeffs
        out.append(
            TrackedEigenpair(
                k=k, mu=float(vals[idx]), vec=CosineSeries(coeffs), overlap=float(overlaps[idx])
            )
        )
    return out


def rayleigh_compression(params, point, tracked):
    """Rayleigh quotient of the zero-mean compression from the tracked
    pair (zero mode e_0(a), soft mode e_k(a)):

        R(a) = mu_0 g Q^2 / (1 + g Q^2) + mu_k / (1 + g Q^2),
        g = <e_0,e_0>/<e_k,e_k> = 2,
        Q = mean of e_k(a) / mean of e_0(a) (ratio of c_0 coefficients).
    """
    zero, soft = tracked
    if zero.k != 0:
        raise DomainError("first tracked pair member must carry label k=0")
    denom = zero.vec.coeffs[0]
    if abs(denom) < 1e-6:
        raise DegenerateDenominatorError("zero mode has vanishing mean")
    q = soft.vec.coeffs[0] / denom
    g = 2.0
    return zero.mu * g * q * q / (1.0 + g * q * q) + soft.mu / (1.0 + g * q * q)


def _pv_spec(params, decay, k_osc=2):
    return QuadratureSpec(
        tail_order=decay, nodes_per_block=max(64, 4 * k_osc + 16)
    )


def sigma_integral_route(params, r1):
    """Amplitude-squared coefficient of R_1 by direct quadrature:

        sigma = 1/4 int (3 - 4 cos t + cos 2t) K_z2z2(t, 0) dt
              - 1/4 int (3 + 4 cos t + cos 2t) K_z2z2(t, 2 R_1) dt
              - 1/4 [int (1 + 2 cos t + cos 2t) K_z2(t, 2 R_1) dt]^2
                    / mu_2(R_1)

    with mu_2(R_1) itself computed by quadrature, keeping the route
    independent of the Gamma/Bessel closed forms.
    """
    if r1 <= 0.0:
        raise DomainError("r1 must be positive")
    a = params.alpha
    c = 2.0 * r1

    def flat_term(t):
        # (3 - 4 cos t + cos 2t) K_z2z2(t,0) = -(2+a) * 8 (sin(t/2)/t)^4 |t|^(-a);
        # grouped so the adaptive core cannot overflow near t = 0
        return -(2.0 + a) * 8.0 * (np.sin(0.5 * t) / t) ** 4 * np.abs(t) ** (-a)

    def band_term(t):
        return (3.0 + 4.0 * np.cos(t) + np.cos(2.0 * t)) * k_z2z2(params, t, c)

    def cross_term(t):
        return (1.0 + 2.0 * np.cos(t) + np.cos(2.0 * t)) * k_z2(params, t, c)

    v1 = pv_integrate(flat_term, _pv_spec(params, 4.0 + a))
    v2 = pv_integrate(band_term, _pv_spec(params, 4.0 + a))
    v3 = pv_integrate(cross_term, _pv_spec(params, 4.0 + a))
    mu2 = mu_k_quadrature(params, r1, 2)
    return 0.25 * v1 - 0.25 * v2 - 0.25 * v3 * v3 / mu2


def sigma_specfun_route(params, r1):
    """Amplitude-squared coefficient of R_1 via the Gamma/Bessel closed
    form.  With c = 2 R_1, Psi_nu(z) = 2 (z/2)^nu K_nu(z) and

        Delta = 2/(1+a) c^(1+a) Gamma((1-a)/2) - Gamma((1+a)/2)
                - Psi_((1+a)/2)(2c),

    the coefficient solves

        Gamma((2+a)/2) / (sqrt(pi)/2) * c^(3+a) * sigma =
            -(4 - 2^(1-a)) c^(3+a) Gamma((1-a)/2) / ((3+a)(1+a))
            + [3 Gamma((3+a)/2) + 4 Psi_((3+a)/2)(c) + Psi_((3+a)/2)(2c)]
            - 2 [3 Gamma((5+a)/2) + 4 Psi_((5+a)/2)(c) + Psi_((5+a)/2)(2c)]
            - 2 [Gamma((3+a)/2) + 2 Psi_((3+a)/2)(c) + Psi_((3+a)/2)(2c)]^2
                / Delta.

    Gamma((1-a)/2) terms are evaluated in log space so the route stays
    finite arbitrarily close to a = 1 (where c^(1+a) Gamma((1-a)/2)
    tends to a finite limit although each factor degenerates).
    """
    from .specfun import gamma, psi

    if r1 <= 0.0:
        raise DomainError("r1 must be positive")
    a = params.alpha
    c = 2.0 * r1
    # c^(1+a) Gamma((1-a)/2) and c^(3+a) Gamma((1-a)/2) via logs
    lg = math.lgamma((1.0 - a) / 2.0)
    log_c = math.log(c)
    c1a_g = math.exp((1.0 + a) * log_c + lg)
    c3a_g = math.exp((3.0 + a) * log_c + lg)
    if not (math.isfinite(c1a_g) and math.isfinite(c3a_g)):
        raise NoConvergenceError(
            "Gamma((1-a)/2) overflow not compensated by c^(1+a); alpha too "
            "close to 1 for this route"
        )
    delta = 2.0 / (1.0 + a) * c1a_g - gamma((1.0 + a) / 2.0) - psi((1.0 + a) / 2.0, 2.0 * c)
    t1 = -(4.0 - 2.0 ** (1.0 - a)) * c3a_g / ((3.0 + a) * (1.0 + a))
    t2 = 3.0 * gamma((3.0 + a) / 2.0) + 4.0 * psi((3.0 + a) / 2.0, c) + psi(
        (3.0 + a) / 2.0, 2.0 * c
    )
    t3 = -2.0 * (
        3.0 * gamma((5.0 + a) / 2.0)
        + 4.0 * psi((5.0 + a) / 2.0, c)
        + psi((5.0 + a) / 2.0, 2.0 * c)
    )
    bracket = (
        gamma((3.0 + a) / 2.0)
        + 2.0 * psi((3.0 + a) / 2.0, c)
        + psi((3.0 + a) / 2.0, 2.0 * c)
    )
    t4 = -2.0 * bracket * bracket / delta
    log_pref = math.log(SQRT_PI / 2.0) - math.lgamma((2.0 + a) / 2.0) - (3.0 + a) * log_c
    return math.exp(log_pref) * (t1 + t2 + t3 + t4)


def sigma_fit_route(params, curve, *, a_fit=None, r_m=None, assemble_kwargs=None):
    """Fit R(a) = b + sigma a^2 to the tracked Rayleigh quotient over
    matched +/-a pairs of a computed m = 1 branch (pair-averaging
    removes odd error terms); returns the fitted sigma."""
    pts = [p for p in curve.points if p.a != 0.0]
    if a_fit is not None:
        pts = [p for p in pts if abs(p.a) <= a_fit]
    by_a = {round(p.a, 14): p for p in pts}
    xs, ys = [], []
    for key, p in by_a.items():
        if key <= 0:
            continue
        mirror = by_a.get(round(-p.a, 14))
        if mirror is None:
            continue
        pair_vals = []
        for q in (p, mirror):
            tracked = track_spectrum(
                params,
                q,
                k_track=(0, curve.m),
                r_m=r_m,
                assemble_kwargs=assemble_kwargs,
            )
            pair_vals.append(rayleigh_compression(params, q, tracked))
        xs.append(p.a * p.a)
        ys.append(0.5 * (pair_vals[0] + pair_vals[1]))
    if len(xs) < 2:
        raise FitQualityError("need at least 2 matched pairs (4 points) to fit")
    design = np.column_stack([np.ones(len(xs)), np.asarray(xs)])
    coef, *_ = np.linalg.lstsq(design, np.asarray(ys), rcond=None)
    fitted = design @ coef
    resid = float(np.max(np.abs(fitted - np.asarray(ys))))
    lead = float(np.max(np.abs(coef[1] * np.asarray(xs))))
    if lead == 0.0 or resid > 0.2 * lead:
        raise FitQualityError(
            f"fit residual {resid:.3e} exceeds 20% of leading term {lead:.3e}"
        )
    return float(coef[1])


def stability_sweep(alpha_grid, *, fit=False, fit_kwargs=None):
    """One StabilityReport per alpha; per-alpha failures are recorded in
    the status field and the sweep continues."""
    from .kernel import KernelParams

    reports = []
    for alpha in alpha_grid:
        try:
            params = KernelParams(float(alpha))
            r1 = find_r1(params)
            s_int = sigma_integral_route(params, r1)
            s_spec = sigma_specfun_route(params, r1)
            s_fit = float("nan")
            if fit:
                from .branch import continue_branch

                kw = fit_kwargs or {}
                curve = continue_branch(
                    params,
                    1,
                    kw.get("a_max", 0.04 * r1),
                    kw.get("steps", 4),
                    kw.get("n_modes", 12),
                )
                s_fit = sigma_fit_route(params, curve)
            verdict = "unstable" if s_spec < 0.0 else "stable"
            reports.append(
                StabilityReport(
                    alpha=float(alpha),
                    r1=r1,
                    sigma_integral=s_int,
                    sigma_specfun=s_spec,
                    sigma_fit=s_fit,
                    verdict=verdict,
                )
            )
        except Exception as exc:  # sweep must survive per-row failures
            reports.append(
                StabilityReport(
                    alpha=float(alpha),
                    r1=float("nan"),
                    sigma_integral=float("nan"),
                    sigma_specfun=float("nan"),
                    sigma_fit=float("nan"),
                    verdict="error",
                    status=f"{type(exc).__name__}: {exc}",
                )
            )
    return reports
