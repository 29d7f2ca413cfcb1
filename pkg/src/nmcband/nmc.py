"""The curvature operator H_a on even cosine series and the Galerkin
matrix of its linearization L(u) = (1/2) D_u H_a(u).

Evaluation strategy for H_a(u)(s): the two one-dimensional integrals

    H_a(u)(s) = 2 [ PV int G(t, u(s)-u(s-t)) dt
                    + int (G(t, inf) - G(t, u(s)+u(s-t))) dt ]

are computed on a common node set: graded panels near t = 0 with the
+/-t pairing and an analytic subtraction of the leading |t|^(-a)
remainder, Gauss-Legendre blocks out to T = 2pi * period_blocks, and an
analytic far tail built from the cosine coefficients of u (the
integrand is, to cubic order in u/t, B/2 |t|^(-1-a) - 2u(s-t)|t|^(-2-a)).

The Galerkin matrix is assembled from the periodized kernels

    S(tau, h) = sum_n ((tau + 2 pi n)^2 + h^2)^(-(2+a)/2)

(direct sum plus Hurwitz-zeta tails), which reduces each inner line
integral to one period [-pi, pi] at full accuracy.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from .errors import AccuracyError, DomainError
from .kernel import g_eval, g_gap
from .quadrature import _leggauss, _panel_edges
from .series import CosineSeries, eval_series, eval_series_deriv, eval_series_second_deriv

TWO_PI = 2.0 * math.pi

# re-exported: CosineSeries and eval_series live with the series type
__all__ = [
    "CosineSeries",
    "eval_series",
    "OperatorMatrix",
    "nmc_eval",
    "assemble_operator",
    "kappa_m",
    "gram_weights",
]


@dataclass(frozen=True)
class OperatorMatrix:
    """Galerkin matrix M_jk = <e_j, L(u) e_k> over e_j = cos(j s),
    with the diagonal Gram weights <e_0,e_0> = 2pi, <e_k,e_k> = pi."""

    entries: np.ndarray
    gram: np.ndarray
    asymmetry_defect: float = 0.0


def gram_weights(n_modes):
    g = np.full(n_modes + 1, math.pi)
    g[0] = TWO_PI
    return g


def _positivity_check(u, n_grid=512):
    s = np.linspace(-math.pi, math.pi, n_grid, endpoint=False)
    vals = eval_series(u, s)
    if np.min(vals) <= 0.0:
        raise DomainError("generatrix must be strictly positive")
    return float(np.min(vals))


@functools.lru_cache(maxsize=64)
def _graded_nodes(eps_min, cut, panel_nodes):
    """Geometric panels [eps_min, cut] doubling outward; returns
    (nodes, weights) flattened."""
    edges = [cut]
    x = cut
    while x / 2.0 > eps_min:
        x /= 2.0
        edges.append(x)
    edges.append(eps_min)
    edges = np.asarray(edges[::-1])
    gx, gw = _leggauss(panel_nodes)
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    t = (mid[:, None] + half[:, None] * gx[None, :]).ravel()
    w = (half[:, None] * gw[None, :]).ravel()
    return t, w


@functools.lru_cache(maxsize=64)
def _block_nodes(cut, period_blocks, nodes_per_block):
    edges = _panel_edges(cut, period_blocks)
    gx, gw = _leggauss(nodes_per_block)
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    t = (mid[:, None] + half[:, None] * gx[None, :]).ravel()
    w = (half[:, None] * gw[None, :]).ravel()
    return t, w, float(edges[-1])


def _cos_tail(j, p, T):
    """int_T^inf cos(j t) t^(-p) dt by three integrations by parts
    (remainder O(p^6 j^-6 T^(-p-6)), far below roundoff here)."""
    sj, cj = math.sin(j * T), math.cos(j * T)
    t1 = -sj * T ** (-p) / j
    t2 = p * cj * T ** (-p - 1.0) / (j * j)
    q = p * (p + 1.0) / (j * j)
    # third level applied to the remaining integral of cos * t^(-p-2)
    t3 = q * (sj * T ** (-p - 2.0) / j - (p + 2.0) * cj * T ** (-p - 3.0) / (j * j))
    return t1 + t2 + t3


def nmc_eval(
    params,
    u,
    s,
    *,
    period_blocks=256,
    nodes_per_block=64,
    panel_nodes=16,
    eps_min=1e-7,
    inner_cut=0.1,
):
    """H_a(u)(s) for a positive cosine-series generatrix u.

    Vectorized over an array of evaluation points ``s``; even and
    2pi-periodic in s by construction.
    """
    _positivity_check(u)
    a = params.alpha
    b_const = params.tail_constant
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))

    tg, wg = _graded_nodes(eps_min, inner_cut, panel_nodes)
    tb, wb, T = _block_nodes(inner_cut, period_blocks, nodes_per_block)
    t = np.concatenate([tg, tb])
    w = np.concatenate([wg, wb])

    us = eval_series(u, s_arr)[:, None]
    coeffs_u = np.asarray(u.coeffs)
    total = np.zeros(s_arr.size)
    for sign in (+1.0, -1.0):
        # graded small-t nodes: u(s) - u(s - sg t) by the exact product
        # identity -sum_l 2 c_l sin(l(s - sg t/2)) sin(l sg t/2); the raw
        # difference of series values cancels catastrophically against
        # the t^(-1-a) kernel weight
        half = 0.5 * sign * tg
        mid = s_arr[:, None] - half[None, :]
        d_minus_g = np.zeros((s_arr.size, tg.size))
        for l in range(1, coeffs_u.size):
            d_minus_g -= (
                2.0 * coeffs_u[l] * np.sin(l * mid) * np.sin(l * half)[None, :]
            )
        u_shift_b = eval_series(u, s_arr[:, None] - sign * tb[None, :])
        d_minus = np.concatenate([d_minus_g, us - u_shift_b], axis=1)
        u_shift = us - d_minus
        d_zero = us + u_shift
        vals = g_eval(params, t[None, :], d_minus) + g_gap(params, t[None, :], d_zero)
        total += vals @ w

    # analytic subtraction of the paired |t|^(-a) remainder on (0, cut]
    # (the graded node sum alone cannot resolve it for a near 1)
    up = eval_series_deriv(u, s_arr)
    upp = eval_series_second_deriv(u, s_arr)
    c0 = -((1.0 + up * up) ** (-(2.0 + a) / 2.0)) * upp
    sub_nodes = float(np.dot(wg, tg ** (-a)))
    sub_exact = inner_cut ** (1.0 - a) / (1.0 - a)
    total += c0 * (sub_exact - sub_nodes)

    # analytic far tail: B/2 |t|^{-1-a} - 2 u(s-t) |t|^{-2-a} beyond T
    p = 2.0 + a
    tail = b_const * T ** (-a) / a
    coeffs = u.coeffs
    js = np.arange(coeffs.size)
    ct = np.empty(coeffs.size)
    ct[0] = 2.0 * T ** (1.0 - p) / (p - 1.0)
    for j in range(1, coeffs.size):
        ct[j] = 2.0 * _cos_tail(float(j), p, T)
    tail_series = (coeffs * ct)[None, :] * np.cos(js[None, :] * s_arr[:, None])
    total += tail - 2.0 * tail_series.sum(axis=1)

    out = 2.0 * total
    if np.isscalar(s) or np.asarray(s).ndim == 0:
        return float(out[0])
    return out


@functools.lru_cache(maxsize=16)
def _assembly_tau_nodes(panel_nodes, eps_min, mid_width):
    """Panels on (0, pi]: geometric refinement toward 0 below 0.1,
    uniform panels of width <= mid_width above (keeps Gauss-Legendre
    resolved for basis frequencies up to ~pi/mid_width)."""
    inner = [0.1]
    x = 0.1
    while x / 2.0 > eps_min:
        x /= 2.0
        inner.append(x)
    inner.append(eps_min)
    n_mid = int(math.ceil((math.pi - 0.1) / mid_width))
    mid = np.linspace(0.1, math.pi, n_mid + 1)
    edges = np.concatenate([np.asarray(inner[::-1]), mid[1:]])
    gx, gw = _leggauss(panel_nodes)
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    midp = 0.5 * (hi + lo)
    t = (midp[:, None] + half[:, None] * gx[None, :]).ravel()
    w = (half[:, None] * gw[None, :]).ravel()
    return t, w


def _lattice_kernel(a, tau, h, n_direct=20):
    """S(tau, h) = sum over n of ((tau + 2 pi n)^2 + h^2)^(-(2+a)/2),
    direct for |n| <= n_direct plus three-term Hurwitz-zeta tails in
    powers of (h / 2 pi n)^2."""
    beta = (2.0 + a) / 2.0
    n = np.arange(-n_direct, n_direct + 1)
    x = tau[None, :] + TWO_PI * n[:, None]
    direct = ((x * x + h[None, :] ** 2) ** (-beta)).sum(axis=0)

    h2 = h * h
    q_plus = n_direct + 1.0 + tau / TWO_PI
    q_minus = n_direct + 1.0 - tau / TWO_PI
    tail = np.zeros_like(tau)
    coef = 1.0
    for m in range(3):
        exponent = 2.0 * beta + 2.0 * m
        zsum = _sp.zeta(exponent, q_plus) + _sp.zeta(exponent, q_minus)
        tail += coef * (h2**m) * TWO_PI ** (-exponent) * zsum
        coef *= -(beta + m) / (m + 1.0)
    return direct + tail


def assemble_operator(
    params,
    u,
    n_modes,
    *,
    panel_nodes=16,
    eps_min=1e-10,
    mid_width=0.1,
    defect_tol=1e-6,
):
    """Galerkin matrix of L(u) = (1/2) D_u H_a(u) on cos(0..n_modes).

    M_jk = 1/2 [ iint (e_j(s)-e_j(t))(e_k(s)-e_k(t)) Kminus(s,t)
               - iint (e_j(s)+e_j(t))(e_k(s)+e_k(t)) Kzero(s,t) ],
    outer s on a periodic trapezoid grid (spectrally accurate), inner t
    reduced to one period via the lattice kernels, with +/-tau pairing
    and analytic subtraction of the |tau|^(-a) diagonal remainder.
    """
    _positivity_check(u)
    a = params.alpha
    n_s = 4 * (n_modes + 1)
    s_grid = -math.pi + TWO_PI * np.arange(n_s) / n_s
    tau, w = _assembly_tau_nodes(panel_nodes, eps_min, mid_width)
    jvec = np.arange(n_modes + 1)

    m_acc = np.zeros((n_modes + 1, n_modes + 1))
    sub_nodes = float(np.dot(w, tau ** (-a)))
    sub_exact = math.pi ** (1.0 - a) / (1.0 - a)

    u_coeffs = np.asarray(u.coeffs)
    lvec = np.arange(u_coeffs.size)

    for i_s, s in enumerate(s_grid):
        acc = np.zeros((n_modes + 1, n_modes + 1))
        for sign in (+1.0, -1.0):
            # cos(js) - cos(j(s + sg tau)) = 2 sin(j(s + half)) sin(j half),
            # half = sg tau / 2: exact product form, no cancellation when
            # tau is tiny (the raw difference rounds to 0 while the kernel
            # blows up like tau^(-2-a))
            half = 0.5 * sign * tau
            mid_pts = s + half
            d = 2.0 * np.sin(np.outer(jvec, mid_pts)) * np.sin(np.outer(jvec, half))
            p = 2.0 * np.cos(np.outer(jvec, mid_pts)) * np.cos(np.outer(jvec, half))
            du = 2.0 * np.sin(np.outer(lvec, mid_pts)) * np.sin(np.outer(lvec, half))
            pu = 2.0 * np.cos(np.outer(lvec, mid_pts)) * np.cos(np.outer(lvec, half))
            s_minus = _lattice_kernel(a, sign * tau, u_coeffs @ du)
            s_zero = _lattice_kernel(a, sign * tau, u_coeffs @ pu)
            acc += (d * (w * s_minus)[None, :]) @ d.T
            acc -= (p * (w * s_zero)[None, :]) @ p.T
        # subtraction: paired minus-kernel integrand ~ 2 j k sin(js)
        # sin(ks) (1+u'^2)^(-(2+a)/2) tau^(-a) near tau = 0
        up = eval_series_deriv(u, s)
        beta0 = (1.0 + up * up) ** (-(2.0 + a) / 2.0)
        v = jvec * np.sin(jvec * s)
        acc += 2.0 * beta0 * (sub_exact - sub_nodes) * np.outer(v, v)
        m_acc += acc

    m_raw = 0.5 * (TWO_PI / n_s) * m_acc
    defect = float(np.max(np.abs(m_raw - m_raw.T)))
    scale = float(np.max(np.abs(m_raw)))
    if defect > defect_tol * max(scale, 1.0):
        raise AccuracyError(
            f"assembly asymmetry defect {defect:.3e} exceeds tolerance; "
            "refine the quadrature"
        )
    m_sym = 0.5 * (m_raw + m_raw.T)
    return OperatorMatrix(
        entries=m_sym, gram=gram_weights(n_modes), asymmetry_defect=defect
    )


def kappa_m(params, R, m, spec=None):
    """kappa_m = -int (1 + cos(m t)) 2R K_z2(t, 2R) dt > 0, the
    gamma-sensitivity of the cos(m s) residual projection."""
    from .kernel import k_z2
    from .quadrature import QuadratureSpec, pv_integrate

    if R <= 0.0:
        raise DomainError("kappa_m requires R > 0")
    if m < 1:
        raise DomainError("kappa_m requires m >= 1")
    if spec is None:
        spec = QuadratureSpec(
            tail_order=4.0 + params.alpha, nodes_per_block=max(64, 4 * m + 16)
        )

    def integrand(t):
        return -(1.0 + np.cos(m * t)) * 2.0 * R * k_z2(params, t, 2.0 * R)

    return pv_integrate(integrand, spec)
