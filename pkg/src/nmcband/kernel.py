"""Interaction kernel K(z) = |z|^(-2-a), its z2-derivatives, the
antiderivative G, and the two band-dependent kernels used by the
linearized-operator assembly.

All evaluators are vectorized over numpy arrays; scalar inputs return
floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special as _sp

from .errors import DomainError, SingularityError
from .series import eval_series

SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class KernelParams:
    """Kernel order alpha in (0,1) plus the cached tail constant

        B = sqrt(pi) Gamma((1+a)/2) / Gamma((2+a)/2)
          = 2 * integral_0^inf (1+w^2)^(-(2+a)/2) dw.
    """

    alpha: float
    tail_constant: float = field(default=None)

    def __post_init__(self):
        a = float(self.alpha)
        if not (0.0 < a < 1.0) or not math.isfinite(a):
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)
        b = SQRT_PI * _sp.gamma((1.0 + a) / 2.0) / _sp.gamma((2.0 + a) / 2.0)
        if self.tail_constant is None:
            object.__setattr__(self, "tail_constant", float(b))
        elif abs(self.tail_constant - b) > 1e-12 * abs(b):
            raise DomainError("tail_constant inconsistent with alpha")


def _as_array_pair(z1, z2):
    z1a = np.asarray(z1, dtype=float)
    z2a = np.asarray(z2, dtype=float)
    r2 = z1a * z1a + z2a * z2a
    if np.any(r2 == 0.0):
        raise SingularityError("kernel evaluated at the origin")
    return r2, np.isscalar(z1) and np.isscalar(z2)


def k_eval(params, z1, z2):
    """K(z1, z2) = (z1^2 + z2^2)^(-(2+a)/2)."""
    r2, scalar = _as_array_pair(z1, z2)
    out = r2 ** (-(2.0 + params.alpha) / 2.0)
    return float(out) if scalar else out


def k_z2(params, z1, z2):
    """dK/dz2 = -(2+a) z2 (z1^2 + z2^2)^(-(4+a)/2)."""
    r2, scalar = _as_array_pair(z1, z2)
    a = params.alpha
    out = -(2.0 + a) * np.asarray(z2, dtype=float) * r2 ** (-(4.0 + a) / 2.0)
    return float(out) if scalar else out


def k_z2z2(params, z1, z2):
    """d2K/dz2^2 = -(2+a) r^(-(4+a)) + (2+a)(4+a) z2^2 r^(-(6+a))
    with r^2 = z1^2 + z2^2."""
    r2, scalar = _as_array_pair(z1, z2)
    a = params.alpha
    z2a = np.asarray(z2, dtype=float)
    out = -(2.0 + a) * r2 ** (-(4.0 + a) / 2.0) + (2.0 + a) * (4.0 + a) * (
        z2a * z2a
    ) * r2 ** (-(6.0 + a) / 2.0)
    return float(out) if scalar else out


def slope_antiderivative(params, x):
    """Phi(x) = integral_0^x (1 + w^2)^(-(2+a)/2) dw, odd in x.

    Evaluated through the hypergeometric closed form
    Phi(x) = x * 2F1(1/2, (2+a)/2; 3/2; -x^2), which is uniformly
    accurate over the full slope range (the naive quadrature loses
    digits for |x| >> 1 where Phi saturates at B/2).
    """
    a = params.alpha
    xa = np.asarray(x, dtype=float)
    out = xa * _sp.hyp2f1(0.5, (2.0 + a) / 2.0, 1.5, -(xa * xa))
    return float(out) if np.isscalar(x) else out


def slope_antiderivative_complement(params, x):
    """B/2 - Phi(x) = integral_x^inf (1 + w^2)^(-(2+a)/2) dw for x > 0,
    computed without cancellation: for x >= 1 via the Euler-integral
    closed form x^(-1-a)/(1+a) * 2F1((2+a)/2, (1+a)/2; (3+a)/2; -1/x^2),
    else as the literal difference (benign there)."""
    a = params.alpha
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0.0):
        raise DomainError("complement requires x > 0")
    big = xa >= 1.0
    out = np.empty_like(xa)
    xb = np.where(big, xa, 2.0)  # placeholder avoids warnings off-branch
    out_b = xb ** (-1.0 - a) / (1.0 + a) * _sp.hyp2f1(
        (2.0 + a) / 2.0, (1.0 + a) / 2.0, (3.0 + a) / 2.0, -1.0 / (xb * xb)
    )
    out = np.where(big, out_b, params.tail_constant / 2.0 - slope_antiderivative(params, xa))
    return float(out) if np.isscalar(x) else out


def g_gap(params, t, v):
    """G(t, inf) - G(t, v) for v > 0, stable for |t| << v (where the two
    terms individually overflow as |t|^(-1-a)):

        gap = v^(-1-a)/(1+a) * 2F1((2+a)/2,(1+a)/2;(3+a)/2; -(t/v)^2)
              for v >= |t|,
        gap = |t|^(-1-a) * (B/2 - Phi(v/|t|))   otherwise.
    """
    a = params.alpha
    ta = np.abs(np.asarray(t, dtype=float))
    va = np.asarray(v, dtype=float)
    if np.any(va <= 0.0):
        raise DomainError("g_gap requires v > 0")
    ta, va = np.broadcast_arrays(ta, va)
    big = va >= ta
    vb = np.where(big, va, 1.0)
    tb = np.where(big, ta, 1.0)
    gap_big = vb ** (-1.0 - a) / (1.0 + a) * _sp.hyp2f1(
        (2.0 + a) / 2.0, (1.0 + a) / 2.0, (3.0 + a) / 2.0, -((tb / vb) ** 2)
    )
    ts = np.where(big, 1.0, ta)
    vs = np.where(big, ts, va)
    gap_small = ts ** (-1.0 - a) * (
        params.tail_constant / 2.0 - slope_antiderivative(params, vs / ts)
    )
    out = np.where(big, gap_big, gap_small)
    if np.isscalar(t) and np.isscalar(v):
        return float(out)
    return out


def g_eval(params, t, v):
    """G(t, v) = integral_0^v (t^2 + tau^2)^(-(2+a)/2) dtau
    = |t|^(-1-a) * Phi(v/|t|); odd in v."""
    ta = np.abs(np.asarray(t, dtype=float))
    if np.any(ta == 0.0):
        raise SingularityError("g_eval requires t != 0")
    va = np.asarray(v, dtype=float)
    out = ta ** (-1.0 - params.alpha) * slope_antiderivative(params, va / ta)
    if np.isscalar(t) and np.isscalar(v):
        return float(out)
    return out


def g_inf(params, t):
    """G(t, inf) = |t|^(-1-a) * B/2 (Phi saturates at B/2)."""
    ta = np.abs(np.asarray(t, dtype=float))
    if np.any(ta == 0.0):
        raise SingularityError("g_inf requires t != 0")
    out = ta ** (-1.0 - params.alpha) * (params.tail_constant / 2.0)
    return float(out) if np.isscalar(t) else out


def branch_kernels(params, u, s, t):
    """The two kernels of the linearized operator at generatrix u:

        kminus(s,t) = ((s-t)^2 + (u(s)-u(t))^2)^(-(2+a)/2)
                    = A(s,t) |s-t|^(-2-a),
          A = (1 + ((u(s)-u(t))/(s-t))^2)^(-(2+a)/2)
        kzero(s,t)  = ((s-t)^2 + (u(s)+u(t))^2)^(-(2+a)/2)

    Requires s != t and u positive at the evaluation points.
    """
    sa = np.asarray(s, dtype=float)
    ta = np.asarray(t, dtype=float)
    if np.any(sa == ta):
        raise SingularityError("branch_kernels requires s != t")
    us = eval_series(u, sa)
    ut = eval_series(u, ta)
    if np.any(np.asarray(us) <= 0.0) or np.any(np.asarray(ut) <= 0.0):
        raise DomainError("branch_kernels requires a positive generatrix")
    d2 = (sa - ta) ** 2
    beta = -(2.0 + params.alpha) / 2.0
    kminus = (d2 + (us - ut) ** 2) ** beta
    kzero = (d2 + (us + ut) ** 2) ** beta
    if np.isscalar(s) and np.isscalar(t):
        return float(kminus), float(kzero)
    return kminus, kzero
