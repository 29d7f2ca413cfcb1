"""Special functions for the band spectra.

Closed forms used throughout the library:

    Psi_nu(z)   = 2 (z/2)^nu K_nu(z),   Psi_nu(0) = Gamma(nu)
    F_nu(xi; c) = integral of cos(xi s) / (s^2 + c^2)^(nu/2) over the line
                = sqrt(pi) / (c^(nu-1) Gamma(nu/2)) * Gamma((nu-1)/2)   (xi = 0)
                = sqrt(pi) / (c^(nu-1) Gamma(nu/2)) * Psi_((nu-1)/2)(c xi)  (xi > 0)

and the singular cosine integrals

    J = 2 sqrt(pi) Gamma((1-a)/2) / ((1+a) Gamma((2+a)/2))
        ( = integral of 2(1 - cos s)|s|^(-2-a) )
    I = (8 - 2^(2-a)) sqrt(pi) Gamma((1-a)/2)
        / ((3+a)(2+a)(1+a) Gamma((2+a)/2))
        ( = integral of 2(1 - cos s)^2 |s|^(-4-a) )
    C = 2^(-1-a) J   (the k^(1+a) eigenvalue growth constant)

Gamma and K_nu are delegated to scipy.special; independent quadrature
oracles for both live in the test suite.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special as _sp

from .errors import DomainError

SQRT_PI = math.sqrt(math.pi)

# Fractional Bessel order; kept as a named alias for signatures that
# promise nu in (0, 4].
Nu = float


def gamma(x):
    """Euler Gamma for x > 0."""
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"gamma requires finite x > 0, got {x!r}")
    return float(_sp.gamma(x))


def bessel_k(nu, z):
    """Modified Bessel function of the second kind K_nu(z), z > 0."""
    nu = float(nu)
    z = float(z)
    if z <= 0.0 or not math.isfinite(z):
        raise DomainError(f"bessel_k requires z > 0, got {z!r}")
    if nu < 0.0:
        raise DomainError(f"bessel_k requires nu >= 0, got {nu!r}")
    return float(_sp.kv(nu, z))


def psi(nu, z):
    """Psi_nu(z) = 2 (z/2)^nu K_nu(z); the z = 0 limit Gamma(nu) is an
    explicit branch (K_nu itself diverges at 0)."""
    nu = float(nu)
    z = float(z)
    if nu <= 0.0:
        raise DomainError(f"psi requires nu > 0, got {nu!r}")
    if z < 0.0:
        raise DomainError(f"psi requires z >= 0, got {z!r}")
    if z == 0.0:
        return gamma(nu)
    return 2.0 * (z / 2.0) ** nu * bessel_k(nu, z)


def f_nu(nu, xi, c):
    """Line integral of cos(xi s)/(s^2 + c^2)^(nu/2); requires nu > 1."""
    nu = float(nu)
    c = float(c)
    if nu <= 1.0:
        raise DomainError(
            f"f_nu diverges for nu <= 1 (got nu={nu!r}); no principal-value rescue"
        )
    if c <= 0.0:
        raise DomainError(f"f_nu requires c > 0, got {c!r}")
    if xi < 0:
        raise DomainError(f"f_nu requires xi >= 0, got {xi!r}")
    pref = SQRT_PI / (c ** (nu - 1.0) * gamma(nu / 2.0))
    if xi == 0:
        return pref * gamma((nu - 1.0) / 2.0)
    return pref * psi((nu - 1.0) / 2.0, c * float(xi))


def bessel_k_quadrature(nu, z):
    """Independent quadrature route for K_nu(z) through the integral
    representation K_nu(z) = integral_0^inf exp(-z cosh t) cosh(nu t) dt.

    The integrand is positive (no cancellation), so relative accuracy
    survives even where K_nu is exponentially small.  Truncated where
    the exponent reaches ~740 below its minimum.
    """
    nu = float(nu)
    z = float(z)
    if z <= 0.0:
        raise DomainError(f"bessel_k_quadrature requires z > 0, got {z!r}")
    from scipy.integrate import quad

    t_max = math.acosh(max((740.0 + z) / z, 2.0))
    scale = math.exp(-z) if z < 700.0 else 0.0

    def integrand(t):
        # factor out e^{-z} so subnormal underflow cannot flush the
        # integrand to zero for large z
        return math.exp(-z * (math.cosh(t) - 1.0)) * math.cosh(nu * t)

    val, _ = quad(integrand, 0.0, t_max, epsabs=0.0, epsrel=1e-12, limit=400)
    if z >= 700.0:
        # reconstruct in log space; the result may legitimately underflow
        return math.exp(math.log(val) - z) if val > 0.0 else 0.0
    return scale * val


def f_nu_quadrature(nu, xi, c, pv_spec=None):
    """Quadrature route for F_nu(xi; c).

    For moderate c*xi the cosine transform is integrated directly (a
    principal-value-capable block scheme; the integrand is smooth).
    Once c*xi is large the exact value ~ e^(-c*xi) drops below what any
    double-precision quadrature of an O(1) integrand can resolve, so the
    route switches to the Bessel integral representation, which keeps
    relative accuracy at any size.
    """
    nu = float(nu)
    c = float(c)
    if nu <= 1.0:
        raise DomainError("f_nu_quadrature requires nu > 1")
    if xi == 0:
        from .quadrature import adaptive_integrate

        return 2.0 * adaptive_integrate(
            lambda t: (t * t + c * c) ** (-nu / 2.0), 0.0, np.inf, rel_tol=1e-11
        )
    z = c * float(xi)
    if z < 30.0:
        from .quadrature import QuadratureSpec, pv_integrate

        spec = pv_spec or QuadratureSpec(
            tail_order=nu, nodes_per_block=max(64, 4 * int(xi) + 16)
        )
        return pv_integrate(
            lambda t: np.cos(xi * t) * (t * t + c * c) ** (-nu / 2.0), spec
        )
    eta = (nu - 1.0) / 2.0
    psi_quad = 2.0 * (z / 2.0) ** eta * bessel_k_quadrature(eta, z)
    return SQRT_PI / (c ** (nu - 1.0) * gamma(nu / 2.0)) * psi_quad


def singular_cosine_integrals(params):
    """Return (I, J, C) for the kernel order params.alpha."""
    a = float(params.alpha)
    if not 0.0 < a < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {a!r}")
    g_ratio = _sp.gamma((1.0 - a) / 2.0) / _sp.gamma((2.0 + a) / 2.0)
    j_val = 2.0 * SQRT_PI * g_ratio / (1.0 + a)
    i_val = (8.0 - 2.0 ** (2.0 - a)) * SQRT_PI * g_ratio / (
        (3.0 + a) * (2.0 + a) * (1.0 + a)
    )
    c_val = 2.0 ** (-1.0 - a) * j_val
    return i_val, j_val, c_val
