import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nmcband import DomainError, KernelParams
from nmcband.quadrature import QuadratureSpec, pv_integrate
from nmcband.specfun import (
    bessel_k,
    bessel_k_quadrature,
    f_nu,
    f_nu_quadrature,
    gamma,
    psi,
    singular_cosine_integrals,
)


def test_gamma_matches_math():
    for x in (0.05, 0.5, 1.0, 2.5, 10.0):
        assert gamma(x) == pytest.approx(math.gamma(x), rel=1e-15)


def test_gamma_rejects_nonpositive():
    with pytest.raises(DomainError):
        gamma(0.0)
    with pytest.raises(DomainError):
        gamma(-1.3)


def test_psi_at_zero_is_gamma():
    # Psi_nu(0) = Gamma(nu): the z -> 0 limit of 2 (z/2)^nu K_nu(z)
    for nu in (0.55, 1.0, 1.45, 2.45):
        assert psi(nu, 0.0) == pytest.approx(gamma(nu), rel=1e-14)


def test_psi_matches_bessel_product():
    for nu in (0.75, 1.3, 2.45):
        for z in (0.1, 1.0, 7.0):
            want = 2.0 * (z / 2.0) ** nu * bessel_k(nu, z)
            assert psi(nu, z) == pytest.approx(want, rel=1e-14)


def test_bessel_k_quadrature_oracle():
    # independent route: K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt
    for nu in (0.55, 1.45, 2.45):
        for z in (0.3, 2.0, 30.0):
            assert bessel_k_quadrature(nu, z) == pytest.approx(
                bessel_k(nu, z), rel=1e-11
            )


def test_bessel_k_quadrature_huge_argument():
    # log-space reconstruction keeps relative accuracy where kv underflows
    nu, z = 1.45, 50.0
    assert bessel_k_quadrature(nu, z) == pytest.approx(bessel_k(nu, z), rel=1e-10)


def test_f_nu_rejects_bad_order():
    with pytest.raises(DomainError):
        f_nu(1.0, 0, 1.0)


def test_f_nu_closed_vs_quadrature():
    for alpha in (0.1, 0.5, 0.9):
        nu = 2.0 + alpha
        for c in (0.6, 2.0, 6.0):
            for xi in (0.0, 1.0, 3.0, 16.0):
                closed = f_nu(nu, xi, c)
                quad = f_nu_quadrature(nu, xi, c)
                assert quad == pytest.approx(closed, rel=1e-8), (alpha, c, xi)


def test_f_nu_decreasing_in_frequency():
    nu, c = 2.5, 1.0
    vals = [f_nu(nu, xi, c) for xi in range(0, 8)]
    assert all(a > b > 0.0 for a, b in zip(vals, vals[1:]))


@settings(max_examples=25, deadline=None)
@given(
    alpha=st.floats(0.05, 0.95),
    c=st.floats(0.2, 8.0),
    xi=st.integers(0, 12),
)
def test_f_nu_positive(alpha, c, xi):
    assert f_nu(2.0 + alpha, xi, c) > 0.0


def test_singular_cosine_integrals_vs_quadrature():
    for alpha in (0.2, 0.5, 0.8):
        params = KernelParams(alpha)
        i_c, j_c, c_c = singular_cosine_integrals(params)
        a = alpha
        spec4 = QuadratureSpec(tail_order=4.0 + a)
        spec2 = QuadratureSpec(tail_order=2.0 + a)
        i_q = pv_integrate(
            lambda t: 8.0 * (np.sin(0.5 * t) / t) ** 4 * np.abs(t) ** (-a), spec4
        )
        j_q = pv_integrate(
            lambda t: 2.0 * (np.sin(t) / t) ** 2 * np.abs(t) ** (-a), spec2
        )
        c_q = pv_integrate(
            lambda t: 2.0 * (np.sin(0.5 * t) / t) ** 2 * np.abs(t) ** (-a), spec2
        )
        assert i_q == pytest.approx(i_c, rel=1e-10)
        assert j_q == pytest.approx(j_c, rel=1e-10)
        assert c_q == pytest.approx(c_c, rel=1e-10)


def test_singular_integral_scaling_identity():
    # C = 2^(-1-a) J follows from substituting t -> 2t
    for alpha in (0.15, 0.5, 0.85):
        _, j_c, c_c = singular_cosine_integrals(KernelParams(alpha))
        assert c_c == pytest.approx(2.0 ** (-1.0 - alpha) * j_c, rel=1e-14)
