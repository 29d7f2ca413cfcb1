import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nmcband import DomainError, KernelParams, NoConvergenceError
from nmcband.quadrature import QuadratureSpec, adaptive_integrate, pv_integrate
from nmcband.specfun import singular_cosine_integrals


def test_spec_validation():
    with pytest.raises(DomainError):
        QuadratureSpec(inner_cut=0.0)
    with pytest.raises(DomainError):
        QuadratureSpec(period_blocks=0)
    with pytest.raises(DomainError):
        QuadratureSpec(tail_order=0.5)


def test_pv_known_singular_cosine_integral():
    # int (1 - cos t) |t|^(-2-a) dt over R has a Gamma closed form
    for alpha in (0.25, 0.75):
        params = KernelParams(alpha)
        _, _, c_exact = singular_cosine_integrals(params)
        got = pv_integrate(
            lambda t: 2.0 * (np.sin(0.5 * t) / t) ** 2 * np.abs(t) ** (-alpha),
            QuadratureSpec(tail_order=2.0 + alpha),
        )
        assert got == pytest.approx(c_exact, rel=1e-9)


def test_pv_odd_singularity_cancels():
    # sign(t)|t|^(-1.2) plus a smooth even bump: the odd singular part
    # must cancel under the +/-t pairing
    got = pv_integrate(
        lambda t: np.sign(t) * np.abs(t) ** (-1.2) + np.exp(-(t * t)),
        QuadratureSpec(tail_order=3.0),
    )
    assert got == pytest.approx(math.sqrt(math.pi), rel=1e-9)


def test_pv_pure_power_tail():
    # even integrand |t|^(-1.5) with no oscillation: closed form 2 cut^(-1/2)/(1/2)
    got = pv_integrate(
        lambda t: np.abs(t) ** (-1.5) * (np.abs(t) >= 0.5),
        QuadratureSpec(inner_cut=0.5, tail_order=1.5),
    )
    # 2 int_0.5^inf t^(-1.5) dt = 4 / sqrt(0.5)
    assert got == pytest.approx(4.0 / math.sqrt(0.5), rel=1e-8)


def test_pv_rejects_nonintegrable_core():
    with pytest.raises(NoConvergenceError):
        pv_integrate(
            lambda t: np.abs(t) ** (-2.5) * np.exp(-(t * t)),
            QuadratureSpec(tail_order=2.5),
        )


def test_adaptive_integrate_finite_and_infinite():
    assert adaptive_integrate(lambda t: math.exp(-t), 0.0, math.inf, 1e-12) == (
        pytest.approx(1.0, rel=1e-10)
    )
    assert adaptive_integrate(lambda t: t * t, 0.0, 2.0, 1e-12) == pytest.approx(
        8.0 / 3.0, rel=1e-12
    )


@settings(max_examples=20, deadline=None)
@given(scale=st.integers(2, 5), alpha=st.floats(0.1, 0.9))
def test_pv_scaling_covariance(scale, alpha):
    # int (1-cos(kt))|t|^(-2-a) scales like k^(1+a); checks node layout
    # has no hidden absolute-scale assumptions.  Integer scales keep the
    # oscillation commensurate with the periodic blocks; the algebraic
    # tail fit does not resolve incommensurate frequencies.
    spec = QuadratureSpec(tail_order=2.0 + alpha, nodes_per_block=96)
    base = pv_integrate(
        lambda t: 2.0 * (np.sin(0.5 * t) / t) ** 2 * np.abs(t) ** (-alpha), spec
    )
    scaled = pv_integrate(
        lambda t: 2.0 * (np.sin(0.5 * scale * t) / t) ** 2
        * scale ** 2
        * np.abs(t) ** (-alpha)
        / scale**2,
        spec,
    )
    assert scaled == pytest.approx(scale ** (1.0 + alpha) * base, rel=5e-7)
