import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nmcband import (
    DomainError,
    KernelParams,
    bifurcation_radii,
    classify_straight,
    find_r1,
    h_r,
    h_r_quadrature,
    mu_k,
    mu_k_quadrature,
    spectrum_row,
)

# independently computed first bifurcation radii (frozen oracle values)
R1_REFERENCE = {
    0.25: 0.5912580009,
    0.5: 0.5209443804,
    0.6: 0.4828609171,
    0.75: 0.4068478606,
    0.9: 0.2812818774,
}


def test_find_r1_reference_values():
    for alpha, want in R1_REFERENCE.items():
        got = find_r1(KernelParams(alpha))
        assert got == pytest.approx(want, abs=5e-10), alpha


def test_h_r_closed_vs_quadrature():
    for alpha in (0.2, 0.5, 0.8):
        p = KernelParams(alpha)
        for radius in (0.3, 1.0, 3.0):
            assert h_r_quadrature(p, radius) == pytest.approx(
                h_r(p, radius), rel=1e-8
            )


def test_h_r_decreasing_in_radius():
    p = KernelParams(0.5)
    radii = np.linspace(0.2, 4.0, 12)
    vals = [h_r(p, r) for r in radii]
    assert all(a > b > 0.0 for a, b in zip(vals, vals[1:]))


def test_mu_k_closed_vs_quadrature():
    for alpha in (0.3, 0.7):
        p = KernelParams(alpha)
        for radius in (0.3, 1.0, 3.0):
            for k in (0, 1, 2, 5, 16):
                assert mu_k_quadrature(p, radius, k) == pytest.approx(
                    mu_k(p, radius, k), rel=1e-8, abs=1e-10
                )


def test_spectrum_increasing_and_mu0_negative():
    for alpha in (0.2, 0.5, 0.8):
        p = KernelParams(alpha)
        for radius in (0.3, 1.0, 3.0):
            row = spectrum_row(p, radius, 16)
            assert row.eigenvalues[0] < 0.0
            assert np.all(np.diff(row.eigenvalues) > 0.0)


def test_radii_are_r1_over_m():
    p = KernelParams(0.5)
    out = bifurcation_radii(p, 8)
    want = out.r1 / np.arange(1, 9)
    assert np.allclose(out.radii, want, rtol=1e-14)
    # defining property: mu_m vanishes at R_m
    for m, radius in enumerate(out.radii, start=1):
        assert abs(mu_k(p, radius, m)) < 1e-9


def test_classify_straight():
    p = KernelParams(0.5)
    r1 = find_r1(p)
    assert classify_straight(p, r1 * 1.2) == "Stable"
    assert classify_straight(p, r1 * 0.8) == "Unstable"
    assert classify_straight(p, r1) == "Degenerate"


def test_find_r1_bad_bracket_expands():
    # a bracket nowhere near the root must still converge via expansion
    p = KernelParams(0.5)
    got = find_r1(p, bracket_lo=3.0, bracket_hi=4.0)
    assert got == pytest.approx(R1_REFERENCE[0.5], abs=1e-9)


def test_mu_k_domain():
    p = KernelParams(0.5)
    with pytest.raises(DomainError):
        mu_k(p, -1.0, 0)
    with pytest.raises(DomainError):
        h_r(p, 0.0)


def test_r1_scaling_near_alpha_one():
    # R_1 = O(sqrt(1 - alpha)): two-alpha ratio test
    r_a = find_r1(KernelParams(0.98))
    r_b = find_r1(KernelParams(0.995))
    ratio = (r_a / r_b) / np.sqrt((1 - 0.98) / (1 - 0.995))
    assert abs(ratio - 1.0) < 0.1


@settings(max_examples=30, deadline=None)
@given(
    alpha=st.floats(0.05, 0.95),
    radius=st.floats(0.1, 5.0),
    k=st.integers(0, 20),
)
def test_mu_k_strictly_increasing_in_k(alpha, radius, k):
    p = KernelParams(alpha)
    assert mu_k(p, radius, k + 1) > mu_k(p, radius, k)


@settings(max_examples=20, deadline=None)
@given(alpha=st.floats(0.05, 0.95))
def test_mu1_increasing_through_r1(alpha):
    # R -> mu_1(R) crosses zero upward at R_1
    p = KernelParams(alpha)
    r1 = find_r1(p)
    assert mu_k(p, 0.9 * r1, 1) < 0.0 < mu_k(p, 1.1 * r1, 1)
