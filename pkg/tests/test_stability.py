import math

import numpy as np
import pytest

from nmcband import (
    CosineSeries,
    DomainError,
    KernelParams,
    continue_branch,
    find_r1,
    mu_k,
    rayleigh_compression,
    sigma_integral_route,
    sigma_specfun_route,
    stability_sweep,
    track_spectrum,
)
from nmcband.branch import BranchPoint
from nmcband.stability import TrackedEigenpair

# frozen cross-checked values of the amplitude-squared coefficient
SIGMA_REFERENCE = {
    0.3: -12.256269295750489,
    0.5: -19.339838817648662,
    0.6: -26.740866835688315,
    0.9: -261.1506807276423,
}


def test_sigma_reference_values():
    for alpha, want in SIGMA_REFERENCE.items():
        p = KernelParams(alpha)
        r1 = find_r1(p)
        assert sigma_specfun_route(p, r1) == pytest.approx(want, rel=1e-9), alpha


def test_sigma_routes_agree():
    for alpha in (0.1, 0.4, 0.8):
        p = KernelParams(alpha)
        r1 = find_r1(p)
        s_int = sigma_integral_route(p, r1)
        s_spec = sigma_specfun_route(p, r1)
        assert s_int == pytest.approx(s_spec, rel=1e-9)


def test_sigma_specfun_survives_alpha_near_one():
    # each Gamma factor degenerates but the log-space combination stays
    # finite
    p = KernelParams(0.999)
    r1 = find_r1(p)
    val = sigma_specfun_route(p, r1)
    assert math.isfinite(val)
    assert val < 0.0


def test_sigma_domain():
    p = KernelParams(0.5)
    with pytest.raises(DomainError):
        sigma_specfun_route(p, -1.0)
    with pytest.raises(DomainError):
        sigma_integral_route(p, 0.0)


def test_track_spectrum_at_zero_amplitude(params_06, r1_06):
    pt = BranchPoint(
        m=1,
        a=0.0,
        gamma=1.0,
        v=CosineSeries(np.zeros(13)),
        residual_inf=0.0,
        nmc_value=0.0,
    )
    tracked = track_spectrum(params_06, pt, k_track=(0, 1, 2), r_m=r1_06)
    for pair in tracked:
        want = mu_k(params_06, r1_06, pair.k)
        assert pair.mu == pytest.approx(want, abs=1e-7)
        assert pair.overlap > 0.999


def test_rayleigh_reduces_to_mu1_at_zero_amplitude(params_06, r1_06):
    # a = 0: the soft mode has zero mean, Q = 0, and the compression
    # eigenvalue collapses to mu_1
    pt = BranchPoint(
        m=1,
        a=0.0,
        gamma=1.0,
        v=CosineSeries(np.zeros(13)),
        residual_inf=0.0,
        nmc_value=0.0,
    )
    tracked = track_spectrum(params_06, pt, k_track=(0, 1), r_m=r1_06)
    rq = rayleigh_compression(params_06, pt, tracked)
    assert rq == pytest.approx(mu_k(params_06, r1_06, 1), abs=1e-7)


def test_rayleigh_requires_zero_mode_first(params_06):
    soft = TrackedEigenpair(k=1, mu=0.0, vec=CosineSeries([0.0, 1.0]), overlap=1.0)
    with pytest.raises(DomainError):
        rayleigh_compression(params_06, None, (soft, soft))


def test_rayleigh_negative_along_first_branch(params_06, r1_06):
    curve = continue_branch(params_06, 1, 0.03 * r1_06, 2, 12)
    for pt in curve.points:
        if pt.a == 0.0:
            continue
        tracked = track_spectrum(params_06, pt, k_track=(0, 1), r_m=r1_06)
        assert rayleigh_compression(params_06, pt, tracked) < 0.0


def test_stability_sweep_records_failures():
    reports = stability_sweep([0.5])
    assert len(reports) == 1
    assert reports[0].verdict == "unstable"
    assert reports[0].status == "ok"
    assert reports[0].sigma_specfun == pytest.approx(SIGMA_REFERENCE[0.5], rel=1e-9)
    # an invalid grid point is reported in-row, not raised
    bad = stability_sweep([1.5])
    assert bad[0].verdict == "error"
    assert "DomainError" in bad[0].status
