"""Periodic constant nonlocal-mean-curvature bands in the plane.

Straight-band spectra, bifurcation radii, Newton continuation of the
bifurcated near-band branches, and the stability coefficient of the
first branch by three independent routes.
"""

from .branch import BranchCurve, BranchPoint, continue_branch, newton_solve, symmetry_check
from .errors import (
    AccuracyError,
    BracketError,
    DegenerateDenominatorError,
    DomainError,
    FitQualityError,
    NmcbandError,
    NoConvergenceError,
    SingularityError,
    TrackingError,
)
from .kernel import KernelParams
from .nmc import OperatorMatrix, assemble_operator, kappa_m, nmc_eval
from .quadrature import QuadratureSpec, adaptive_integrate, pv_integrate
from .series import CosineSeries
from .spectrum import (
    BifurcationRadii,
    SpectrumRow,
    bifurcation_radii,
    classify_straight,
    find_r1,
    h_r,
    h_r_quadrature,
    mu_k,
    mu_k_quadrature,
    spectrum_row,
)
from .stability import (
    StabilityReport,
    TrackedEigenpair,
    rayleigh_compression,
    sigma_fit_route,
    sigma_integral_route,
    sigma_specfun_route,
    stability_sweep,
    track_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "BifurcationRadii",
    "BracketError",
    "BranchCurve",
    "BranchPoint",
    "CosineSeries",
    "DegenerateDenominatorError",
    "DomainError",
    "FitQualityError",
    "KernelParams",
    "NmcbandError",
    "NoConvergenceError",
    "OperatorMatrix",
    "QuadratureSpec",
    "SingularityError",
    "SpectrumRow",
    "StabilityReport",
    "TrackedEigenpair",
    "TrackingError",
    "adaptive_integrate",
    "assemble_operator",
    "bifurcation_radii",
    "classify_straight",
    "continue_branch",
    "find_r1",
    "h_r",
    "h_r_quadrature",
    "kappa_m",
    "mu_k",
    "mu_k_quadrature",
    "newton_solve",
    "nmc_eval",
    "pv_integrate",
    "rayleigh_compression",
    "sigma_fit_route",
    "sigma_integral_route",
    "sigma_specfun_route",
    "spectrum_row",
    "stability_sweep",
    "symmetry_check",
    "track_spectrum",
]
