"""Exception hierarchy shared by all nmcband modules."""


class NmcbandError(Exception):
    """Base class for all library errors."""


class DomainError(NmcbandError):
    """An argument lies outside the mathematical domain of the operation."""


class SingularityError(DomainError):
    """Evaluation requested exactly at a kernel singularity."""


class NoConvergenceError(NmcbandError):
    """An iterative or adaptive procedure failed to reach its tolerance.

    Carries the best available estimate and, for iterative solvers, the
    residual history.
    """

    def __init__(self, message, best_estimate=None, history=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.history = history if history is not None else []


class BracketError(NmcbandError):
    """A root bracket could not be established."""


class TrackingError(NmcbandError):
    """Eigenpair continuation lost its label (overlap below threshold)."""


class AccuracyError(NmcbandError):
    """A computed quantity failed an internal consistency bound."""


class FitQualityError(NmcbandError):
    """A least-squares fit left too much unexplained residual."""


class DegenerateDenominatorError(NmcbandError):
    """A ratio in the Rayleigh compression has a vanishing denominator."""
