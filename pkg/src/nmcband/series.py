"""Truncated even cosine series u(s) = sum_j c_j cos(j s).

The series is the common representation for band generatrices,
branch corrections and eigenvector expansions.  Evaluation uses the
Clenshaw recurrence, which is stable for the coefficient sizes that
occur here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class CosineSeries:
    """Even 2pi-periodic function given by cosine coefficients c_0..c_N."""

    coeffs: np.ndarray
    n_modes: int = field(default=-1)

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=float))
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coeffs must be a non-empty 1-D sequence")
        object.__setattr__(self, "coeffs", c)
        n = self.n_modes
        if n < 0:
            n = c.size - 1
        elif n != c.size - 1:
            raise ValueError("n_modes inconsistent with coefficient count")
        object.__setattr__(self, "n_modes", n)

    @staticmethod
    def constant(value, n_modes=0):
        c = np.zeros(n_modes + 1)
        c[0] = float(value)
        return CosineSeries(c)

    def with_coeff(self, j, value):
        c = self.coeffs.copy()
        c[j] = float(value)
        return CosineSeries(c)

    def derivative(self):
        """Coefficient-space derivative; returns (sine coefficients b_j)
        with u'(s) = -sum_j b_j sin(j s), b_j = j c_j."""
        j = np.arange(self.coeffs.size)
        return j * self.coeffs

    def __call__(self, s):
        return eval_series(self, s)


def eval_series(u, s):
    """Evaluate sum_j c_j cos(j s) by the Clenshaw recurrence.

    Accepts scalar or array ``s``; vectorizes over ``s``.
    """
    c = u.coeffs
    s_arr = np.asarray(s, dtype=float)
    x = np.cos(s_arr)
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    for ck in c[:0:-1]:
        b1, b2 = ck + 2.0 * x * b1 - b2, b1
    out = c[0] + x * b1 - b2
    if np.isscalar(s) or s_arr.ndim == 0:
        return float(out)
    return out


def eval_series_deriv(u, s):
    """u'(s) = -sum_j j c_j sin(j s), via Clenshaw on the sine series."""
    b = u.derivative()  # b_j = j c_j, b_0 = 0
    s_arr = np.asarray(s, dtype=float)
    x = np.cos(s_arr)
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    # sine Clenshaw: sum_{j>=1} b_j sin(j s) = sin(s) * y_1 with the same
    # three-term recurrence run down to j = 1
    for bk in b[:0:-1]:
        b1, b2 = bk + 2.0 * x * b1 - b2, b1
    out = -np.sin(s_arr) * b1
    if np.isscalar(s) or s_arr.ndim == 0:
        return float(out)
    return out


def eval_series_second_deriv(u, s):
    """u''(s) = -sum_j j^2 c_j cos(j s)."""
    j = np.arange(u.coeffs.size)
    dd = CosineSeries(-(j * j) * u.coeffs)
    return eval_series(dd, s)
