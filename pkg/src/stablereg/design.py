"""Design-moment matrices for regression against a continuum of frequencies.

With infinitely many grid points on [x0, x0 + d] the normal equations of
the least-squares line use integral averages of the regressors instead of
discrete sums.  For the log-t model the entries have closed forms; for
polynomial-in-t models they are uniform power moments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

__all__ = [
    "IntervalDesign",
    "DesignMoments",
    "MAX_POLY_DEGREE",
    "log_moment",
    "power_moment",
    "central_power_moment",
    "build_log_design",
    "build_poly_design",
    "quadrature_oracle",
]

# Beyond degree 8 the power-moment Hankel matrix is numerically singular
# in float64 for typical intervals (Cholesky starts failing), so higher
# degrees are refused instead of silently producing garbage.
MAX_POLY_DEGREE = 8


@dataclass(frozen=True)
class IntervalDesign:
    """Frequency interval [x0, x0 + d].  x0 = 0 is allowed for polynomial
    designs; log-model operations require x0 > 0."""

    x0: float
    d: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x0) and self.x0 >= 0.0):
            raise ValueError(f"x0 must be >= 0, got {self.x0}")
        if not (math.isfinite(self.d) and self.d > 0.0):
            raise ValueError(f"d must be positive, got {self.d}")

    def _require_positive_x0(self) -> None:
        if self.x0 <= 0.0:
            raise ValueError("log design moments require x0 > 0")


@dataclass(frozen=True)
class DesignMoments:
    """Moment matrix of a regression design plus its determinant.

    model_kind is one of "log-t", "linear-t" or "polynomial(degree m)".
    The determinant is computed by a cancellation-safe route where one is
    known (see build_poly_design), not by cofactor expansion of the
    stored matrix.
    """

    matrix: np.ndarray
    model_kind: str
    determinant: float

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"moment matrix must be square, got shape {m.shape}")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


def log_moment(design: IntervalDesign, m: int) -> float:
    """Integral average of log(t)^m over the design interval, m in {1, 2}.

    Closed forms via integration by parts:
      m=1: [b log b - a log a - d] / d
      m=2: [b log^2 b - a log^2 a - 2 d x12] / d   with x12 = log_moment(.., 1)
    """
    design._require_positive_x0()
    a = design.x0
    b = design.x0 + design.d
    if m == 1:
        return (b * math.log(b) - a * math.log(a) - design.d) / design.d
    if m == 2:
        x12 = log_moment(design, 1)
        return (b * math.log(b) ** 2 - a * math.log(a) ** 2 - 2.0 * design.d * x12) / design.d
    raise ValueError(f"log_moment supports m in {{1, 2}}, got {m}")


def power_moment(design: IntervalDesign, m: int) -> float:
    """Integral average of t^m over [x0, x0 + d] for integer m >= 0."""
    if m < 0 or m != int(m):
        raise ValueError(f"power_moment needs an integer m >= 0, got {m}")
    a = design.x0
    b = design.x0 + design.d
    return (b ** (m + 1) - a ** (m + 1)) / (design.d * (m + 1))


def central_power_moment(design: IntervalDesign, m: int) -> float:
    """Integral average of (t - midpoint)^m; zero for odd m, d^m / (2^m (m+1))
    for even m.  Free of the cancellation that plagues raw-moment routes."""
    if m < 0 or m != int(m):
        raise ValueError(f"central_power_moment needs an integer m >= 0, got {m}")
    if m % 2 == 1:
        return 0.0
    h = design.d / 2.0
    return 2.0 * h ** (m + 1) / (design.d * (m + 1))


def build_log_design(design: IntervalDesign) -> DesignMoments:
    """2x2 moment matrix of the model z ~ 1 + log t under integral averaging:

        [[1,   x12],
         [x12, x22]]   with x1m = log_moment(design, m).
    """
    x12 = log_moment(design, 1)
    x22 = log_moment(design, 2)
    matrix = np.array([[1.0, x12], [x12, x22]])
    return DesignMoments(matrix=matrix, model_kind="log-t", determinant=x22 - x12 * x12)


def build_poly_design(design: IntervalDesign, degree: int) -> DesignMoments:
    """Hankel moment matrix for the model y ~ 1 + t + ... + t^degree.

    Entry (i, j) is the integral average of t^(i+j).  For degree 1 the
    determinant equals the variance of t over the interval, evaluated in
    centered coordinates (translation invariance) so it carries no
    cancellation error; higher degrees fall back to np.linalg.det, which
    is adequate for the conditioning diagnostics it feeds.
    """
    if not 1 <= degree <= MAX_POLY_DEGREE:
        raise ValueError(f"degree must be in [1, {MAX_POLY_DEGREE}], got {degree}")
    size = degree + 1
    moments = [power_moment(design, m) for m in range(2 * degree + 1)]
    matrix = np.array([[moments[i + j] for j in range(size)] for i in range(size)])
    if degree == 1:
        det = central_power_moment(design, 2)
        kind = "linear-t"
    else:
        det = float(np.linalg.det(matrix))
        kind = f"polynomial(degree {degree})"
    return DesignMoments(matrix=matrix, model_kind=kind, determinant=det)


def quadrature_oracle(f: Callable[[float], float], design: IntervalDesign) -> float:
    """Integral average of f over the design interval by adaptive quadrature.

    Independent reference route for the closed-form moments above; raises
    if the quadrature reports a convergence problem instead of returning a
    value of unknown quality.
    """
    a = design.x0
    b = design.x0 + design.d
    result = integrate.quad(f, a, b, epsabs=1e-14, epsrel=1e-12, limit=200, full_output=1)
    if len(result) > 3:
        raise RuntimeError(f"quadrature did not converge: {result[3]}")
    return result[0] / design.d
