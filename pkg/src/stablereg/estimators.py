"""Regression estimators for (alpha, sigma) of a symmetric stable law.

All three methods regress z(t) = log(-log |phi_n(t)|^2) on log t; the
slope estimates alpha and the intercept log(2 sigma^alpha).  They differ
only in the frequency design:

* fit_infinite_ls: inclusive uniform grid of K+1 points on [x0, x0 + d],
  with the normal-equation design moments taken as exact integrals over
  the interval (the limit of infinitely many grid points).
* fit_kogon_williams: the fixed ten points 0.1, 0.2, ..., 1.0 with
  ordinary discrete least squares.
* fit_koutrouvelis: points t_k = pi k / 25 with ordinary discrete least
  squares; the number of points is caller-supplied and the default of 10
  is a plain convention, not the sample-size-tuned optimum.

Samples are used as-is.  No internal standardization is applied; the
`prescale` hook exists for callers who want one, and estimates then refer
to the transformed data.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .design import IntervalDesign, build_poly_design, log_moment
from .ecf import (
    Z_CLAMP_HI,
    Z_CLAMP_LO,
    Sample,
    TGrid,
    as_sample,
    ecf_modulus_sq,
    z_profile,
    z_transform,
)
from .model import DegenerateSampleError, EstimationError, RegressionLine, recover_sigma

__all__ = [
    "ALPHA_MIN",
    "ALPHA_MAX",
    "DEFAULT_DESIGN",
    "DEFAULT_K",
    "KW_POINTS",
    "KOUTROUVELIS_SPACING",
    "DEFAULT_KOUTROUVELIS_POINTS",
    "YMoments",
    "Estimate",
    "y_moments",
    "fit_infinite_ls",
    "fit_kogon_williams",
    "fit_koutrouvelis",
    "fit_poly_infinite_ls",
]

# Slope estimates are clamped into the admissible index range; 2.0 is the
# Gaussian boundary and 0.05 guards the sigma recovery exponential.
ALPHA_MIN = 0.05
ALPHA_MAX = 2.0

DEFAULT_DESIGN = IntervalDesign(0.1, 1.9)
DEFAULT_K = 500

KW_POINTS = 0.1 * np.arange(1, 11)
KW_POINTS.setflags(write=False)

KOUTROUVELIS_SPACING = math.pi / 25.0
DEFAULT_KOUTROUVELIS_POINTS = 10

ModulusFn = Callable[[np.ndarray], np.ndarray]
PrescaleFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class YMoments:
    """Grid averages mu0 = mean z_j and mu1 = mean log(t_j) z_j."""

    mu0: float
    mu1: float


@dataclass(frozen=True)
class Estimate:
    """Result of one regression fit.

    slope_raw is the slope before clamping into [ALPHA_MIN, ALPHA_MAX];
    slope_clamped records whether the clamp fired.  sigma_hat is recovered
    from the clamped slope.  coef_cov is S^2 X^{-1} with X the design
    moment matrix of the method, so coef_cov[1, 1] = S^2 / det(X).
    clamp_count is the number of grid moduli that hit the z-transform
    clamp, a saturation diagnostic for the frequency window.
    """

    alpha_hat: float
    sigma_hat: float
    intercept: float
    s_squared: float
    coef_cov: np.ndarray
    clamp_count: int
    method: str
    grid_meta: tuple
    slope_raw: float
    slope_clamped: bool

    def __post_init__(self) -> None:
        c = np.asarray(self.coef_cov, dtype=float).copy()
        c.setflags(write=False)
        object.__setattr__(self, "coef_cov", c)

    @property
    def alpha_se(self) -> float:
        return math.sqrt(self.coef_cov[1, 1])


def y_moments(
    sample: Optional[Sample],
    grid: TGrid,
    *,
    modulus_fn: Optional[ModulusFn] = None,
) -> YMoments:
    """Equally weighted grid averages of z and log(t) z over the K+1 points."""
    s = as_sample(sample) if modulus_fn is None and sample is not None else None
    prof = z_profile(s, grid, modulus_fn)
    w = np.log(prof.t)
    return YMoments(mu0=float(prof.z.mean()), mu1=float((w * prof.z).mean()))


def _solve_line(
    w: np.ndarray, z: np.ndarray, x12: float, x22: float
) -> tuple[float, float, float, np.ndarray]:
    """Solve the 2x2 normal equations with supplied design moments.

    Returns (intercept, slope, s_squared, coef_cov) where s_squared uses
    the npts - 1 denominator and coef_cov = s_squared * X^{-1}.
    """
    mu0 = z.mean()
    mu1 = (w * z).mean()
    x_mat = np.array([[1.0, x12], [x12, x22]])
    b0, b1 = np.linalg.solve(x_mat, np.array([mu0, mu1]))
    resid = z - (b0 + b1 * w)
    s2 = float(resid @ resid) / (z.size - 1)
    det = x22 - x12 * x12
    if det <= 0.0:
        raise EstimationError(f"design moment matrix is singular (det={det})")
    cov = (s2 / det) * np.array([[x22, -x12], [-x12, 1.0]])
    return float(b0), float(b1), s2, cov


def _finalize(
    method: str,
    grid_meta: tuple,
    b0: float,
    b1: float,
    s2: float,
    cov: np.ndarray,
    clamp_count: int,
) -> Estimate:
    clamped = not ALPHA_MIN <= b1 <= ALPHA_MAX
    alpha_hat = min(max(b1, ALPHA_MIN), ALPHA_MAX)
    sigma_hat = recover_sigma(RegressionLine(b0, alpha_hat))
    return Estimate(
        alpha_hat=alpha_hat,
        sigma_hat=sigma_hat,
        intercept=b0,
        s_squared=s2,
        coef_cov=cov,
        clamp_count=clamp_count,
        method=method,
        grid_meta=grid_meta,
        slope_raw=b1,
        slope_clamped=clamped,
    )


def _prepare_sample(
    sample, modulus_fn: Optional[ModulusFn], prescale: Optional[PrescaleFn]
) -> Optional[Sample]:
    if modulus_fn is not None:
        return None
    if sample is None:
        raise ValueError("either a sample or a modulus_fn is required")
    s = as_sample(sample)
    if prescale is not None:
        s = Sample(np.asarray(prescale(s.values), dtype=float))
    if np.ptp(s.values) == 0.0:
        raise DegenerateSampleError("all observations are identical")
    return s


def fit_infinite_ls(
    sample=None,
    design: IntervalDesign = DEFAULT_DESIGN,
    k: int = DEFAULT_K,
    *,
    modulus_fn: Optional[ModulusFn] = None,
    design_rule: str = "integral",
    prescale: Optional[PrescaleFn] = None,
) -> Estimate:
    """Fit the z-on-log-t line over an inclusive grid of k+1 frequencies.

    The y side always uses the equally weighted grid averages; the design
    moments come from `design_rule`:

    * "integral" (default): exact integral log-moments of the interval,
      i.e. the infinitely-many-points design.
    * "grid": discrete averages of log t over the same k+1 points, which
      makes the fit identical to ordinary least squares on the grid.

    Requires k >= 2 so the residual variance has positive degrees of
    freedom beyond the two coefficients.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    s = _prepare_sample(sample, modulus_fn, prescale)
    grid = TGrid(design.x0, design.d, k)
    prof = z_profile(s, grid, modulus_fn)
    w = np.log(prof.t)
    if design_rule == "integral":
        x12 = log_moment(design, 1)
        x22 = log_moment(design, 2)
    elif design_rule == "grid":
        x12 = float(w.mean())
        x22 = float((w * w).mean())
    else:
        raise ValueError(f"design_rule must be 'integral' or 'grid', got {design_rule!r}")
    b0, b1, s2, cov = _solve_line(w, prof.z, x12, x22)
    return _finalize("infinite-ls", (design.x0, design.d, k), b0, b1, s2, cov, prof.n_clamped)


def _fit_discrete(
    method: str,
    t_points: np.ndarray,
    sample,
    modulus_fn: Optional[ModulusFn],
    prescale: Optional[PrescaleFn],
) -> Estimate:
    s = _prepare_sample(sample, modulus_fn, prescale)
    if modulus_fn is not None:
        v = np.asarray(modulus_fn(t_points), dtype=float)
    else:
        v = ecf_modulus_sq(s, t_points)
    n_clamped = int(np.count_nonzero((v < Z_CLAMP_LO) | (v > 1.0 - Z_CLAMP_HI)))
    z = z_transform(v)
    w = np.log(t_points)
    x12 = float(w.mean())
    x22 = float((w * w).mean())
    b0, b1, s2, cov = _solve_line(w, z, x12, x22)
    return _finalize(method, tuple(t_points.tolist()), b0, b1, s2, cov, n_clamped)


def fit_kogon_williams(
    sample=None,
    *,
    modulus_fn: Optional[ModulusFn] = None,
    prescale: Optional[PrescaleFn] = None,
) -> Estimate:
    """Discrete least squares on the fixed frequencies 0.1, 0.2, ..., 1.0."""
    return _fit_discrete("kogon-williams", KW_POINTS, sample, modulus_fn, prescale)


def fit_koutrouvelis(
    sample=None,
    num_points: int = DEFAULT_KOUTROUVELIS_POINTS,
    *,
    modulus_fn: Optional[ModulusFn] = None,
    prescale: Optional[PrescaleFn] = None,
) -> Estimate:
    """Discrete least squares on t_k = pi k / 25, k = 1..num_points.

    num_points is left to the caller; the classical procedure picks it
    from the sample size and a preliminary index estimate, and the
    default of 10 makes no such adjustment.
    """
    if num_points < 2:
        raise ValueError(f"num_points must be >= 2, got {num_points}")
    t_points = KOUTROUVELIS_SPACING * np.arange(1, num_points + 1)
    return _fit_discrete("koutrouvelis", t_points, sample, modulus_fn, prescale)


def fit_poly_infinite_ls(y_values, design: IntervalDesign, degree: int) -> np.ndarray:
    """Polynomial-in-t regression with integral design moments.

    y_values are readings on the inclusive uniform grid over the design
    interval (length K+1 defines K).  The right-hand side uses the grid
    averages mean(t^l y) while the moment matrix uses exact integrals, the
    same infinitely-many-points convention as fit_infinite_ls.  Returns
    the degree+1 coefficient vector, constant term first.
    """
    y = np.asarray(y_values, dtype=float)
    if y.ndim != 1:
        raise ValueError("y_values must be 1-dimensional")
    if not np.all(np.isfinite(y)):
        raise ValueError("y_values contains non-finite values")
    if y.size < degree + 2:
        raise ValueError(f"need at least degree + 2 = {degree + 2} grid values, got {y.size}")
    k = y.size - 1
    t = design.x0 + design.d * np.arange(k + 1) / k
    moments = build_poly_design(design, degree)
    rhs = np.array([(t**l * y).mean() for l in range(degree + 1)])
    return np.linalg.solve(moments.matrix, rhs)
