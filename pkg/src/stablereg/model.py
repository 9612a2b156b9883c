"""Symmetric stable characteristic-function model.

For a symmetric alpha-stable law with scale sigma the characteristic
function satisfies |phi(t)|^2 = exp(-2 sigma^alpha |t|^alpha), so

    log(-log |phi(t)|^2) = log(2 sigma^alpha) + alpha log t,   t > 0,

which is linear in log t.  Everything in this package is regression on
that line: the slope is alpha, the intercept encodes sigma.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "EstimationError",
    "DegenerateSampleError",
    "StableParams",
    "RegressionLine",
    "cf_modulus_sq",
    "exact_y",
    "recover_sigma",
]


class EstimationError(RuntimeError):
    """A fit could not produce a usable parameter estimate."""


class DegenerateSampleError(EstimationError):
    """All observations identical; the ECF carries no slope information."""


@dataclass(frozen=True)
class StableParams:
    """Parameters of a stable law; only the symmetric case (beta = mu = 0)
    is supported by the sampler and the estimators target it."""

    alpha: float
    sigma: float
    beta: float = 0.0
    mu: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha <= 2.0:
            raise ValueError(f"alpha must be in (0, 2], got {self.alpha}")
        if not (self.sigma > 0.0 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must be finite and positive, got {self.sigma}")
        if not -1.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must be in [-1, 1], got {self.beta}")
        if not math.isfinite(self.mu):
            raise ValueError(f"mu must be finite, got {self.mu}")


@dataclass(frozen=True)
class RegressionLine:
    """Fitted line z = intercept + slope * log t."""

    intercept: float
    slope: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.intercept) and math.isfinite(self.slope)):
            raise ValueError("regression coefficients must be finite")


def cf_modulus_sq(params: StableParams, t):
    """Squared modulus of the characteristic function, exp(-2 sigma^alpha t^alpha).

    `t` may be a positive scalar or array; the symmetric model only ever
    needs t > 0 since the modulus is even in t.
    """
    t = np.asarray(t, dtype=float)
    if not np.all(t > 0.0):
        raise ValueError("t must be positive")
    out = np.exp(-2.0 * params.sigma**params.alpha * t**params.alpha)
    return float(out) if out.ndim == 0 else out


def exact_y(params: StableParams, t):
    """Population value of log(-log |phi(t)|^2) at frequency t > 0."""
    t = np.asarray(t, dtype=float)
    if not np.all(t > 0.0):
        raise ValueError("t must be positive")
    out = math.log(2.0) + params.alpha * math.log(params.sigma) + params.alpha * np.log(t)
    return float(out) if out.ndim == 0 else out


def recover_sigma(line: RegressionLine) -> float:
    """Invert the intercept relation: sigma = exp((intercept - log 2) / slope).

    Requires a positive slope; a non-positive slope has no stable-law
    interpretation and raises EstimationError rather than returning junk.
    """
    if line.slope <= 0.0:
        raise EstimationError(f"slope must be positive to recover sigma, got {line.slope}")
    return math.exp((line.intercept - math.log(2.0)) / line.slope)
