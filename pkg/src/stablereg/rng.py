"""Chambers-Mallows-Stuck sampler for symmetric stable variates.

With V uniform on (-pi/2, pi/2) and W standard exponential,

    X = sin(alpha V) / cos(V)^(1/alpha) * (cos((1 - alpha) V) / W)^((1 - alpha) / alpha)

is standard symmetric alpha-stable.  At alpha = 1 the second factor
degenerates and X = tan(V) (standard Cauchy); at alpha = 2 the formula
reduces to 2 sin(V) sqrt(W), a normal with variance 2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .ecf import Sample
from .model import StableParams

__all__ = ["ALPHA_ONE_TOL", "StableSampler", "replicate_seed"]

# Width of the Cauchy branch around alpha = 1; inside it the general
# formula loses all relative accuracy to the (1 - alpha)/alpha exponent.
ALPHA_ONE_TOL = 1e-8

_SEED_MAX = 2**64


def _check_seed(value: int, name: str) -> None:
    if not isinstance(value, (int, np.integer)) or not 0 <= value < _SEED_MAX:
        raise ValueError(f"{name} must be an integer in [0, 2^64), got {value!r}")


@dataclass
class StableSampler:
    """Seeded stream of symmetric stable draws.

    The stream is keyed by (seed, stream_id); samplers built with the same
    pair produce identical output, and distinct stream_ids give
    statistically independent streams off one base seed.
    """

    params: StableParams
    seed: int
    stream_id: int = 0
    _rng: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.params.beta != 0.0 or self.params.mu != 0.0:
            raise ValueError("only symmetric centered laws are supported (beta = mu = 0)")
        _check_seed(self.seed, "seed")
        _check_seed(self.stream_id, "stream_id")
        self._rng = np.random.default_rng(np.random.SeedSequence([self.seed, self.stream_id]))

    def draw(self, n: int) -> Sample:
        """Next n variates from the stream as a Sample (n >= 2)."""
        values = self.draw_array(n)
        return Sample(values)

    def draw_array(self, n: int) -> np.ndarray:
        """Next n variates as a plain array; n >= 1."""
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        alpha = self.params.alpha
        v = math.pi * (self._rng.random(n) - 0.5)
        w = -np.log1p(-self._rng.random(n))
        if abs(alpha - 1.0) < ALPHA_ONE_TOL:
            x = np.tan(v)
        else:
            ratio = (1.0 - alpha) / alpha
            x = (
                np.sin(alpha * v)
                / np.cos(v) ** (1.0 / alpha)
                * (np.cos((1.0 - alpha) * v) / w) ** ratio
            )
        return self.params.sigma * x


def replicate_seed(base_seed: int, index: int) -> tuple[int, int]:
    """(seed, stream_id) pair for replication `index` of a run keyed by
    base_seed; deterministic, and distinct indices yield disjoint streams."""
    _check_seed(base_seed, "base_seed")
    _check_seed(index, "index")
    return (base_seed, index)
