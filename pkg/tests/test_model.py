import math

import numpy as np
import pytest

from stablereg.model import (
    EstimationError,
    RegressionLine,
    StableParams,
    cf_modulus_sq,
    exact_y,
    recover_sigma,
)


def test_params_accept_valid_range():
    p = StableParams(alpha=1.5, sigma=2.0)
    assert p.beta == 0.0 and p.mu == 0.0


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(alpha=0.0, sigma=1.0),
        dict(alpha=2.1, sigma=1.0),
        dict(alpha=-0.3, sigma=1.0),
        dict(alpha=float("nan"), sigma=1.0),
        dict(alpha=1.0, sigma=0.0),
        dict(alpha=1.0, sigma=-2.0),
        dict(alpha=1.0, sigma=float("inf")),
        dict(alpha=1.0, sigma=1.0, beta=1.5),
        dict(alpha=1.0, sigma=1.0, beta=-1.5),
        dict(alpha=1.0, sigma=1.0, mu=float("nan")),
    ],
)
def test_params_reject_out_of_range(kwargs):
    with pytest.raises(ValueError):
        StableParams(**kwargs)


def test_cf_modulus_sq_known_values():
    assert cf_modulus_sq(StableParams(1.5, 1.0), 1.0) == pytest.approx(math.exp(-2.0), rel=1e-15)
    assert cf_modulus_sq(StableParams(2.0, 1.0), 0.5) == pytest.approx(math.exp(-0.5), rel=1e-15)
    # mpmath, 40 digits: exp(-2 * 1.3^0.7 * 0.3^0.7)
    assert cf_modulus_sq(StableParams(0.7, 1.3), 0.3) == pytest.approx(
        0.35536617476437665, rel=1e-15
    )


def test_cf_modulus_sq_rejects_nonpositive_t():
    p = StableParams(1.5, 1.0)
    for t in (0.0, -1.0):
        with pytest.raises(ValueError):
            cf_modulus_sq(p, t)
    with pytest.raises(ValueError):
        cf_modulus_sq(p, np.array([0.5, -0.5]))


def test_cf_modulus_sq_bounds_and_monotonicity():
    rng = np.random.default_rng(1)
    for _ in range(50):
        p = StableParams(alpha=rng.uniform(0.1, 2.0), sigma=rng.uniform(0.1, 2.0))
        t = np.sort(rng.uniform(0.01, 3.0, size=20))
        v = cf_modulus_sq(p, t)
        assert np.all(v > 0.0) and np.all(v <= 1.0)
        assert np.all(np.diff(v) < 0.0)


def test_cf_modulus_sq_far_tail_underflows_to_zero():
    # exp(-2 sigma^alpha t^alpha) leaves float64 range in the far tail;
    # the value must underflow cleanly, never go negative or non-finite
    v = cf_modulus_sq(StableParams(2.0, 5.0), 100.0)
    assert v == 0.0


def test_cf_modulus_sq_vectorized_matches_scalar():
    p = StableParams(1.2, 0.8)
    t = np.array([0.1, 1.0, 2.5])
    v = cf_modulus_sq(p, t)
    assert v.shape == (3,)
    for i, ti in enumerate(t):
        assert v[i] == cf_modulus_sq(p, float(ti))


def test_exact_y_known_values():
    assert exact_y(StableParams(1.5, 1.0), 1.0) == pytest.approx(math.log(2.0), abs=1e-15)
    # sigma = (1/2)^(1/alpha) makes 2 sigma^alpha = 1, so y(1) = 0
    assert exact_y(StableParams(1.0, 0.5), 1.0) == pytest.approx(0.0, abs=1e-15)
    assert exact_y(StableParams(1.5, 1.0), math.e) == pytest.approx(math.log(2.0) + 1.5, rel=1e-15)


def test_exact_y_is_linear_in_log_t():
    rng = np.random.default_rng(2)
    for _ in range(50):
        p = StableParams(alpha=rng.uniform(0.1, 2.0), sigma=rng.uniform(0.1, 5.0))
        t1, t2 = rng.uniform(0.05, 8.0, size=2)
        slope = (exact_y(p, t2) - exact_y(p, t1)) / (math.log(t2) - math.log(t1))
        assert slope == pytest.approx(p.alpha, rel=1e-9)


def test_exact_y_consistent_with_modulus():
    rng = np.random.default_rng(3)
    for _ in range(50):
        p = StableParams(alpha=rng.uniform(0.2, 2.0), sigma=rng.uniform(0.2, 3.0))
        t = rng.uniform(0.05, 4.0)
        assert exact_y(p, t) == pytest.approx(
            math.log(-math.log(cf_modulus_sq(p, t))), rel=1e-10, abs=1e-12
        )


def test_exact_y_rejects_nonpositive_t():
    with pytest.raises(ValueError):
        exact_y(StableParams(1.5, 1.0), 0.0)


def test_regression_line_rejects_nonfinite():
    with pytest.raises(ValueError):
        RegressionLine(float("nan"), 1.0)
    with pytest.raises(ValueError):
        RegressionLine(0.0, float("inf"))


def test_recover_sigma_known_values():
    assert recover_sigma(RegressionLine(math.log(2.0), 1.5)) == pytest.approx(1.0, rel=1e-15)
    assert recover_sigma(RegressionLine(0.0, 1.0)) == pytest.approx(0.5, rel=1e-15)
    # mpmath, 40 digits: log(2 * 1.3^0.7) = 0.876802165687189
    assert recover_sigma(RegressionLine(0.876802165687189, 0.7)) == pytest.approx(1.3, rel=1e-14)


def test_recover_sigma_rejects_nonpositive_slope():
    for slope in (0.0, -1.0):
        with pytest.raises(EstimationError):
            recover_sigma(RegressionLine(1.0, slope))


def test_recover_sigma_round_trip():
    rng = np.random.default_rng(4)
    for _ in range(200):
        alpha = rng.uniform(0.3, 2.0)
        sigma = rng.uniform(0.05, 20.0)
        intercept = math.log(2.0) + alpha * math.log(sigma)
        assert recover_sigma(RegressionLine(intercept, alpha)) == pytest.approx(sigma, rel=1e-12)
