import math

import numpy as np
import pytest

from stablereg.design import (
    MAX_POLY_DEGREE,
    DesignMoments,
    IntervalDesign,
    build_log_design,
    build_poly_design,
    central_power_moment,
    log_moment,
    power_moment,
    quadrature_oracle,
)

# mpmath, 40 digits, for the default interval [0.1, 2.0]
X12_DEFAULT = -0.14918269977931833
X22_DEFAULT = 0.5250581452368277


def test_interval_validation():
    IntervalDesign(0.0, 1.0)  # x0 = 0 is fine for polynomial designs
    with pytest.raises(ValueError):
        IntervalDesign(-0.1, 1.0)
    with pytest.raises(ValueError):
        IntervalDesign(0.1, 0.0)
    with pytest.raises(ValueError):
        IntervalDesign(0.1, -1.0)
    with pytest.raises(ValueError):
        IntervalDesign(float("nan"), 1.0)


def test_log_moment_default_interval():
    d = IntervalDesign(0.1, 1.9)
    assert log_moment(d, 1) == pytest.approx(X12_DEFAULT, rel=1e-12)
    assert log_moment(d, 2) == pytest.approx(X22_DEFAULT, rel=1e-12)


def test_log_moment_unit_mass_interval():
    # over [1, e]: integral of log t is exactly 1, so the average is 1/(e-1)
    d = IntervalDesign(1.0, math.e - 1.0)
    assert log_moment(d, 1) == pytest.approx(0.5819767068693265, rel=1e-14)


def test_log_moment_domain_errors():
    with pytest.raises(ValueError):
        log_moment(IntervalDesign(0.0, 1.0), 1)
    with pytest.raises(ValueError):
        log_moment(IntervalDesign(0.1, 1.9), 3)
    with pytest.raises(ValueError):
        log_moment(IntervalDesign(0.1, 1.9), 0)


def test_power_moment_values():
    assert power_moment(IntervalDesign(0.0, 1.0), 1) == pytest.approx(0.5, abs=0)
    assert power_moment(IntervalDesign(0.0, 1.0), 0) == pytest.approx(1.0, abs=0)
    # (b^3 - a^3) / (3 d) at [0.1, 2.0] = x0^2 + x0 d + d^2 / 3
    assert power_moment(IntervalDesign(0.1, 1.9), 2) == pytest.approx(
        0.01 + 0.19 + 1.9**2 / 3.0, rel=1e-14
    )
    assert power_moment(IntervalDesign(0.5, 2.0), 3) == pytest.approx(4.875, rel=1e-14)
    with pytest.raises(ValueError):
        power_moment(IntervalDesign(0.1, 1.9), -1)


def test_central_power_moment():
    d = IntervalDesign(0.3, 2.0)
    assert central_power_moment(d, 0) == 1.0
    assert central_power_moment(d, 1) == 0.0
    assert central_power_moment(d, 3) == 0.0
    assert central_power_moment(d, 2) == pytest.approx(2.0**2 / 12.0, rel=1e-15)
    assert central_power_moment(d, 4) == pytest.approx(2.0**4 / 80.0, rel=1e-15)


def test_build_log_design_shape_and_entries():
    m = build_log_design(IntervalDesign(0.1, 1.9))
    assert m.model_kind == "log-t"
    assert m.matrix.shape == (2, 2)
    assert m.matrix[0, 0] == 1.0
    assert m.matrix[0, 1] == m.matrix[1, 0]
    assert m.matrix[0, 1] == pytest.approx(X12_DEFAULT, rel=1e-12)
    assert m.matrix[1, 1] == pytest.approx(X22_DEFAULT, rel=1e-12)
    assert m.determinant == pytest.approx(X22_DEFAULT - X12_DEFAULT**2, rel=1e-12)
    assert m.determinant > 0.0
    with pytest.raises(ValueError):
        m.matrix[0, 0] = 5.0


def test_build_poly_design_degree_one_matrix():
    rng = np.random.default_rng(11)
    for _ in range(200):
        x0 = rng.uniform(0.0, 5.0)
        d = rng.uniform(0.1, 10.0)
        m = build_poly_design(IntervalDesign(x0, d), 1)
        assert m.model_kind == "linear-t"
        assert m.matrix[0, 1] == pytest.approx(x0 + d / 2.0, rel=1e-14)
        assert m.matrix[1, 1] == pytest.approx(x0**2 + x0 * d + d**2 / 3.0, rel=1e-13)
        # determinant must keep full relative accuracy even when the naive
        # m22 - m12^2 route cancels catastrophically (large x0, small d)
        assert m.determinant == pytest.approx(d * d / 12.0, rel=1e-14)


def test_degree_one_determinant_survives_translation():
    # worst cancellation regime for the naive route
    m = build_poly_design(IntervalDesign(5.0, 0.1), 1)
    assert m.determinant == pytest.approx(0.1 * 0.1 / 12.0, rel=1e-14)


def test_build_poly_design_hilbert():
    # moments of [0, 1] give the Hilbert matrix
    m = build_poly_design(IntervalDesign(0.0, 1.0), 2)
    expected = np.array(
        [[1.0, 1.0 / 2.0, 1.0 / 3.0], [1.0 / 2.0, 1.0 / 3.0, 1.0 / 4.0], [1.0 / 3.0, 1.0 / 4.0, 1.0 / 5.0]]
    )
    np.testing.assert_array_equal(m.matrix, expected)
    assert m.model_kind == "polynomial(degree 2)"


def test_build_poly_design_matches_quadrature():
    d = IntervalDesign(0.2, 1.5)
    m = build_poly_design(d, 3)
    for i in range(4):
        for j in range(4):
            ref = quadrature_oracle(lambda t, p=i + j: t**p, d)
            assert m.matrix[i, j] == pytest.approx(ref, rel=1e-10)


def test_build_poly_design_degree_bounds():
    d = IntervalDesign(0.1, 1.9)
    with pytest.raises(ValueError):
        build_poly_design(d, 0)
    with pytest.raises(ValueError):
        build_poly_design(d, MAX_POLY_DEGREE + 1)
    build_poly_design(d, MAX_POLY_DEGREE)


def test_moment_matrices_are_spd_within_float64_envelope():
    # Cholesky must succeed for every degree up to the cap as long as the
    # interval is not too narrow relative to its offset (x0 / d <= 1/2);
    # beyond that regime float64 Hankel matrices of degree 7-8 go
    # numerically indefinite, which is exactly why degrees above 8 are
    # refused outright.
    rng = np.random.default_rng(12)
    for _ in range(100):
        x0 = rng.uniform(0.01, 2.0)
        d = rng.uniform(2.0 * x0, 10.0)
        design = IntervalDesign(x0, d)
        for degree in range(1, MAX_POLY_DEGREE + 1):
            np.linalg.cholesky(build_poly_design(design, degree).matrix)
        if x0 > 0.0:
            np.linalg.cholesky(build_log_design(design).matrix)


def test_designmoments_rejects_nonsquare():
    with pytest.raises(ValueError):
        DesignMoments(matrix=np.ones((2, 3)), model_kind="log-t", determinant=1.0)


def test_quadrature_oracle_known_integrals():
    assert quadrature_oracle(lambda t: 1.0, IntervalDesign(0.3, 2.2)) == pytest.approx(1.0, rel=1e-12)
    assert quadrature_oracle(lambda t: t * t, IntervalDesign(0.0, 1.0)) == pytest.approx(
        1.0 / 3.0, rel=1e-12
    )
    assert quadrature_oracle(math.log, IntervalDesign(0.1, 1.9)) == pytest.approx(
        X12_DEFAULT, rel=1e-12
    )


def test_closed_forms_agree_with_quadrature_across_designs():
    rng = np.random.default_rng(13)
    for _ in range(60):
        x0 = rng.uniform(0.01, 5.0)
        d = rng.uniform(0.1, 10.0)
        design = IntervalDesign(x0, d)
        assert log_moment(design, 1) == pytest.approx(
            quadrature_oracle(math.log, design), rel=1e-10, abs=1e-12
        )
        assert log_moment(design, 2) == pytest.approx(
            quadrature_oracle(lambda t: math.log(t) ** 2, design), rel=1e-10, abs=1e-12
        )
        for m in (1, 2, 5):
            assert power_moment(design, m) == pytest.approx(
                quadrature_oracle(lambda t, p=m: t**p, design), rel=1e-10
            )


def test_log_moment_two_uses_correction_term():
    # the -2 d x12 correction in the m = 2 closed form is load-bearing;
    # check the full expression against an independent quadrature
    design = IntervalDesign(0.7, 3.3)
    ref = quadrature_oracle(lambda t: math.log(t) ** 2, design)
    assert log_moment(design, 2) == pytest.approx(ref, rel=1e-12)


def test_grid_average_converges_to_integral_moment():
    # discrete mean of log t over the inclusive grid differs from the
    # integral moment by O(1/K): doubling K halves the gap
    design = IntervalDesign(0.1, 1.9)
    x12 = log_moment(design, 1)

    def gap(k):
        t = design.x0 + design.d * np.arange(k + 1) / k
        return abs(np.log(t).mean() - x12)

    assert gap(1000) > 0.0
    assert gap(500) / gap(1000) == pytest.approx(2.0, abs=0.1)
