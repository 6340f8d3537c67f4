import math
import random

import pytest

from combmag.category import InvariantViolation
from combmag.fixtures import (
    equilateral_space,
    grid_six_points,
    magnitude_equilateral,
    magnitude_two_points,
    random_metric_space,
    two_point_space,
    unit_square,
)
from combmag.linalg import SingularMatrixError
from combmag.metric import (
    FiniteMetricSpace,
    MetricExpansion,
    PathSumExpansion,
    length_moments,
    limit_check,
    magnitude_function,
    oracle_magnitude,
)


def test_two_point_closed_form():
    X = two_point_space(1.5)
    for t in (0.1, 1.0, 3.0):
        assert MetricExpansion(X).magnitude(t) == pytest.approx(magnitude_two_points(t, 1.5), rel=1e-12)


def test_equilateral_closed_form():
    X = equilateral_space(0.7)
    for t in (0.2, 1.0, 5.0):
        assert MetricExpansion(X).magnitude(t) == pytest.approx(magnitude_equilateral(t, 0.7), rel=1e-12)


def test_one_point_is_constant():
    X = FiniteMetricSpace.from_distances([[0.0]])
    assert magnitude_function(X, [0.1, 1, 10]).values == [1.0, 1.0, 1.0]


def test_unit_square_determinant_polynomial_is_symmetric_in_labels():
    X = unit_square()
    a = MetricExpansion(X).determinant
    b = MetricExpansion(X.relabeled([2, 0, 3, 1])).determinant
    assert a == b


def test_grid_matches_oracle():
    X = grid_six_points()
    exp = MetricExpansion(X)
    for t in (0.5, 1.0, 2.0):
        assert exp.magnitude(t) == pytest.approx(oracle_magnitude(X, t), rel=1e-9)


def test_paths_formula_on_random_spaces():
    rng = random.Random(17)
    for _ in range(5):
        X = random_metric_space(rng, rng.randint(2, 5))
        for t in (0.5, 2.0):
            assert PathSumExpansion(X).magnitude(t) == pytest.approx(MetricExpansion(X).magnitude(t), rel=1e-9)


def test_length_moments_identities_hold():
    rng = random.Random(1)
    for n in (2, 3, 4):
        report = length_moments(random_metric_space(rng, n))
        assert report.ok, report.checks


def test_two_point_moment_sign():
    # the (n-1)-moment of connections is -2d for two points, equal to 1! * F with F = -2d
    rep = length_moments(two_point_space(1.0))
    assert rep.F == -2
    assert rep.moments_connections[1] == -2


def test_limit():
    X = unit_square()
    assert limit_check(X) == pytest.approx(4, abs=1e-6)


def test_limit_rejects_coincident_points():
    X = FiniteMetricSpace.from_distances([[0, 0], [0, 0]])
    with pytest.raises(InvariantViolation):
        limit_check(X)


def test_coincident_points_singular():
    X = FiniteMetricSpace.from_distances([[0, 0], [0, 0]])
    with pytest.raises(SingularMatrixError):
        MetricExpansion(X).magnitude(1.0)
    curve = magnitude_function(X, [1.0])
    assert curve.samples[0].singular


def test_validation():
    with pytest.raises(InvariantViolation):
        FiniteMetricSpace.from_distances([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    FiniteMetricSpace.from_distances([[0, 1, 5], [1, 0, 1], [5, 1, 0]], triangle_checked=False)
    with pytest.raises(InvariantViolation):
        FiniteMetricSpace.from_distances([[0, 1], [2, 0]])


def test_t_sweep_rules():
    X = two_point_space()
    with pytest.raises(ValueError):
        magnitude_function(X, [1.0, 0.5])
    with pytest.raises(ValueError):
        magnitude_function(X, [-1.0])


def test_label_permutation_is_bitwise_invariant():
    X = grid_six_points()
    a = MetricExpansion(X).magnitude(1.3)
    b = MetricExpansion(X.relabeled([5, 3, 1, 0, 2, 4])).magnitude(1.3)
    assert a == b
    assert math.isfinite(a)
