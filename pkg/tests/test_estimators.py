import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from combmag.estimators import CategoryMoebius, MagnitudeFunction
from combmag.linalg import SingularMatrixError


def test_magnitude_function_two_points():
    est = MagnitudeFunction().fit(np.array([[0.0, 0.0], [2.0, 0.0]]))
    t = np.array([0.5, 1.0, 2.0])
    np.testing.assert_allclose(est.predict(t), 2 / (1 + np.exp(-2 * t)), rtol=1e-12)
    assert np.all(est.residuals(t) < 1e-12)


def test_precomputed_and_paths_agree():
    D = np.array([[0, 1, 2], [1, 0, 1.5], [2, 1.5, 0]])
    a = MagnitudeFunction(metric="precomputed").fit(D).predict([1.0])
    b = MagnitudeFunction(metric="precomputed", paths=True).fit(D).predict([1.0])
    assert a[0] == pytest.approx(b[0], rel=1e-12)


def test_unfitted_and_bad_input():
    with pytest.raises(NotFittedError):
        MagnitudeFunction().predict([1.0])
    with pytest.raises(ValueError):
        MagnitudeFunction(metric="precomputed").fit(np.ones((2, 3)))
    with pytest.raises(ValueError):
        MagnitudeFunction().fit([[0.0], [1.0]]).predict([0.0])


def test_clone_keeps_params():
    est = clone(MagnitudeFunction(metric="l1", merge_tol=1e-8))
    assert est.get_params()["metric"] == "l1"


def test_category_moebius():
    est = CategoryMoebius().fit([[1, 2, 2], [0, 1, 3], [0, 0, 1]])
    assert est.magnitude_ == 1 - 2 + 4 + 1 - 3 + 1
    assert est.oracle_residual_ == 0
    assert est.moebius_array()[0, 2] == 4.0


def test_category_moebius_general():
    with pytest.raises(SingularMatrixError):
        CategoryMoebius().fit(np.ones((2, 2), dtype=int))
    est = CategoryMoebius(general=True).fit(np.ones((2, 2), dtype=int))
    assert est.magnitude_ == 1 and est.rank_ == 1
    assert math.isclose(est.moebius_array().sum(), 1.0)
