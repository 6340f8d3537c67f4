"""scikit-learn style wrappers.

Only two computations have a natural fit/predict shape: the magnitude
function of a point cloud (fit on the points, predict at scales ``t``) and the
Möbius inversion of a zeta matrix (fit once, read fitted attributes).
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .linalg import SingularMatrixError, SquareMatrix, coates_determinant, combinatorial_inverse, gauss_inverse
from .metric import FiniteMetricSpace, MetricExpansion, PathSumExpansion, oracle_magnitude
from .pseudo import berg_pseudoinverse
from .scalars import DEFAULT_MERGE_TOL, to_fraction


class MagnitudeFunction(BaseEstimator):
    """Fit on an ``(n_points, n_features)`` array, or an ``(n, n)`` distance matrix
    with ``metric="precomputed"``; ``predict(t)`` returns ``|tX|`` per scale."""

    def __init__(self, metric="euclidean", merge_tol=DEFAULT_MERGE_TOL, paths=False):
        self.metric = metric
        self.merge_tol = merge_tol
        self.paths = paths

    def fit(self, X, y=None):
        X = check_array(X, dtype=np.float64, ensure_min_samples=1)
        if self.metric == "precomputed":
            if X.shape[0] != X.shape[1]:
                raise ValueError(f"precomputed distances must be square, got {X.shape}")
            space = FiniteMetricSpace.from_distances(X.tolist())
        elif self.metric in ("euclidean", "l2", "l1", "manhattan"):
            space = FiniteMetricSpace.from_coordinates(X.tolist(), norm=self.metric)
        else:
            raise ValueError(f"unknown metric {self.metric!r}")
        self.space_ = space
        self.expansion_ = MetricExpansion(space, self.merge_tol)
        self.determinant_ = self.expansion_.determinant
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, t_values):
        """Magnitudes at each ``t``; NaN where zeta is numerically singular."""
        check_is_fitted(self, "expansion_")
        ts = check_array(np.atleast_1d(np.asarray(t_values, dtype=float)), ensure_2d=False).ravel()
        if np.any(ts <= 0):
            raise ValueError("t values must be positive")
        source = PathSumExpansion(self.space_, self.merge_tol) if self.paths else self.expansion_
        out = np.empty(len(ts))
        for k, t in enumerate(ts):
            try:
                out[k] = source.magnitude(float(t))
            except SingularMatrixError:
                out[k] = np.nan
        return out

    def residuals(self, t_values):
        """Absolute gap to the Gauss-Jordan inverse at each ``t``."""
        values = self.predict(t_values)
        return np.array([abs(v - oracle_magnitude(self.space_, float(t)))
                         for v, t in zip(values, np.atleast_1d(t_values))])


class CategoryMoebius(BaseEstimator):
    """Fit on a square zeta matrix (hom counts or any rational matrix).

    Fitted attributes: ``determinant_``, ``moebius_`` (exact inverse, or the
    pseudoinverse when ``general=True`` and zeta is singular), ``magnitude_``
    and ``oracle_residual_``.
    """

    def __init__(self, general=False):
        self.general = general

    def fit(self, zeta, y=None):
        arr = check_array(zeta, dtype=None, ensure_min_samples=1)
        if arr.shape[0] != arr.shape[1]:
            raise ValueError(f"zeta must be square, got {arr.shape}")
        M = SquareMatrix.from_rows([[to_fraction(x) for x in row] for row in arr.tolist()])
        self.determinant_ = coates_determinant(M)
        if self.determinant_ != 0:
            mu = combinatorial_inverse(M)
            oracle = gauss_inverse(M)
            self.rank_ = M.n
        elif self.general:
            res = berg_pseudoinverse(M)
            mu, oracle = res.pseudoinverse, None
            self.rank_ = res.rank
        else:
            raise SingularMatrixError("zeta is singular; set general=True for the pseudo-Möbius function")
        self.moebius_ = mu
        self.magnitude_ = mu.total()
        self.oracle_residual_ = (
            None if oracle is None
            else max(abs(a - b) for ra, rb in zip(mu.rows, oracle.rows) for a, b in zip(ra, rb))
        )
        self.n_features_in_ = arr.shape[1]
        return self

    def moebius_array(self):
        check_is_fitted(self, "moebius_")
        return np.array([[float(x) for x in r] for r in self.moebius_.rows])
