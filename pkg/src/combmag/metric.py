"""Magnitude of finite (generalized) metric spaces.

Zeta entries are length monomials ``q**d(x, y)`` with ``q = exp(-t)``.  The
signed connection and linear-subdigraph sums are aggregated once as length
polynomials (:class:`MetricExpansion`) and then evaluated at any ``t``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Hashable, Sequence

from .category import InvariantViolation
from .digraph import SizeCapError, enumerate_connections, enumerate_linear_subdigraphs, induced_subdigraph
from .linalg import (
    FLOAT_SINGULAR_RTOL,
    SingularMatrixError,
    SquareMatrix,
    bareiss_determinant,
    gauss_inverse,
)
from .scalars import DEFAULT_MERGE_TOL, LengthPolynomial

TRIANGLE_SLACK = 1e-12
LIMIT_SCALE = 50.0
LENGTH_MOMENTS_MAX_N = 7
METRIC_MAX_N = 8
VANISH_RTOL = 1e-9
MOMENT_RTOL = 1e-6


@dataclass(frozen=True)
class FiniteMetricSpace:
    points: tuple
    distances: tuple  # rows of floats
    symmetric: bool = True
    triangle_checked: bool = True

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        rows = tuple(tuple(float(x) for x in r) for r in self.distances)
        object.__setattr__(self, "distances", rows)
        n = len(pts)
        if len(set(pts)) != n:
            raise InvariantViolation("duplicate point label")
        if len(rows) != n or any(len(r) != n for r in rows):
            raise InvariantViolation(f"distance matrix must be {n}x{n}")
        for i in range(n):
            if rows[i][i] != 0.0:
                raise InvariantViolation(f"d({pts[i]!r}, {pts[i]!r}) = {rows[i][i]} is not 0")
            for j in range(n):
                d = rows[i][j]
                if not math.isfinite(d) or d < 0:
                    raise InvariantViolation(f"d({pts[i]!r}, {pts[j]!r}) = {d} is not a finite nonnegative real")
        if self.symmetric:
            for i in range(n):
                for j in range(i):
                    if rows[i][j] != rows[j][i]:
                        raise InvariantViolation(f"asymmetric distance between {pts[i]!r} and {pts[j]!r}")
        if self.triangle_checked:
            for i, j, k in itertools.product(range(n), repeat=3):
                if rows[i][k] > rows[i][j] + rows[j][k] + TRIANGLE_SLACK:
                    raise InvariantViolation(
                        f"triangle inequality fails: d({pts[i]},{pts[k]}) > d({pts[i]},{pts[j]}) + d({pts[j]},{pts[k]})"
                    )

    @classmethod
    def from_coordinates(cls, coords, labels: Sequence[Hashable] | None = None, norm: str = "l2"):
        coords = [tuple(float(c) for c in p) for p in coords]
        labels = tuple(range(len(coords))) if labels is None else tuple(labels)
        if norm in ("l2", "euclidean"):
            dist = lambda p, q: math.sqrt(math.fsum((a - b) ** 2 for a, b in zip(p, q)))
        elif norm in ("l1", "manhattan", "cityblock"):
            dist = lambda p, q: math.fsum(abs(a - b) for a, b in zip(p, q))
        else:
            raise ValueError(f"unsupported norm {norm!r}; use 'l2' or 'l1'")
        rows = [[dist(p, q) for q in coords] for p in coords]
        return cls(labels, rows)

    @classmethod
    def from_distances(cls, rows, labels=None, symmetric=True, triangle_checked=True):
        labels = tuple(range(len(rows))) if labels is None else tuple(labels)
        return cls(labels, rows, symmetric, triangle_checked)

    @property
    def n(self) -> int:
        return len(self.points)

    def d(self, x, y) -> float:
        return self.distances[self.points.index(x)][self.points.index(y)]

    def min_distance(self) -> float:
        """Smallest distance between distinct points (``inf`` for a single point)."""
        return min(
            (self.distances[i][j] for i in range(self.n) for j in range(self.n) if i != j),
            default=math.inf,
        )

    def relabeled(self, order: Sequence[int]) -> FiniteMetricSpace:
        return FiniteMetricSpace(
            tuple(self.points[k] for k in order),
            tuple(tuple(self.distances[i][j] for j in order) for i in order),
            self.symmetric,
            self.triangle_checked,
        )

    def subspace(self, labels) -> FiniteMetricSpace:
        keep = [i for i, p in enumerate(self.points) if p in set(labels)]
        return self.relabeled(keep)


def zeta_t(X: FiniteMetricSpace, merge_tol: float = DEFAULT_MERGE_TOL) -> SquareMatrix:
    """Zeta matrix with monomial entries ``q**d(x, y)``."""
    return SquareMatrix(
        X.points,
        tuple(
            tuple(LengthPolynomial.monomial(d, 1, merge_tol) for d in row)
            for row in X.distances
        ),
    )


def evaluated_zeta(X: FiniteMetricSpace, t: float) -> list[list[float]]:
    return [[math.exp(-t * d) for d in row] for row in X.distances]


def _check_t(t):
    if not (t > 0 and math.isfinite(t)):
        raise ValueError(f"t must be a positive finite real, got {t!r}")


def _monomial_pair(weight) -> tuple[float, int]:
    if isinstance(weight, LengthPolynomial):
        (exponent, coef), = weight.terms
        return exponent, coef
    return 0.0, weight  # empty product


class MetricExpansion:
    """Signed connection / linear-subdigraph sums of ``X`` as length polynomials."""

    def __init__(self, X: FiniteMetricSpace, merge_tol: float = DEFAULT_MERGE_TOL, max_n: int = METRIC_MAX_N):
        if X.n > max_n:
            raise SizeCapError(f"{X.n} points exceeds the metric cap of {max_n}")
        self.X = X
        self.merge_tol = merge_tol
        self.zeta = zeta_t(X, merge_tol)
        self.digraph = self.zeta.digraph()

    @cached_property
    def determinant(self) -> LengthPolynomial:
        return LengthPolynomial.from_pairs(
            ((_monomial_pair(L.weight)[0], L.signature)
             for L in enumerate_linear_subdigraphs(self.digraph, max_vertices=None)),
            self.merge_tol,
        )

    def connection_terms(self, x, y) -> list[tuple]:
        """``(connection, exponent, signature)`` for every connection of ``x`` to ``y``."""
        return [
            (C, _monomial_pair(C.weight)[0], C.signature)
            for C in enumerate_connections(self.digraph, x, y, max_vertices=None)
        ]

    @cached_property
    def numerators(self) -> dict:
        """``(x, y) -> sum over connections of x to y of sign(C) q**l(C)``."""
        out = {}
        for x in self.X.points:
            for y in self.X.points:
                out[(x, y)] = LengthPolynomial.from_pairs(
                    ((e, s) for _, e, s in self.connection_terms(x, y)), self.merge_tol
                )
        return out

    @cached_property
    def total_numerator(self) -> LengthPolynomial:
        # single accumulation over all connections keeps the result label-independent
        pairs = []
        for x in self.X.points:
            for y in self.X.points:
                pairs.extend((e, s) for _, e, s in self.connection_terms(x, y))
        return LengthPolynomial.from_pairs(pairs, self.merge_tol)

    def det_value(self, t: float) -> float:
        _check_t(t)
        value = self.determinant.evaluate(t)
        # the all-loops cover has weight 1, so 1 is the cover-weight scale
        if abs(value) <= FLOAT_SINGULAR_RTOL:
            raise SingularMatrixError(f"zeta is numerically singular at t={t}")
        return value

    def moebius(self, t: float) -> SquareMatrix:
        det = self.det_value(t)
        pts = self.X.points
        return SquareMatrix(
            pts, tuple(tuple(self.numerators[(x, y)].evaluate(t) / det for y in pts) for x in pts)
        )

    def magnitude(self, t: float) -> float:
        return self.total_numerator.evaluate(t) / self.det_value(t)


def moebius_t(X: FiniteMetricSpace, t: float, merge_tol: float = DEFAULT_MERGE_TOL) -> SquareMatrix:
    """Möbius matrix at ``t`` from evaluated connection sums over the evaluated determinant."""
    return MetricExpansion(X, merge_tol).moebius(t)


def oracle_moebius_t(X: FiniteMetricSpace, t: float) -> SquareMatrix:
    _check_t(t)
    return gauss_inverse(SquareMatrix(X.points, tuple(map(tuple, evaluated_zeta(X, t)))))


def oracle_magnitude(X: FiniteMetricSpace, t: float) -> float:
    return math.fsum(x for row in oracle_moebius_t(X, t).rows for x in row)


@dataclass
class MagnitudeSample:
    t: float
    magnitude: float | None
    oracle: float | None
    residual: float | None
    singular: bool = False


@dataclass
class MagnitudeCurve:
    samples: list = field(default_factory=list)

    @property
    def t_values(self) -> list[float]:
        return [s.t for s in self.samples]

    @property
    def values(self) -> list:
        return [s.magnitude for s in self.samples]

    def max_residual(self) -> float:
        return max((s.residual for s in self.samples if s.residual is not None), default=0.0)


def magnitude_function(X: FiniteMetricSpace, t_values, merge_tol: float = DEFAULT_MERGE_TOL,
                       expansion: MetricExpansion | None = None) -> MagnitudeCurve:
    """Sample ``t -> |tX|``; singular samples are flagged and the sweep continues."""
    t_values = [float(t) for t in t_values]
    for t in t_values:
        _check_t(t)
    if any(b <= a for a, b in zip(t_values, t_values[1:])):
        raise ValueError("t values must be strictly increasing")
    exp = expansion or MetricExpansion(X, merge_tol)
    curve = MagnitudeCurve()
    for t in t_values:
        try:
            value = exp.magnitude(t)
        except SingularMatrixError:
            curve.samples.append(MagnitudeSample(t, None, None, None, singular=True))
            continue
        try:
            oracle = oracle_magnitude(X, t)
            residual = abs(value - oracle)
        except SingularMatrixError:
            oracle, residual = None, None
        curve.samples.append(MagnitudeSample(t, value, oracle, residual))
    return curve


class PathSumExpansion:
    """Subset determinants and Hamiltonian path sums for the path-sum magnitude formula."""

    def __init__(self, X: FiniteMetricSpace, merge_tol: float = DEFAULT_MERGE_TOL, max_n: int = METRIC_MAX_N):
        if X.n > max_n:
            raise SizeCapError(f"{X.n} points exceeds the metric cap of {max_n}")
        self.X = X
        self.merge_tol = merge_tol
        D = zeta_t(X, merge_tol).digraph()
        n = X.n
        self.terms = []  # (sign, det polynomial of complement, path polynomial of subset)
        for k in range(n):
            for subset in itertools.combinations(range(n), k + 1):
                rest = [X.points[i] for i in range(n) if i not in subset]
                sub_d = induced_subdigraph(D, rest)
                det = LengthPolynomial.from_pairs(
                    ((_monomial_pair(L.weight)[0], L.signature)
                     for L in enumerate_linear_subdigraphs(sub_d, max_vertices=None)),
                    merge_tol,
                )
                paths = LengthPolynomial.from_pairs(
                    ((math.fsum(X.distances[a][b] for a, b in zip(order, order[1:])), 1)
                     for order in itertools.permutations(subset)),
                    merge_tol,
                )
                self.terms.append(((-1) ** k, det, paths))
        self.full_det = LengthPolynomial.from_pairs(
            ((_monomial_pair(L.weight)[0], L.signature)
             for L in enumerate_linear_subdigraphs(D, max_vertices=None)),
            merge_tol,
        )

    def numerator_value(self, t: float) -> float:
        return math.fsum(s * det.evaluate(t) * paths.evaluate(t) for s, det, paths in self.terms)

    def magnitude(self, t: float) -> float:
        _check_t(t)
        den = self.full_det.evaluate(t)
        if abs(den) <= FLOAT_SINGULAR_RTOL:
            raise SingularMatrixError(f"zeta is numerically singular at t={t}")
        return self.numerator_value(t) / den


def magnitude_by_paths(X: FiniteMetricSpace, t: float, merge_tol: float = DEFAULT_MERGE_TOL) -> float:
    """|tX| as a sum over self-avoiding paths weighted by complementary subset determinants."""
    return PathSumExpansion(X, merge_tol).magnitude(t)


def limit_check(X: FiniteMetricSpace, t_large: float | None = None) -> float:
    """|tX| at a large ``t`` (default ``50 / min distance``); tends to the number of points."""
    if X.n > 1 and X.min_distance() == 0:
        raise InvariantViolation("distinct points at distance 0: the large-t limit claim does not apply")
    if t_large is None:
        t_large = LIMIT_SCALE / X.min_distance() if X.n > 1 else 1.0
    _check_t(t_large)
    return MetricExpansion(X).magnitude(t_large)


def one_point_value(X: FiniteMetricSpace, t_small: float = 1e-3) -> float | None:
    """|tX| at a small ``t``; informational only (the small-t limit need not be 1)."""
    try:
        return MetricExpansion(X).magnitude(t_small)
    except SingularMatrixError:
        return None


# --- length moments ------------------------------------------------------------

@dataclass
class LengthExpansionReport:
    n: int
    moments_connections: list  # k -> sum over all connections of sign * length**k (exact)
    moments_subdigraphs: list
    F: Fraction
    C: Fraction
    C_prime: Fraction
    checks: dict = field(default_factory=dict)  # name -> (lhs, rhs, ok)

    @property
    def ok(self) -> bool:
        return all(ok for _, _, ok in self.checks.values())


def _column_det(D, kinds) -> Fraction:
    """det of the matrix whose i-th column is ``(d(x_i, x_r) ** kinds[i])_r``."""
    n = len(D)
    rows = [[D[i][r] ** kinds[i] for i in range(n)] for r in range(n)]
    return Fraction(bareiss_determinant(rows))


def length_invariants(X: FiniteMetricSpace) -> tuple[Fraction, Fraction, Fraction]:
    """``(F, C, C')``: coefficients of ``(-t)**(n-1)`` and ``(-t)**n`` in the cofactor sum and determinant."""
    D = [[Fraction(x) for x in row] for row in X.distances]
    n = X.n
    F = sum((_column_det(D, [0 if i == j else 1 for i in range(n)]) for j in range(n)), Fraction(0))
    C = Fraction(0)
    for i in range(n):
        for j in range(n):
            if i != j:
                kinds = [1] * n
                kinds[i], kinds[j] = 0, 2
                C += _column_det(D, kinds)
    C /= 2
    C_prime = C + _column_det(D, [1] * n)
    return F, C, C_prime


def _close(lhs, rhs, rtol=MOMENT_RTOL, atol=VANISH_RTOL) -> bool:
    lhs, rhs = float(lhs), float(rhs)
    if rhs == 0:
        return abs(lhs) <= atol
    return abs(lhs - rhs) <= rtol * abs(rhs)


def length_moments(X: FiniteMetricSpace, max_n: int = LENGTH_MOMENTS_MAX_N) -> LengthExpansionReport:
    """Signed length moments of all connections and linear subdigraphs, with their identities.

    Lengths are summed exactly (each float distance is converted to a Fraction),
    so the identities are checked on exact values.
    """
    n = X.n
    if n > max_n:
        raise SizeCapError(f"length moments capped at n={max_n}, got {n}")
    D = [[Fraction(x) for x in row] for row in X.distances]
    pos = {p: i for i, p in enumerate(X.points)}
    G = zeta_t(X).digraph()

    def length(edges):
        return sum((D[pos[a]][pos[b]] for a, b in edges), Fraction(0))

    mom_c = [Fraction(0)] * (n + 1)
    mom_l = [Fraction(0)] * (n + 1)
    scale_c = [Fraction(0)] * (n + 1)
    scale_l = [Fraction(0)] * (n + 1)
    for L in enumerate_linear_subdigraphs(G, max_vertices=None):
        ell = length(L.edges)
        for k in range(n + 1):
            mom_l[k] += L.signature * ell ** k
            scale_l[k] += ell ** k
    for x in X.points:
        for y in X.points:
            for C in enumerate_connections(G, x, y, max_vertices=None):
                ell = length(C.edges)
                for k in range(n + 1):
                    mom_c[k] += C.signature * ell ** k
                    scale_c[k] += ell ** k
    F, Cn, Cp = length_invariants(X)
    report = LengthExpansionReport(n, mom_c, mom_l, F, Cn, Cp)
    for k in range(max(n - 1, 0)):
        report.checks[f"connections_moment_{k}_vanishes"] = (
            mom_c[k], 0, abs(mom_c[k]) <= VANISH_RTOL * scale_c[k])
        report.checks[f"subdigraphs_moment_{k}_vanishes"] = (
            mom_l[k], 0, abs(mom_l[k]) <= VANISH_RTOL * scale_l[k])
    if n >= 1:
        target = math.factorial(n - 1) * F
        report.checks["connections_moment_n-1"] = (mom_c[n - 1], target, _close(mom_c[n - 1], target))
        report.checks["subdigraphs_moment_n-1"] = (mom_l[n - 1], target, _close(mom_l[n - 1], target))
        report.checks["connections_moment_n"] = (mom_c[n], math.factorial(n) * Cn, _close(mom_c[n], math.factorial(n) * Cn))
        report.checks["subdigraphs_moment_n"] = (mom_l[n], math.factorial(n) * Cp, _close(mom_l[n], math.factorial(n) * Cp))
    return report
