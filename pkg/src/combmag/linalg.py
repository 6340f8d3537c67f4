"""Determinants, cofactors and inverses over an exact scalar.

The combinatorial routes (``coates_determinant``, ``combinatorial_cofactor``,
``combinatorial_inverse``, ``quotient_form_inverse_entry``) sum over linear
subdigraphs and connections of the Coates digraph.  ``permutation_determinant``,
``bareiss_determinant`` and ``gauss_inverse`` are independent oracles.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Sequence

from .digraph import (
    DEFAULT_MAX_VERTICES,
    SizeCapError,
    WeightedDigraph,
    coates_digraph,
    enumerate_connections,
    enumerate_linear_subdigraphs,
)
from .scalars import LengthPolynomial, evaluate, is_zero

PERMUTATION_MAX_N = 9
FLOAT_SINGULAR_RTOL = 1e-12


class SingularMatrixError(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class SquareMatrix:
    """Dense square matrix whose rows and columns are labelled by ``index``."""

    index: tuple
    rows: tuple

    def __post_init__(self):
        n = len(self.index)
        if len(set(self.index)) != n:
            raise ValueError("index labels must be distinct")
        if len(self.rows) != n or any(len(r) != n for r in self.rows):
            raise ValueError(f"expected a {n}x{n} array of entries")

    @classmethod
    def from_rows(cls, rows, index: Sequence[Hashable] | None = None):
        rows = tuple(tuple(r) for r in rows)
        if index is None:
            index = range(len(rows))
        return cls(tuple(index), rows)

    @classmethod
    def identity(cls, index, one=1, zero=0):
        index = tuple(index if not isinstance(index, int) else range(index))
        n = len(index)
        return cls(index, tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.index)

    def pos(self, label) -> int:
        return self.index.index(label)

    def entry(self, a, b):
        return self.rows[self.pos(a)][self.pos(b)]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> SquareMatrix:
        return SquareMatrix(self.index, tuple(zip(*self.rows)) if self.rows else ())

    def map(self, f) -> SquareMatrix:
        return SquareMatrix(self.index, tuple(tuple(f(x) for x in row) for row in self.rows))

    def permuted(self, order: Sequence[int]) -> SquareMatrix:
        """Relabel rows and columns simultaneously: new position ``p`` holds old ``order[p]``."""
        return SquareMatrix(
            tuple(self.index[k] for k in order),
            tuple(tuple(self.rows[i][j] for j in order) for i in order),
        )

    def submatrix(self, keep_rows: Sequence[int], keep_cols: Sequence[int]) -> list[list]:
        return [[self.rows[i][j] for j in keep_cols] for i in keep_rows]

    def __matmul__(self, other: SquareMatrix) -> SquareMatrix:
        return SquareMatrix(self.index, tuple(map(tuple, matmul(self.rows, other.rows))))

    def evaluate(self, t: float | None = None) -> SquareMatrix:
        return self.map(lambda x: evaluate(x, t))

    def total(self):
        acc = 0
        for row in self.rows:
            for x in row:
                acc = acc + x
        return acc

    def to_lists(self) -> list[list]:
        return [list(r) for r in self.rows]

    def digraph(self) -> WeightedDigraph:
        return coates_digraph(self.index, self.rows)


def as_matrix(xi) -> SquareMatrix:
    return xi if isinstance(xi, SquareMatrix) else SquareMatrix.from_rows(xi)


def matmul(a, b) -> list[list]:
    n, m, p = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = 0
            for k in range(m):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def is_float_matrix(rows) -> bool:
    return any(isinstance(x, float) for r in rows for x in r)


def _is_poly_matrix(rows) -> bool:
    return any(isinstance(x, LengthPolynomial) for r in rows for x in r)


def _zero_like(rows):
    for r in rows:
        for x in r:
            if isinstance(x, LengthPolynomial):
                return LengthPolynomial.zero(x.merge_tol)
    return 0


# --- combinatorial routes --------------------------------------------------

def _cover_sum(D: WeightedDigraph, max_vertices):
    """Return ``(sum of sign(L) * w(L), max |w(L)| for float weights, count)``."""
    total = None
    scale = 0.0
    count = 0
    for L in enumerate_linear_subdigraphs(D, max_vertices=max_vertices):
        term = L.weight if L.signature > 0 else -L.weight
        total = term if total is None else total + term
        count += 1
        if isinstance(L.weight, float):
            scale = max(scale, abs(L.weight))
    if total is None:
        total = 0
    return total, scale, count


def coates_determinant(xi, *, max_vertices: int | None = DEFAULT_MAX_VERTICES):
    """Sum of ``(-1)**(n + c(L)) * w(L)`` over linear subdigraphs of the Coates digraph.

    >>> coates_determinant([[2, 1], [1, 2]])
    3
    """
    xi = as_matrix(xi)
    if xi.n == 0:
        return 1
    total, _, count = _cover_sum(xi.digraph(), max_vertices)
    if count == 0:
        return _zero_like(xi.rows)
    return total


def count_linear_subdigraphs(xi, *, max_vertices: int | None = DEFAULT_MAX_VERTICES) -> int:
    xi = as_matrix(xi)
    return sum(1 for _ in enumerate_linear_subdigraphs(xi.digraph(), max_vertices=max_vertices))


def _connection_sum(D: WeightedDigraph, i, j, max_vertices, zero):
    total = zero
    count = 0
    for C in enumerate_connections(D, i, j, max_vertices=max_vertices):
        total = total + (C.weight if C.signature > 0 else -C.weight)
        count += 1
    return total, count


def combinatorial_cofactor(xi, j, i, *, max_vertices: int | None = DEFAULT_MAX_VERTICES):
    """Cofactor ``kappa[j, i]`` as the signed sum over connections of ``i`` to ``j``.

    ``i`` and ``j`` are positions (not labels).
    """
    xi = as_matrix(xi)
    D = xi.digraph()
    total, _ = _connection_sum(D, xi.index[i], xi.index[j], max_vertices, _zero_like(xi.rows))
    return total


def _check_nonsingular(det, scale):
    if isinstance(det, float):
        if abs(det) <= FLOAT_SINGULAR_RTOL * max(scale, 1e-300):
            raise SingularMatrixError("matrix is numerically singular")
    elif is_zero(det):
        raise SingularMatrixError("matrix is singular")


def _divide(num, den):
    if isinstance(num, float) or isinstance(den, float):
        return num / den
    return Fraction(num) / Fraction(den)


def combinatorial_inverse(xi, *, t: float | None = None, max_vertices: int | None = DEFAULT_MAX_VERTICES):
    """Inverse via connections: entry ``(i, j)`` is ``kappa[j, i] / det``.

    Length-polynomial matrices need ``t``: numerators and the determinant are
    aggregated as polynomials, evaluated at ``t`` and divided as floats.
    """
    xi = as_matrix(xi)
    n = xi.n
    D = xi.digraph()
    det, scale, _ = _cover_sum(D, max_vertices)
    poly = _is_poly_matrix(xi.rows)
    if poly:
        if t is None:
            raise ValueError("length-polynomial matrices are inverted at a given t")
        terms = [evaluate(L.weight, t) * L.signature for L in enumerate_linear_subdigraphs(D, max_vertices=max_vertices)]
        det_value = math.fsum(terms)
        _check_nonsingular(det_value, max(abs(x) for x in terms) if terms else 0.0)
    else:
        if n:
            _check_nonsingular(det, scale)
        det_value = det if n else 1
    zero = _zero_like(xi.rows)
    out = []
    for a in range(n):
        row = []
        for b in range(n):
            num, _ = _connection_sum(D, xi.index[a], xi.index[b], max_vertices, zero)
            if poly:
                row.append(evaluate(num, t) / det_value)
            else:
                row.append(_divide(num, det_value))
        out.append(tuple(row))
    return SquareMatrix(xi.index, tuple(out))


def quotient_form_inverse_entry(xi, i, j, *, t: float | None = None,
                                max_vertices: int | None = DEFAULT_MAX_VERTICES):
    """Inverse entry as ``sum (-1)**(c(C)+1) w(C) / sum (-1)**c(L) w(L)``; positions ``i, j``."""
    xi = as_matrix(xi)
    D = xi.digraph()
    zero = _zero_like(xi.rows)
    num = zero
    for C in enumerate_connections(D, xi.index[i], xi.index[j], max_vertices=max_vertices):
        num = num + (C.weight if (C.cycle_count + 1) % 2 == 0 else -C.weight)
    den = zero
    for L in enumerate_linear_subdigraphs(D, max_vertices=max_vertices):
        den = den + (L.weight if L.cycle_count % 2 == 0 else -L.weight)
    if _is_poly_matrix(xi.rows):
        if t is None:
            raise ValueError("length-polynomial matrices are inverted at a given t")
        num, den = evaluate(num, t), evaluate(den, t)
    if is_zero(den):
        raise SingularMatrixError("matrix is singular")
    return _divide(num, den)


# --- oracles ----------------------------------------------------------------

def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for s in range(len(perm)):
        if seen[s]:
            continue
        j, length = s, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def permutation_determinant(xi, *, max_n: int = PERMUTATION_MAX_N):
    """Leibniz expansion over all permutations (oracle)."""
    xi = as_matrix(xi)
    n = xi.n
    if n > max_n:
        raise SizeCapError(f"permutation expansion capped at n={max_n}, got {n}")
    rows = xi.rows
    total = 0
    for perm in itertools.permutations(range(n)):
        term = _perm_sign(perm)
        for i in range(n):
            term = term * rows[i][perm[i]]
            if is_zero(term):
                break
        total = total + term
    return total


def bareiss_determinant(xi):
    """Fraction-free elimination for rationals, partial pivoting for floats."""
    xi = as_matrix(xi)
    if _is_poly_matrix(xi.rows):
        raise TypeError("bareiss_determinant does not accept length polynomials")
    if is_float_matrix(xi.rows):
        return _float_det([list(map(float, r)) for r in xi.rows])
    a = [[Fraction(x) for x in r] for r in xi.rows]
    n = len(a)
    if n == 0:
        return Fraction(1)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _float_det(a) -> float:
    n = len(a)
    det = 1.0
    for k in range(n):
        p = max(range(k, n), key=lambda r: abs(a[r][k]))
        if a[p][k] == 0.0:
            return 0.0
        if p != k:
            a[k], a[p] = a[p], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return det


def gauss_inverse(xi) -> SquareMatrix:
    """Gauss-Jordan inverse (oracle); exact for rationals, partial pivoting for floats."""
    xi = as_matrix(xi)
    if _is_poly_matrix(xi.rows):
        raise TypeError("gauss_inverse does not accept length polynomials")
    floats = is_float_matrix(xi.rows)
    conv = float if floats else Fraction
    n = xi.n
    a = [[conv(x) for x in r] + [conv(1 if i == j else 0) for j in range(n)] for i, r in enumerate(xi.rows)]
    scale = max((abs(x) for r in xi.rows for x in r), default=1)
    for k in range(n):
        if floats:
            p = max(range(k, n), key=lambda r: abs(a[r][k]))
            if abs(a[p][k]) <= FLOAT_SINGULAR_RTOL * scale:
                raise SingularMatrixError("matrix is numerically singular")
        else:
            p = next((r for r in range(k, n) if a[r][k] != 0), None)
            if p is None:
                raise SingularMatrixError("matrix is singular")
        a[k], a[p] = a[p], a[k]
        piv = a[k][k]
        a[k] = [x / piv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return SquareMatrix(xi.index, tuple(tuple(r[n:]) for r in a))


def minor(xi, drop_row: int, drop_col: int) -> list[list]:
    xi = as_matrix(xi)
    keep_r = [k for k in range(xi.n) if k != drop_row]
    keep_c = [k for k in range(xi.n) if k != drop_col]
    return xi.submatrix(keep_r, keep_c)


def laplace_cofactor(xi, i: int, j: int):
    """``(-1)**(i+j) * det xi[i', j']`` through the Bareiss oracle."""
    return (-1) ** ((i + j) % 2) * bareiss_determinant(SquareMatrix.from_rows(minor(xi, i, j)))


def max_abs_difference(a, b) -> float:
    a, b = as_matrix(a), as_matrix(b)
    return max((abs(float(x - y)) for ra, rb in zip(a.rows, b.rows) for x, y in zip(ra, rb)), default=0.0)
