"""Moore-Penrose pseudoinverses from Berg's formula and the pseudo-Möbius magnitude.

Berg's formula writes the pseudoinverse of a rank-``r`` matrix as a weighted
sum of embedded inverses of its invertible ``r x r`` submatrices, each weighted
by its squared determinant.  Restricted inverses go through the connection
formula; full-rank factorization is kept as an independent oracle.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .category import FiniteCategory, zeta_matrix
from .digraph import SizeCapError
from .linalg import (
    SquareMatrix,
    as_matrix,
    coates_determinant,
    combinatorial_inverse,
    gauss_inverse,
    is_float_matrix,
    matmul,
)

BERG_MAX_N = 8
FLOAT_RANK_TOL = 1e-9


def _rref(rows):
    """Reduced row echelon form over the rationals; returns ``(rref rows, pivot columns)``."""
    a = [[Fraction(x) for x in r] for r in rows]
    m = len(a)
    ncols = len(a[0]) if a else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, m) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return a, pivots


def exact_rank(xi) -> int:
    """Rank by fraction-free elimination."""
    rows = [[Fraction(x) for x in r] for r in as_matrix(xi).rows]
    m = len(rows)
    if m == 0:
        return 0
    n = len(rows[0])
    rank = 0
    prev = Fraction(1)
    for c in range(n):
        p = next((i for i in range(rank, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[rank], rows[p] = rows[p], rows[rank]
        piv = rows[rank][c]
        for i in range(rank + 1, m):
            rows[i] = [(x * piv - rows[i][c] * y) / prev for x, y in zip(rows[i], rows[rank])]
        prev = piv
        rank += 1
        if rank == m:
            break
    return rank


def numeric_rank(xi, tol: float = FLOAT_RANK_TOL) -> int:
    """Rank of a float matrix: singular values above ``tol`` times the largest entry."""
    import numpy as np

    a = np.array(as_matrix(xi).rows, dtype=float)
    if a.size == 0:
        return 0
    return int(np.linalg.matrix_rank(a, tol=tol * max(1.0, float(np.abs(a).max()))))


@dataclass(frozen=True)
class BergTerm:
    rows: tuple  # J
    cols: tuple  # K
    sub_det: Fraction
    weight: Fraction
    restricted_inverse: SquareMatrix  # embedded at positions K x J of the full index


@dataclass
class PseudoMoebiusResult:
    rank: int
    pseudoinverse: SquareMatrix
    penrose_residuals: tuple
    magnitude: Fraction
    terms: list = field(default_factory=list, repr=False)


def _max_abs(rows):
    return max((abs(x) for r in rows for x in r), default=0)


def penrose_check(xi, candidate) -> tuple:
    """Max-norm residuals of the four Penrose equations (plain transpose: data are real)."""
    a = [list(r) for r in as_matrix(xi).rows]
    c = [list(r) for r in as_matrix(candidate).rows]
    ac = matmul(a, c)
    ca = matmul(c, a)
    aca = matmul(ac, a)
    cac = matmul(ca, c)
    n = len(a)

    def diff(x, y):
        return [[x[i][j] - y[i][j] for j in range(n)] for i in range(n)]

    def transpose(x):
        return [list(r) for r in zip(*x)] if x else []

    return (
        _max_abs(diff(aca, a)),
        _max_abs(diff(cac, c)),
        _max_abs(diff(transpose(ac), ac)),
        _max_abs(diff(transpose(ca), ca)),
    )


def berg_terms(xi, *, max_n: int = BERG_MAX_N) -> tuple[int, list[BergTerm]]:
    xi = as_matrix(xi)
    n = xi.n
    if n > max_n:
        raise SizeCapError(f"Berg enumeration capped at n={max_n}, got {n}")
    floats = is_float_matrix(xi.rows)
    r = numeric_rank(xi) if floats else exact_rank(xi)
    if r == 0:
        return 0, []
    scale = float(_max_abs(xi.rows)) ** r
    raw = []
    for J in itertools.combinations(range(n), r):
        for K in itertools.combinations(range(n), r):
            sub = SquareMatrix.from_rows(xi.submatrix(J, K))
            det = coates_determinant(sub)
            if floats:
                if abs(det) > FLOAT_RANK_TOL * scale:
                    raw.append((J, K, float(det), sub))
            elif det != 0:
                raw.append((J, K, Fraction(det), sub))
    total = sum(d * d for _, _, d, _ in raw)
    terms = []
    for J, K, det, sub in raw:
        inv = combinatorial_inverse(sub)
        # inv has type (K, J): inv[t][s] sits at full position (K[t], J[s])
        full = [[0.0 if isinstance(det, float) else Fraction(0)] * n for _ in range(n)]
        for t_, k in enumerate(K):
            for s_, j in enumerate(J):
                full[k][j] = inv.rows[t_][s_]
        terms.append(BergTerm(
            tuple(xi.index[j] for j in J),
            tuple(xi.index[k] for k in K),
            det,
            det * det / total,
            SquareMatrix(xi.index, tuple(map(tuple, full))),
        ))
    return r, terms


def berg_pseudoinverse(xi, *, max_n: int = BERG_MAX_N) -> PseudoMoebiusResult:
    """Pseudoinverse as the squared-determinant-weighted sum of embedded restricted inverses."""
    xi = as_matrix(xi)
    n = xi.n
    r, terms = berg_terms(xi, max_n=max_n)
    zero = 0.0 if is_float_matrix(xi.rows) else Fraction(0)
    acc = [[zero] * n for _ in range(n)]
    for term in terms:  # lexicographic (J, K) order
        for i in range(n):
            for j in range(n):
                x = term.restricted_inverse.rows[i][j]
                if x:
                    acc[i][j] += term.weight * x
    plus = SquareMatrix(xi.index, tuple(map(tuple, acc)))
    return PseudoMoebiusResult(
        rank=r,
        pseudoinverse=plus,
        penrose_residuals=penrose_check(xi, plus),
        magnitude=sum((x for row in acc for x in row), zero),
        terms=terms,
    )


def factorization_pseudoinverse(xi) -> SquareMatrix:
    """Oracle: with ``xi = F G`` full-rank, ``xi+ = G^T (G G^T)^-1 (F^T F)^-1 F^T``."""
    xi = as_matrix(xi)
    n = xi.n
    floats = any(isinstance(x, float) for r in xi.rows for x in r)
    if floats:
        return _float_factorization_pinv(xi)
    rref, pivots = _rref(xi.rows)
    r = len(pivots)
    if r == 0:
        return SquareMatrix(xi.index, tuple(tuple(Fraction(0) for _ in range(n)) for _ in range(n)))
    G = [rref[i] for i in range(r)]  # r x n
    F = [[Fraction(xi.rows[i][c]) for c in pivots] for i in range(n)]  # n x r
    Gt = [list(c) for c in zip(*G)]
    Ft = [list(c) for c in zip(*F)]
    ggt_inv = gauss_inverse(SquareMatrix.from_rows(matmul(G, Gt))).rows
    ftf_inv = gauss_inverse(SquareMatrix.from_rows(matmul(Ft, F))).rows
    out = matmul(matmul(matmul(Gt, ggt_inv), ftf_inv), Ft)
    return SquareMatrix(xi.index, tuple(map(tuple, out)))


def _float_factorization_pinv(xi: SquareMatrix, tol: float = FLOAT_RANK_TOL) -> SquareMatrix:
    import numpy as np

    a = np.array(xi.rows, dtype=float)
    n = a.shape[0]
    rank = numeric_rank(xi, tol)
    if rank == 0:
        return SquareMatrix(xi.index, tuple(tuple(0.0 for _ in range(n)) for _ in range(n)))
    atol = tol * max(1.0, float(np.abs(a).max()))
    cols = []
    for c in range(n):
        if np.linalg.matrix_rank(a[:, cols + [c]], tol=atol) == len(cols) + 1:
            cols.append(c)
        if len(cols) == rank:
            break
    F = a[:, cols]
    G = np.linalg.lstsq(F, a, rcond=None)[0]
    plus = G.T @ np.linalg.inv(G @ G.T) @ np.linalg.inv(F.T @ F) @ F.T
    return SquareMatrix(xi.index, tuple(tuple(float(x) for x in r) for r in plus))


def magnitude_general(C: FiniteCategory, *, max_n: int = BERG_MAX_N) -> PseudoMoebiusResult:
    """Magnitude of any finite category as the entry sum of the pseudo-Möbius function."""
    return berg_pseudoinverse(zeta_matrix(C), max_n=max_n)
