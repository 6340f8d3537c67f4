import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from combmag.fixtures import random_rational_matrix
from combmag.linalg import (
    SingularMatrixError,
    SquareMatrix,
    bareiss_determinant,
    coates_determinant,
    combinatorial_cofactor,
    combinatorial_inverse,
    count_linear_subdigraphs,
    gauss_inverse,
    laplace_cofactor,
    permutation_determinant,
    quotient_form_inverse_entry,
)

small_int = st.integers(-3, 3)


@st.composite
def int_matrices(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    return SquareMatrix.from_rows([[Fraction(draw(small_int)) for _ in range(n)] for _ in range(n)])


@settings(max_examples=60, deadline=None)
@given(int_matrices())
def test_three_determinant_routes_agree(M):
    d = coates_determinant(M)
    assert d == permutation_determinant(M) == bareiss_determinant(M)


@settings(max_examples=40, deadline=None)
@given(int_matrices(4))
def test_determinant_transpose_and_reorder(M):
    d = coates_determinant(M)
    assert coates_determinant(M.transpose()) == d
    order = list(range(M.n))[::-1]
    assert coates_determinant(M.permuted(order)) == d


@settings(max_examples=30, deadline=None)
@given(int_matrices(4))
def test_cofactor_matches_laplace(M):
    for i in range(M.n):
        for j in range(M.n):
            assert combinatorial_cofactor(M, j, i) == laplace_cofactor(M, j, i)


def test_empty_and_zero():
    assert coates_determinant(SquareMatrix.from_rows([])) == 1
    assert coates_determinant(SquareMatrix.from_rows([[0, 1], [0, 1]])) == 0


def test_identity_cover_count():
    assert count_linear_subdigraphs(SquareMatrix.identity(4)) == 1


def test_inverse_matches_gauss():
    rng = random.Random(5)
    for _ in range(20):
        M = random_rational_matrix(rng, rng.randint(1, 4))
        inv = combinatorial_inverse(M)
        assert inv.rows == gauss_inverse(M).rows
        assert (M @ inv).rows == SquareMatrix.identity(M.index).rows


def test_quotient_form_entry():
    rng = random.Random(9)
    M = random_rational_matrix(rng, 3)
    inv = combinatorial_inverse(M)
    for i in range(3):
        for j in range(3):
            assert quotient_form_inverse_entry(M, i, j) == inv.rows[i][j]


def test_singular_inverse_raises():
    M = SquareMatrix.from_rows([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]])
    with pytest.raises(SingularMatrixError):
        combinatorial_inverse(M)
    with pytest.raises(SingularMatrixError):
        gauss_inverse(M)


def test_float_matrix_determinant():
    M = SquareMatrix.from_rows([[2.0, 1.0], [1.0, 3.0]])
    assert coates_determinant(M) == pytest.approx(5.0)
    assert bareiss_determinant(M) == pytest.approx(5.0)
