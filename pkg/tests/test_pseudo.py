import random
from fractions import Fraction

import pytest

from combmag.category import moebius
from combmag.fixtures import example_category, isomorphic_pair_category, random_category, random_low_rank_matrix
from combmag.linalg import SquareMatrix, gauss_inverse
from combmag.pseudo import (
    berg_pseudoinverse,
    exact_rank,
    factorization_pseudoinverse,
    magnitude_general,
    numeric_rank,
    penrose_check,
)


def test_all_ones():
    res = magnitude_general(isomorphic_pair_category())
    assert res.rank == 1
    assert res.magnitude == 1
    assert res.pseudoinverse.rows == ((Fraction(1, 4), Fraction(1, 4)),) * 2
    assert res.penrose_residuals == (0, 0, 0, 0)


def test_invertible_case_equals_inverse():
    res = magnitude_general(example_category())
    assert res.pseudoinverse.rows == moebius(example_category()).moebius.rows


def test_rank_zero_gives_zero():
    Z = SquareMatrix.from_rows([[Fraction(0)] * 3] * 3)
    res = berg_pseudoinverse(Z)
    assert res.rank == 0 and res.magnitude == 0


def test_low_rank_matches_factorization():
    rng = random.Random(12)
    for _ in range(8):
        n = rng.randint(2, 4)
        M = random_low_rank_matrix(rng, n, rng.randint(1, n - 1))
        res = berg_pseudoinverse(M)
        assert res.rank == exact_rank(M)
        assert res.pseudoinverse.rows == factorization_pseudoinverse(M).rows
        assert res.penrose_residuals == (0, 0, 0, 0)


def test_duplication_preserves_magnitude():
    rng = random.Random(21)
    for _ in range(4):
        C = random_category(rng, rng.randint(1, 3))
        D = C.duplicate_object(C.objects[0], "copy")
        assert magnitude_general(D).magnitude == magnitude_general(C).magnitude


def test_float_path():
    M = SquareMatrix.from_rows([[1.0, 2.0], [2.0, 4.0]])
    assert numeric_rank(M) == 1
    res = berg_pseudoinverse(M)
    oracle = factorization_pseudoinverse(M)
    for r1, r2 in zip(res.pseudoinverse.rows, oracle.rows):
        assert r1 == pytest.approx(r2, abs=1e-12)
    assert max(penrose_check(M, res.pseudoinverse)) < 1e-12


def test_penrose_check_flags_wrong_candidate():
    M = SquareMatrix.from_rows([[Fraction(2), Fraction(0)], [Fraction(0), Fraction(1)]])
    assert max(penrose_check(M, gauss_inverse(M))) == 0
    assert max(penrose_check(M, M)) > 0
