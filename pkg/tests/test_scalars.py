import math
from fractions import Fraction

import pytest

from combmag.scalars import LengthPolynomial, format_rational, product, to_fraction, to_jsonable


def test_to_fraction_parses_strings_and_floats():
    assert to_fraction("2/3") == Fraction(2, 3)
    assert to_fraction(0.5) == Fraction(1, 2)
    assert to_fraction(7) == 7


def test_format_rational():
    assert format_rational(Fraction(-3, 4)) == "-3/4"
    assert format_rational(Fraction(4)) == "4"


def test_merge_within_tolerance():
    p = LengthPolynomial.from_pairs([(1.0, 1), (1.0 + 1e-12, 2), (2.0, -1)])
    assert p.coefficient(1.0) == 3
    assert len(p.terms) == 2


def test_cancelling_terms_vanish():
    p = LengthPolynomial.monomial(1.5) - LengthPolynomial.monomial(1.5)
    assert p == LengthPolynomial.zero()
    assert not p


def test_multiplication_adds_exponents():
    p = LengthPolynomial.monomial(1.0, 2) * LengthPolynomial.monomial(0.5, 3)
    assert p.coefficient(1.5) == 6


def test_evaluate():
    p = LengthPolynomial.from_pairs([(0.0, 1), (2.0, -1)])
    assert p.evaluate(1.0) == pytest.approx(1 - math.exp(-2))


def test_product_is_order_independent_for_monomials():
    a = [LengthPolynomial.monomial(x) for x in (0.1, 0.2, 0.3)]
    assert product(a).terms == product(a[::-1]).terms


def test_json_round_trip():
    p = LengthPolynomial.from_pairs([(0.0, 1), (1.25, Fraction(-2, 3))])
    assert LengthPolynomial.from_json(p.to_json()) == p
    assert to_jsonable(p) == p.to_json()
