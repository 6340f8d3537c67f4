import random
from fractions import Fraction

import pytest

from combmag.category import (
    FiniteCategory,
    InvariantViolation,
    Poset,
    check_vanishing,
    hall_moebius,
    leinster_moebius,
    moebius,
    nerve_euler_characteristic,
    oracle_moebius,
    poset_to_category,
)
from combmag.fixtures import (
    antichain,
    boolean_lattice_b2,
    chain_poset,
    example_category,
    isomorphic_pair_category,
    random_poset,
    random_skeletal_category,
)


def test_example_moebius_matrix():
    res = moebius(example_category())
    assert res.det_zeta == 1
    mu = res.moebius
    assert mu.entry("a", "c") == 4
    assert mu.entry("a", "b") == -2
    assert mu.entry("b", "c") == -3
    assert [mu.entry(x, x) for x in "abc"] == [1, 1, 1]
    assert res.magnitude == 1 - 2 + 4 + 1 - 3 + 1


def test_chain_moebius():
    mu = hall_moebius(chain_poset(4))
    assert mu.entry("a", "b") == -1
    assert mu.entry("a", "c") == 0
    assert mu.entry("a", "d") == 0


def test_boolean_lattice_top_value():
    mu = moebius(poset_to_category(boolean_lattice_b2())).moebius
    assert mu.entry("0", "1") == 1


def test_antichain_magnitude_counts_points():
    assert moebius(poset_to_category(antichain(4))).magnitude == 4


def test_singular_zeta_has_no_moebius():
    res = moebius(isomorphic_pair_category())
    assert res.det_zeta == 0 and not res.has_inversion


def test_methods_agree_on_random_posets():
    rng = random.Random(3)
    for _ in range(15):
        P = random_poset(rng, rng.randint(1, 6))
        C = poset_to_category(P)
        mu = moebius(C).moebius
        assert mu.rows == hall_moebius(P).rows == oracle_moebius(C).rows
        assert mu.rows == leinster_moebius(C).rows
        assert check_vanishing(C, mu) == []


def test_euler_characteristic_of_nerve_equals_magnitude():
    rng = random.Random(4)
    for _ in range(10):
        P = random_poset(rng, rng.randint(1, 5))
        assert nerve_euler_characteristic(P) == moebius(poset_to_category(P)).magnitude


def test_leinster_with_nontrivial_automorphisms():
    rng = random.Random(8)
    for _ in range(10):
        C = random_skeletal_category(rng, rng.randint(1, 4))
        assert leinster_moebius(C).rows == oracle_moebius(C).rows


def test_leinster_requires_flags():
    with pytest.raises(ValueError):
        leinster_moebius(isomorphic_pair_category())


def test_category_validation():
    with pytest.raises(InvariantViolation):
        FiniteCategory(("a",), {("a", "a"): 0})
    with pytest.raises(InvariantViolation):
        FiniteCategory(("a", "b", "c"), {("a", "b"): 1, ("b", "c"): 1, ("a", "a"): 1, ("b", "b"): 1, ("c", "c"): 1})


def test_poset_cycle_rejected():
    with pytest.raises(InvariantViolation):
        Poset(("a", "b"), (("a", "b"), ("b", "a")))


def test_duplicate_object_is_isomorphic_copy():
    C = example_category().duplicate_object("b", "b2")
    assert C.hom_count("b2", "c") == 3 and C.hom_count("b", "b2") == 1
    assert Fraction(C.hom_count("a", "b2")) == 2
