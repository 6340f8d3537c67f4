"""Named instances and seeded random generators used by tests and ``verify``."""
from __future__ import annotations

import math
import random
from fractions import Fraction

from .category import FiniteCategory, Poset
from .linalg import SquareMatrix, bareiss_determinant
from .metric import FiniteMetricSpace


def example_category() -> FiniteCategory:
    """Three objects a, b, c: two arrows a->b, three b->c, two a->c, identities only on the diagonal."""
    return FiniteCategory(
        ("a", "b", "c"),
        {("a", "a"): 1, ("b", "b"): 1, ("c", "c"): 1, ("a", "b"): 2, ("a", "c"): 2, ("b", "c"): 3},
        skeletal=True,
        idempotents_trivial=True,
    )


def isomorphic_pair_category() -> FiniteCategory:
    """Two isomorphic objects: every hom-set is a singleton, so zeta is all ones."""
    return FiniteCategory(("u", "v"), {(a, b): 1 for a in "uv" for b in "uv"})


def chain_poset(n: int = 3) -> Poset:
    elems = tuple("abcdefghij"[:n])
    return Poset(elems, tuple(zip(elems, elems[1:])))


def boolean_lattice_b2() -> Poset:
    return Poset(("0", "x", "y", "1"), (("0", "x"), ("0", "y"), ("x", "1"), ("y", "1")))


def antichain(n: int = 3) -> Poset:
    return Poset(tuple(f"p{i}" for i in range(n)), ())


def two_point_space(d: float = 1.0) -> FiniteMetricSpace:
    return FiniteMetricSpace.from_distances([[0.0, d], [d, 0.0]], labels=("x", "y"))


def equilateral_space(s: float = 1.0) -> FiniteMetricSpace:
    return FiniteMetricSpace.from_distances(
        [[0.0 if i == j else s for j in range(3)] for i in range(3)], labels=("x", "y", "z")
    )


def unit_square() -> FiniteMetricSpace:
    return FiniteMetricSpace.from_coordinates([(0, 0), (1, 0), (1, 1), (0, 1)], labels=("p1", "p2", "p3", "p4"))


def grid_six_points() -> FiniteMetricSpace:
    """x_i = (i, 0) and x_{i+3} = (i, 1) for i = 1, 2, 3 in the Euclidean plane."""
    coords = [(i, 0) for i in (1, 2, 3)] + [(i, 1) for i in (1, 2, 3)]
    return FiniteMetricSpace.from_coordinates(coords, labels=tuple(f"x{k}" for k in range(1, 7)))


# --- random generators ---------------------------------------------------------

def random_integer_matrix(rng: random.Random, n: int, lo: int = -3, hi: int = 3) -> SquareMatrix:
    return SquareMatrix.from_rows([[Fraction(rng.randint(lo, hi)) for _ in range(n)] for _ in range(n)])


def random_rational_matrix(rng: random.Random, n: int, nonsingular: bool = True) -> SquareMatrix:
    while True:
        m = SquareMatrix.from_rows(
            [[Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)]
        )
        if not nonsingular or bareiss_determinant(m) != 0:
            return m


def random_low_rank_matrix(rng: random.Random, n: int, rank: int) -> SquareMatrix:
    """Sum of ``rank`` random integer outer products (rank at most ``rank``)."""
    rows = [[Fraction(0)] * n for _ in range(n)]
    for _ in range(rank):
        u = [rng.randint(-2, 2) for _ in range(n)]
        v = [rng.randint(-2, 2) for _ in range(n)]
        for i in range(n):
            for j in range(n):
                rows[i][j] += u[i] * v[j]
    return SquareMatrix.from_rows(rows)


def random_poset(rng: random.Random, n: int, p: float = 0.4) -> Poset:
    """Random DAG covers on a shuffled linear order (covers may be redundant)."""
    elems = [f"e{i}" for i in range(n)]
    order = elems[:]
    rng.shuffle(order)
    covers = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Poset(tuple(elems), tuple(covers))


def random_skeletal_category(rng: random.Random, n: int, p: float = 0.5, max_hom: int = 3) -> FiniteCategory:
    """Hom-counts supported on a random partial order; automorphism groups of order 1..3."""
    P = random_poset(rng, n, p)
    hom = {}
    for a in P.elements:
        for b in P.elements:
            if a == b:
                hom[(a, a)] = rng.randint(1, 3)
            elif P.leq(a, b):
                hom[(a, b)] = rng.randint(1, max_hom)
    return FiniteCategory(P.elements, hom, skeletal=True, idempotents_trivial=True)


def random_category(rng: random.Random, n: int, p: float = 0.4, max_hom: int = 3) -> FiniteCategory:
    """Hom-counts supported on a random preorder; cycles (isomorphic objects) allowed."""
    objs = [f"o{i}" for i in range(n)]
    rel = {(a, a) for a in objs}
    for a in objs:
        for b in objs:
            if a != b and rng.random() < p:
                rel.add((a, b))
    changed = True
    while changed:
        changed = False
        for a, b in list(rel):
            for c in objs:
                if (b, c) in rel and (a, c) not in rel:
                    rel.add((a, c))
                    changed = True
    hom = {pair: rng.randint(1, max_hom) for pair in sorted(rel)}
    return FiniteCategory(tuple(objs), hom)


def random_metric_space(rng: random.Random, n: int, dim: int = 2, scale: float = 3.0,
                        norm: str = "l2") -> FiniteMetricSpace:
    while True:
        coords = [tuple(rng.uniform(0, scale) for _ in range(dim)) for _ in range(n)]
        X = FiniteMetricSpace.from_coordinates(coords, labels=tuple(f"x{i}" for i in range(n)), norm=norm)
        if n < 2 or X.min_distance() > 0.05 * scale:
            return X


def magnitude_two_points(t: float, d: float) -> float:
    return 2.0 / (1.0 + math.exp(-t * d))


def magnitude_equilateral(t: float, s: float) -> float:
    return 3.0 / (1.0 + 2.0 * math.exp(-t * s))
