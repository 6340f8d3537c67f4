"""Finite categories and posets given by hom-set cardinalities.

Composition tables are not stored: every formula here depends only on the
zeta matrix ``zeta[a][b] = |Hom(a, b)|``.  The two facts that can be checked
from counts alone (identities exist, composable pairs compose to something)
are enforced on construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Sequence

from .digraph import DEFAULT_MAX_VERTICES, enumerate_simple_paths
from .linalg import (
    SingularMatrixError,
    SquareMatrix,
    coates_determinant,
    combinatorial_inverse,
    gauss_inverse,
)


class InvariantViolation(ValueError):
    """Input data violates a structural invariant (identities, composition, metric axioms...)."""


@dataclass(frozen=True)
class FiniteCategory:
    objects: tuple
    hom: dict  # (a, b) -> |Hom(a, b)|; missing pairs are 0
    skeletal: bool = False
    idempotents_trivial: bool = False

    def __post_init__(self):
        objs = tuple(self.objects)
        object.__setattr__(self, "objects", objs)
        if len(set(objs)) != len(objs):
            raise InvariantViolation("duplicate object")
        known = set(objs)
        for (a, b), k in self.hom.items():
            if a not in known or b not in known:
                raise InvariantViolation(f"hom entry ({a!r}, {b!r}) names an unknown object")
            if not isinstance(k, int) or k < 0:
                raise InvariantViolation(f"|Hom({a}, {b})| must be a nonnegative integer, got {k!r}")
        for a in objs:
            if self.hom_count(a, a) < 1:
                raise InvariantViolation(f"object {a!r} has no identity morphism")
        for a in objs:
            for b in objs:
                if not self.hom_count(a, b):
                    continue
                for c in objs:
                    if self.hom_count(b, c) and not self.hom_count(a, c):
                        raise InvariantViolation(
                            f"Hom({a},{b}) and Hom({b},{c}) are nonempty but Hom({a},{c}) is empty"
                        )

    @classmethod
    def from_zeta(cls, rows, objects: Sequence[Hashable] | None = None, **flags):
        objects = tuple(range(len(rows))) if objects is None else tuple(objects)
        hom = {
            (a, b): int(rows[i][j])
            for i, a in enumerate(objects)
            for j, b in enumerate(objects)
            if rows[i][j]
        }
        return cls(objects, hom, **flags)

    def hom_count(self, a, b) -> int:
        return self.hom.get((a, b), 0)

    @property
    def n(self) -> int:
        return len(self.objects)

    def duplicate_object(self, a, copy) -> FiniteCategory:
        """Add ``copy`` isomorphic to ``a``: hom-counts to and from it replicate those of ``a``."""
        objs = self.objects + (copy,)
        ident = self.hom_count(a, a)

        def count(x, y):
            x0 = a if x == copy else x
            y0 = a if y == copy else y
            return self.hom_count(x0, y0) if (x0, y0) != (a, a) else ident

        hom = {(x, y): count(x, y) for x in objs for y in objs if count(x, y)}
        return FiniteCategory(objs, hom, skeletal=False, idempotents_trivial=self.idempotents_trivial)


@dataclass(frozen=True)
class Poset:
    elements: tuple
    covers: tuple  # (lower, upper) pairs
    _leq: frozenset = field(default=frozenset(), repr=False, compare=False)

    def __post_init__(self):
        elems = tuple(self.elements)
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "covers", tuple(tuple(c) for c in self.covers))
        known = set(elems)
        if len(known) != len(elems):
            raise InvariantViolation("duplicate poset element")
        up = {e: set() for e in elems}
        for lo, hi in self.covers:
            if lo not in known or hi not in known:
                raise InvariantViolation(f"cover ({lo!r}, {hi!r}) names an unknown element")
            if lo == hi:
                raise InvariantViolation(f"cover relation ({lo!r}, {hi!r}) is reflexive")
            up[lo].add(hi)
        leq = set()
        for e in elems:
            seen, stack = set(), [e]
            while stack:
                x = stack.pop()
                for y in up[x]:
                    if y == e:
                        raise InvariantViolation(f"cover relations contain a cycle through {e!r}")
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            leq.add((e, e))
            leq.update((e, y) for y in seen)
        object.__setattr__(self, "_leq", frozenset(leq))

    def leq(self, a, b) -> bool:
        return (a, b) in self._leq


def poset_to_category(P: Poset) -> FiniteCategory:
    hom = {(a, b): 1 for a in P.elements for b in P.elements if P.leq(a, b)}
    return FiniteCategory(P.elements, hom, skeletal=True, idempotents_trivial=True)


def zeta_matrix(C: FiniteCategory) -> SquareMatrix:
    return SquareMatrix(
        C.objects,
        tuple(tuple(Fraction(C.hom_count(a, b)) for b in C.objects) for a in C.objects),
    )


@dataclass
class MoebiusResult:
    zeta: SquareMatrix
    det_zeta: Fraction
    moebius: SquareMatrix | None
    magnitude: Fraction | None
    method: str = "combinatorial"

    @property
    def has_inversion(self) -> bool:
        return self.moebius is not None


def moebius(C: FiniteCategory, *, max_vertices: int | None = DEFAULT_MAX_VERTICES) -> MoebiusResult:
    """Möbius function through connections; ``moebius`` is None when zeta is singular."""
    zeta = zeta_matrix(C)
    det = Fraction(coates_determinant(zeta, max_vertices=max_vertices))
    if det == 0:
        return MoebiusResult(zeta, det, None, None)
    mu = combinatorial_inverse(zeta, max_vertices=max_vertices)
    delta = SquareMatrix.identity(zeta.index)
    if (zeta @ mu).rows != delta.rows or (mu @ zeta).rows != delta.rows:
        raise ArithmeticError("combinatorial inverse failed the zeta*mu = delta check")
    return MoebiusResult(zeta, det, mu, Fraction(mu.total()))


def check_vanishing(C: FiniteCategory, mu: SquareMatrix | None = None) -> list[tuple]:
    """Pairs ``(a, b)`` with zeta(a, b) = 0 but mu(a, b) != 0; empty on any valid category."""
    if mu is None:
        mu = moebius(C).moebius
        if mu is None:
            raise SingularMatrixError("category has no Möbius inversion")
    return [
        (a, b)
        for i, a in enumerate(C.objects)
        for j, b in enumerate(C.objects)
        if C.hom_count(a, b) == 0 and mu.rows[i][j] != 0
    ]


def _has_nontrivial_cycle(C: FiniteCategory) -> bool:
    # a cycle through distinct objects means some non-identity circuit exists
    color = {a: 0 for a in C.objects}

    def visit(a):
        color[a] = 1
        for b in C.objects:
            if b == a or not C.hom_count(a, b):
                continue
            if color[b] == 1 or (color[b] == 0 and visit(b)):
                return True
        color[a] = 2
        return False

    return any(color[a] == 0 and visit(a) for a in C.objects)


def leinster_moebius(C: FiniteCategory) -> SquareMatrix:
    """Möbius function of a skeletal category whose only idempotents are identities.

    Sums ``(-1)**k * m(path) / prod |Hom(c_i, c_i)|`` over simple paths
    ``a = c_0 -> ... -> c_k = b`` of the zeta digraph, where ``m(path)`` is
    the product of hom-counts along the path (its multiplicity in the
    multidigraph of morphisms).
    """
    if not (C.skeletal and C.idempotents_trivial):
        raise ValueError("leinster_moebius requires the skeletal and idempotents_trivial flags")
    if _has_nontrivial_cycle(C):
        raise InvariantViolation("a circuit through distinct objects contradicts the asserted flags")
    D = zeta_matrix(C).digraph()
    rows = []
    for a in C.objects:
        row = []
        for b in C.objects:
            total = Fraction(0)
            for path in enumerate_simple_paths(D, a, b):
                denom = 1
                for c in path.vertices:
                    denom *= C.hom_count(c, c)
                total += (-1) ** path.length * Fraction(path.weight) / denom
            row.append(total)
        rows.append(tuple(row))
    return SquareMatrix(C.objects, tuple(rows))


def hall_moebius(P: Poset) -> SquareMatrix:
    """``mu(a, b) = sum_k (-1)**k * #{chains a = c_0 < ... < c_k = b}``.

    Chains are counted by dynamic programming over the strict order, without
    going through the digraph machinery.
    """
    elems = P.elements
    height = {y: sum(P.leq(z, y) for z in elems) for y in elems}
    rows = []
    for a in elems:
        # signed[x] = sum over chains a < ... < x of (-1)**length
        signed = {a: 1}
        above = sorted((y for y in elems if P.leq(a, y) and y != a), key=height.__getitem__)
        for y in above:
            signed[y] = -sum(s for x, s in signed.items() if P.leq(x, y))
        rows.append(tuple(Fraction(signed.get(b, 0)) for b in elems))
    return SquareMatrix(elems, tuple(rows))


def oracle_moebius(C: FiniteCategory) -> SquareMatrix:
    return gauss_inverse(zeta_matrix(C))


def count_k_paths(P: Poset) -> dict[int, int]:
    """Total number of chains ``c_0 < ... < c_k`` with k steps, over all endpoint pairs."""
    elems = P.elements
    counts: dict[int, int] = {}

    def walk(x, k):
        counts[k] = counts.get(k, 0) + 1
        for y in elems:
            if y != x and P.leq(x, y):
                walk(y, k + 1)

    for e in elems:
        walk(e, 0)
    return dict(sorted(counts.items()))


def nerve_euler_characteristic(P: Poset) -> int:
    return sum((-1) ** k * c for k, c in count_k_paths(P).items())
