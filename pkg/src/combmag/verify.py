"""Invariant battery run by ``combmag verify``.

Every check compares a combinatorial computation with an independent route
and records the residual.  Exact checks report residuals as rational strings.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from . import fixtures
from .category import (
    FiniteCategory,
    Poset,
    check_vanishing,
    hall_moebius,
    leinster_moebius,
    moebius,
    nerve_euler_characteristic,
    oracle_moebius,
    poset_to_category,
    zeta_matrix,
)
from .digraph import connection_census
from .instances import (
    InstanceSpec,
    category_instance,
    matrix_instance,
    metric_instance,
    poset_instance,
    to_category,
    to_matrix,
    to_metric,
    to_poset,
)
from .linalg import (
    SquareMatrix,
    bareiss_determinant,
    coates_determinant,
    combinatorial_cofactor,
    combinatorial_inverse,
    gauss_inverse,
    matmul,
    permutation_determinant,
    quotient_form_inverse_entry,
)
from .metric import (
    FiniteMetricSpace,
    MetricExpansion,
    PathSumExpansion,
    length_moments,
    limit_check,
    oracle_magnitude,
)
from .pseudo import factorization_pseudoinverse, magnitude_general

REL_TOL = 1e-9
LIMIT_TOL = 1e-6
VERIFY_T_VALUES = (0.5, 1.0, 2.0, 4.0)


@dataclass
class Check:
    fixture: str
    name: str
    passed: bool
    residual: object = 0
    note: str = ""

    def as_dict(self) -> dict:
        residual = self.residual
        if isinstance(residual, Fraction) or isinstance(residual, int):
            residual = str(Fraction(residual))
        out = {"fixture": self.fixture, "check": self.name, "passed": self.passed, "residual": residual}
        if self.note:
            out["note"] = self.note
        return out


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _exact_diff(a: SquareMatrix, b: SquareMatrix) -> Fraction:
    return max((abs(Fraction(x) - Fraction(y)) for ra, rb in zip(a.rows, b.rows) for x, y in zip(ra, rb)),
               default=Fraction(0))


# --- matrices -----------------------------------------------------------------

def check_matrix(M: SquareMatrix, fixture: str) -> list[Check]:
    out = []
    det = coates_determinant(M)
    if M.n <= 9:
        perm = permutation_determinant(M)
        out.append(Check(fixture, "det_coates_eq_permutation", det == perm, abs(Fraction(det - perm))))
    bar = bareiss_determinant(M)
    out.append(Check(fixture, "det_coates_eq_bareiss", det == bar, abs(Fraction(det - bar))))
    det_t = coates_determinant(M.transpose())
    out.append(Check(fixture, "det_transpose_invariant", det == det_t, abs(Fraction(det - det_t))))
    n = M.n
    kappa = [[combinatorial_cofactor(M, i, j) for j in range(n)] for i in range(n)]
    kt_xi = matmul([list(r) for r in zip(*kappa)], [list(r) for r in M.rows]) if n else []
    target = [[det if i == j else 0 for j in range(n)] for i in range(n)]
    res = max((abs(Fraction(kt_xi[i][j] - target[i][j])) for i in range(n) for j in range(n)), default=Fraction(0))
    out.append(Check(fixture, "cofactor_identity", res == 0, res))
    rev = list(reversed(range(n)))
    det_rev = coates_determinant(M.permuted(rev))
    out.append(Check(fixture, "det_ordering_independent", det_rev == det, abs(Fraction(det_rev - det))))
    if det != 0:
        inv = combinatorial_inverse(M)
        oracle = gauss_inverse(M)
        d = _exact_diff(inv, oracle)
        out.append(Check(fixture, "inverse_eq_gauss", d == 0, d))
        prod = inv @ M
        d2 = _exact_diff(M @ inv, SquareMatrix.identity(M.index))
        d2 = max(d2, _exact_diff(prod, SquareMatrix.identity(M.index)))
        out.append(Check(fixture, "inverse_two_sided", d2 == 0, d2))
        qd = max((abs(Fraction(quotient_form_inverse_entry(M, i, j)) - inv.rows[i][j])
                  for i in range(n) for j in range(n)), default=Fraction(0))
        out.append(Check(fixture, "quotient_form_eq_inverse", qd == 0, qd))
        inv_rev = combinatorial_inverse(M.permuted(rev))
        d3 = _exact_diff(inv_rev, inv.permuted(rev))
        out.append(Check(fixture, "inverse_ordering_conjugates", d3 == 0, d3))
    return out


# --- categories and posets ------------------------------------------------------

def check_category(C: FiniteCategory, fixture: str) -> list[Check]:
    out = []
    res = moebius(C)
    zeta = res.zeta
    if res.has_inversion:
        d = _exact_diff(res.moebius, oracle_moebius(C))
        out.append(Check(fixture, "moebius_eq_gauss", d == 0, d))
        viol = check_vanishing(C, res.moebius)
        out.append(Check(fixture, "vanishing_off_support", not viol, len(viol)))
    if C.skeletal and C.idempotents_trivial:
        prod = 1
        for a in C.objects:
            prod *= C.hom_count(a, a)
        out.append(Check(fixture, "det_eq_product_of_automorphism_orders", res.det_zeta == prod,
                         abs(res.det_zeta - prod)))
        if res.has_inversion:
            d = _exact_diff(leinster_moebius(C), res.moebius)
            out.append(Check(fixture, "leinster_eq_moebius", d == 0, d))
    if C.n <= 6:
        pm = magnitude_general(C)
        worst = max(abs(Fraction(r)) for r in pm.penrose_residuals)
        out.append(Check(fixture, "berg_penrose_equations", worst == 0, worst))
        d = _exact_diff(pm.pseudoinverse, factorization_pseudoinverse(zeta))
        out.append(Check(fixture, "berg_eq_factorization_oracle", d == 0, d))
        if res.has_inversion:
            dm = abs(pm.magnitude - res.magnitude)
            out.append(Check(fixture, "general_magnitude_eq_magnitude", dm == 0, dm))
        if C.n <= 4:
            dup = magnitude_general(C.duplicate_object(C.objects[0], "__copy__"))
            dd = abs(dup.magnitude - pm.magnitude)
            out.append(Check(fixture, "magnitude_invariant_under_duplication", dd == 0, dd))
    return out


def check_poset(P: Poset, fixture: str) -> list[Check]:
    C = poset_to_category(P)
    out = check_category(C, fixture)
    hall = hall_moebius(P)
    mu = moebius(C).moebius
    d = _exact_diff(hall, mu)
    out.append(Check(fixture, "hall_eq_moebius", d == 0, d))
    d = _exact_diff(hall, leinster_moebius(C))
    out.append(Check(fixture, "hall_eq_leinster", d == 0, d))
    mag = Fraction(mu.total())
    chi = nerve_euler_characteristic(P)
    out.append(Check(fixture, "magnitude_eq_nerve_euler_characteristic", mag == chi, abs(mag - chi)))
    return out


# --- metric spaces ----------------------------------------------------------------

def check_metric(X: FiniteMetricSpace, fixture: str, t_values=VERIFY_T_VALUES) -> list[Check]:
    out = []
    exp = MetricExpansion(X)
    worst = 0.0
    for t in t_values:
        worst = max(worst, _rel(exp.magnitude(t), oracle_magnitude(X, t)))
    out.append(Check(fixture, "magnitude_eq_gauss_sweep", worst <= REL_TOL, worst))
    if X.n <= 6:
        paths = PathSumExpansion(X)
        worst = max(_rel(paths.magnitude(t), exp.magnitude(t)) for t in t_values)
        out.append(Check(fixture, "path_sum_eq_magnitude", worst <= REL_TOL, worst))
        rep = length_moments(X)
        bad = [k for k, (_, _, ok) in rep.checks.items() if not ok]
        out.append(Check(fixture, "length_moment_identities", not bad, len(bad), ",".join(bad)))
    if X.n > 1 and X.min_distance() > 0:
        value = limit_check(X)
        out.append(Check(fixture, "large_t_limit_eq_cardinality", abs(value - X.n) <= LIMIT_TOL,
                         abs(value - X.n)))
    rev = X.relabeled(list(reversed(range(X.n))))
    a, b = exp.magnitude(1.0), MetricExpansion(rev).magnitude(1.0)
    out.append(Check(fixture, "magnitude_relabeling_bitwise", a == b, abs(a - b)))
    return out


def cancellation_check(X: FiniteMetricSpace, fixture: str, source="x1", via="x2", target="x3") -> list[Check]:
    """The direct connection and the one through ``via`` (all else loops) carry equal weight, opposite sign."""
    exp = MetricExpansion(X)
    terms = exp.connection_terms(source, target)
    others = [p for p in X.points if p not in (source, via, target)]
    direct = via_path = None
    for C, exponent, sign in terms:
        loops = all((p, p) in C.cover_edges for p in others)
        if C.path_edges == ((source, target),) and loops and (via, via) in C.cover_edges:
            direct = (exponent, sign)
        if C.path_edges == ((source, via), (via, target)) and loops:
            via_path = (exponent, sign)
    found = direct is not None and via_path is not None
    equal = found and abs(direct[0] - via_path[0]) <= exp.merge_tol and direct[1] == -via_path[1]
    coeff = exp.numerators[(source, target)].coefficient(direct[0]) if found else None
    return [
        Check(fixture, "cancelling_pair_equal_weight_opposite_sign", bool(equal),
              abs(direct[0] - via_path[0]) if found else math.inf),
        Check(fixture, "cancelling_pair_aggregated_coefficient_zero", coeff == 0, Fraction(coeff or 0)),
    ]


# --- suite -------------------------------------------------------------------------

def builtin_suite(seed: int | None = 0, random_count: int = 3) -> list[tuple[str, InstanceSpec]]:
    suite = [
        ("example_category", category_instance(fixtures.example_category())),
        ("isomorphic_pair", category_instance(fixtures.isomorphic_pair_category())),
        ("chain3", poset_instance(fixtures.chain_poset(3))),
        ("boolean_b2", poset_instance(fixtures.boolean_lattice_b2())),
        ("antichain3", poset_instance(fixtures.antichain(3))),
        ("identity4", matrix_instance(SquareMatrix.identity(4))),
        ("two_point", metric_instance(fixtures.two_point_space(1.0))),
        ("equilateral", metric_instance(fixtures.equilateral_space(1.0))),
        ("unit_square", metric_instance(fixtures.unit_square())),
        ("grid6", metric_instance(fixtures.grid_six_points())),
    ]
    if seed is not None:
        rng = random.Random(seed)
        for k in range(random_count):
            suite.append((f"random_matrix_{seed}_{k}", matrix_instance(fixtures.random_integer_matrix(rng, rng.randint(2, 5)))))
            suite.append((f"random_poset_{seed}_{k}", poset_instance(fixtures.random_poset(rng, rng.randint(2, 6)))))
            suite.append((f"random_skeletal_{seed}_{k}", category_instance(fixtures.random_skeletal_category(rng, rng.randint(2, 5)))))
            suite.append((f"random_category_{seed}_{k}", category_instance(fixtures.random_category(rng, rng.randint(2, 4)))))
            suite.append((f"random_metric_{seed}_{k}", metric_instance(fixtures.random_metric_space(rng, rng.randint(2, 5)))))
    return suite


def run_battery(spec: InstanceSpec, fixture: str) -> list[Check]:
    if spec.kind == "matrix":
        return check_matrix(to_matrix(spec), fixture)
    if spec.kind == "category":
        return check_category(to_category(spec), fixture)
    if spec.kind == "poset":
        return check_poset(to_poset(spec), fixture)
    X = to_metric(spec)
    checks = check_metric(X, fixture)
    if set(X.points) >= {"x1", "x2", "x3"} and fixture == "grid6":
        checks += cancellation_check(X, fixture)
    return checks


def example_index_note() -> dict:
    """Informational: where the 3-object example's value 4 sits under each indexing."""
    C = fixtures.example_category()
    mu = moebius(C).moebius
    D = zeta_matrix(C).digraph()
    return {
        "value_4_position_by_connections_a_to_c": ["a", "c"],
        "mu(a,c)": str(mu.entry("a", "c")),
        "mu(b,c) at position (2,3)": str(mu.entry("b", "c")),
        "connection_census_a_to_c_by_cycle_count": {str(k): v for k, v in connection_census(D, "a", "c").items()},
    }
