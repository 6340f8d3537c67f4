"""Combinatorial determinants, inverses, Möbius functions and magnitude via Coates digraphs."""
from .category import (
    FiniteCategory,
    InvariantViolation,
    Poset,
    check_vanishing,
    hall_moebius,
    leinster_moebius,
    moebius,
    poset_to_category,
    zeta_matrix,
)
from .digraph import (
    SizeCapError,
    WeightedDigraph,
    build_digraph,
    coates_digraph,
    connection_census,
    enumerate_connections,
    enumerate_linear_subdigraphs,
    enumerate_simple_paths,
)
from .linalg import (
    SingularMatrixError,
    SquareMatrix,
    bareiss_determinant,
    coates_determinant,
    combinatorial_cofactor,
    combinatorial_inverse,
    gauss_inverse,
    permutation_determinant,
    quotient_form_inverse_entry,
)
from .metric import (
    FiniteMetricSpace,
    MetricExpansion,
    PathSumExpansion,
    length_moments,
    limit_check,
    magnitude_by_paths,
    magnitude_function,
    moebius_t,
)
from .pseudo import berg_pseudoinverse, factorization_pseudoinverse, magnitude_general, penrose_check
from .scalars import LengthPolynomial

__version__ = "0.1.0"
