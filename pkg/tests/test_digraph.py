import pytest

from combmag.digraph import (
    SizeCapError,
    build_digraph,
    complete_digraph,
    connection_census,
    enumerate_connections,
    enumerate_linear_subdigraphs,
    enumerate_simple_paths,
)
from combmag.fixtures import example_category
from combmag.category import zeta_matrix


def test_build_rejects_bad_input():
    with pytest.raises(ValueError):
        build_digraph(["a"], [("a", "b", 1)])
    with pytest.raises(ValueError):
        build_digraph(["a", "b"], [("a", "b", 0)])
    with pytest.raises(ValueError):
        build_digraph(["a", "a"], [])


def test_complete_digraph_cover_count_is_factorial():
    D = complete_digraph("abcd")
    assert sum(1 for _ in enumerate_linear_subdigraphs(D)) == 24


def test_cover_signatures_match_permutation_parity():
    D = complete_digraph("abc")
    sigs = sorted(L.signature for L in enumerate_linear_subdigraphs(D))
    assert sigs == [-1, -1, -1, 1, 1, 1]


def test_simple_paths_in_complete_digraph():
    D = complete_digraph("abcd")
    # a->d direct, via one of 2, via both in 2 orders
    assert len(list(enumerate_simple_paths(D, "a", "d"))) == 1 + 2 + 2


def test_example_census_counts_multiplicity():
    D = zeta_matrix(example_category()).digraph()
    assert connection_census(D, "a", "c") == {0: 6, 1: 2}
    conns = list(enumerate_connections(D, "a", "c"))
    assert sum(c.signature * c.weight for c in conns) == 4


def test_connection_from_vertex_to_itself_has_empty_path():
    D = complete_digraph("ab")
    conns = list(enumerate_connections(D, "a", "a"))
    assert all(c.path_edges == () for c in conns)
    assert len(conns) == 1


def test_size_cap():
    D = complete_digraph(range(5))
    with pytest.raises(SizeCapError):
        list(enumerate_linear_subdigraphs(D, max_vertices=4))
