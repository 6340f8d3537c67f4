"""Weighted digraphs and the structures the determinant/inverse formulas sum over.

A *linear subdigraph* is a spanning set of vertex-disjoint cycles (every
vertex has in- and out-degree 1); a *connection* of ``v`` to ``w`` is a
simple path ``v -> w`` plus a linear subdigraph of the vertices the path
leaves unvisited.  All enumerators are generators and follow the input
vertex order; nothing is re-sorted internally.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterator, Sequence

from .scalars import is_zero, product

DEFAULT_MAX_VERTICES = 10


class SizeCapError(ValueError):
    """Raised when an instance exceeds a configured enumeration cap."""


@dataclass(frozen=True)
class WeightedDigraph:
    """Immutable digraph with at most one weighted edge per ordered pair.

    Build it with :func:`build_digraph`; the constructor does not validate.
    """

    vertices: tuple
    edges: dict = field(repr=False)  # (source, target) -> nonzero weight
    _index: dict = field(repr=False, compare=False)
    _succ: tuple = field(repr=False, compare=False)  # per vertex index: ((target index, weight), ...)

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, v):
        return v in self._index

    def index(self, v) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise KeyError(f"unknown vertex {v!r}") from None

    def weight(self, source, target, default=None):
        return self.edges.get((source, target), default)

    def out_degree(self, v) -> int:
        return len(self._succ[self.index(v)])

    def in_degree(self, v) -> int:
        return sum(1 for (_, t) in self.edges if t == v)

    def successors(self, v) -> list:
        return [self.vertices[j] for j, _ in self._succ[self.index(v)]]

    def edge_list(self) -> list[tuple]:
        """Edges as ``(source, target, weight)`` in vertex order."""
        return [
            (self.vertices[i], self.vertices[j], w)
            for i, row in enumerate(self._succ)
            for j, w in row
        ]


def build_digraph(vertices: Sequence[Hashable], weighted_edges) -> WeightedDigraph:
    vertices = tuple(vertices)
    index = {}
    for i, v in enumerate(vertices):
        if v in index:
            raise ValueError(f"duplicate vertex {v!r}")
        index[v] = i
    edges = {}
    for source, target, weight in weighted_edges:
        if source not in index or target not in index:
            missing = source if source not in index else target
            raise ValueError(f"edge ({source!r}, {target!r}) has undeclared endpoint {missing!r}")
        if (source, target) in edges:
            raise ValueError(f"duplicate edge ({source!r}, {target!r})")
        if is_zero(weight):
            raise ValueError(f"edge ({source!r}, {target!r}) has zero weight")
        edges[(source, target)] = weight
    succ = [[] for _ in vertices]
    for (source, target), weight in edges.items():
        succ[index[source]].append((index[target], weight))
    for row in succ:
        row.sort(key=lambda item: item[0])
    return WeightedDigraph(vertices, edges, index, tuple(tuple(r) for r in succ))


def coates_digraph(index: Sequence[Hashable], rows) -> WeightedDigraph:
    """Digraph with an edge ``i -> j`` of weight ``rows[i][j]`` for every nonzero entry."""
    index = tuple(index)
    return build_digraph(
        index,
        (
            (index[i], index[j], x)
            for i, row in enumerate(rows)
            for j, x in enumerate(row)
            if not is_zero(x)
        ),
    )


def induced_subdigraph(D: WeightedDigraph, vertex_subset) -> WeightedDigraph:
    subset = set()
    for v in vertex_subset:
        if v not in D:
            raise ValueError(f"unknown vertex {v!r}")
        subset.add(v)
    kept = tuple(v for v in D.vertices if v in subset)
    return build_digraph(
        kept,
        ((s, t, w) for s, t, w in D.edge_list() if s in subset and t in subset),
    )


@dataclass(frozen=True)
class LinearSubdigraph:
    successor: tuple  # successor[i] is the image of vertices[i]
    edges: tuple
    cycle_count: int
    weight: object
    signature: int


@dataclass(frozen=True)
class Path:
    vertices: tuple
    edges: tuple
    weight: object = 1

    @property
    def length(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class Connection:
    source: object
    target: object
    path_edges: tuple
    cover_edges: tuple
    cycle_count: int
    weight: object
    signature: int

    @property
    def edges(self) -> tuple:
        return self.path_edges + self.cover_edges


def _count_cycles(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    cycles = 0
    for start in range(len(perm)):
        if seen[start]:
            continue
        cycles += 1
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
    return cycles


def _covers(D: WeightedDigraph, allowed: Sequence[int]) -> Iterator[dict]:
    """Backtracking over successor assignments on the vertex indices ``allowed``.

    Yields ``{vertex index: (successor index, weight)}``; lexicographic in the
    successor function.
    """
    allowed_set = set(allowed)
    order = list(allowed)
    chosen: dict[int, tuple[int, object]] = {}
    used: set[int] = set()

    def extend(pos):
        if pos == len(order):
            yield dict(chosen)
            return
        i = order[pos]
        for j, w in D._succ[i]:
            if j in allowed_set and j not in used:
                used.add(j)
                chosen[i] = (j, w)
                yield from extend(pos + 1)
                del chosen[i]
                used.discard(j)

    yield from extend(0)


def enumerate_linear_subdigraphs(
    D: WeightedDigraph, *, max_vertices: int | None = DEFAULT_MAX_VERTICES
) -> Iterator[LinearSubdigraph]:
    """Yield every linear subdigraph of ``D`` once.

    The empty digraph has exactly one (empty) linear subdigraph with zero
    cycles and weight 1.
    """
    n = len(D.vertices)
    if max_vertices is not None and n > max_vertices:
        raise SizeCapError(f"{n} vertices exceeds the enumeration cap of {max_vertices}")
    for cover in _covers(D, range(n)):
        perm = [cover[i][0] for i in range(n)]
        c = _count_cycles(perm)
        yield LinearSubdigraph(
            successor=tuple(D.vertices[j] for j in perm),
            edges=tuple((D.vertices[i], D.vertices[perm[i]]) for i in range(n)),
            cycle_count=c,
            weight=product(cover[i][1] for i in range(n)),
            signature=(-1) ** ((n + c) % 2),
        )


def _simple_paths(D: WeightedDigraph, i: int, j: int, forbidden=frozenset()) -> Iterator[list[int]]:
    if i == j:
        yield [i]
        return
    stack = [i]
    on_path = {i}

    def extend(u):
        for v, _ in D._succ[u]:
            if v in on_path or v in forbidden:
                continue
            stack.append(v)
            if v == j:
                yield list(stack)
            else:
                on_path.add(v)
                yield from extend(v)
                on_path.discard(v)
            stack.pop()

    yield from extend(i)


def enumerate_simple_paths(D: WeightedDigraph, v, w) -> Iterator[Path]:
    """All simple paths ``v -> w`` in depth-first order; the 0-path iff ``v == w``."""
    i, j = D.index(v), D.index(w)
    for idx in _simple_paths(D, i, j):
        verts = tuple(D.vertices[k] for k in idx)
        edges = tuple(zip(verts, verts[1:]))
        yield Path(verts, edges, product(D.edges[e] for e in edges))


def enumerate_connections(
    D: WeightedDigraph, v, w, *, max_vertices: int | None = DEFAULT_MAX_VERTICES
) -> Iterator[Connection]:
    n = len(D.vertices)
    if max_vertices is not None and n > max_vertices:
        raise SizeCapError(f"{n} vertices exceeds the enumeration cap of {max_vertices}")
    i, j = D.index(v), D.index(w)
    for path in _simple_paths(D, i, j):
        visited = set(path)
        rest = [k for k in range(n) if k not in visited]
        path_edges = tuple((D.vertices[a], D.vertices[b]) for a, b in zip(path, path[1:]))
        path_weights = [D.edges[e] for e in path_edges]
        for cover in _covers(D, rest):
            c = _count_cycles(_restrict({k: cover[k][0] for k in rest}, rest))
            cover_edges = tuple((D.vertices[k], D.vertices[cover[k][0]]) for k in rest)
            yield Connection(
                source=v,
                target=w,
                path_edges=path_edges,
                cover_edges=cover_edges,
                cycle_count=c,
                weight=product(path_weights + [cover[k][1] for k in rest]),
                signature=(-1) ** ((n + c + 1) % 2),
            )


def _restrict(perm, subset):
    pos = {k: p for p, k in enumerate(subset)}
    return [pos[perm[k]] for k in subset]


def connection_census(D: WeightedDigraph, v, w) -> dict[int, int]:
    """Connections of ``v`` to ``w`` grouped by cycle count, counted with multiplicity.

    For integer weights the multiplicity of a connection is its weight: the
    number of ways to pick one parallel edge per edge of the structure in the
    underlying multidigraph.  Non-integer weights count 1 each.
    """
    census: dict[int, int] = {}
    for conn in enumerate_connections(D, v, w):
        w = conn.weight
        mult = int(w) if isinstance(w, (int, Fraction)) and w == int(w) and w > 0 else 1
        census[conn.cycle_count] = census.get(conn.cycle_count, 0) + mult
    return dict(sorted(census.items()))


def complete_digraph(vertices, weight=1) -> WeightedDigraph:
    """Complete digraph with loops; ``weight`` may be a constant or a callable ``(s, t) -> w``."""
    vertices = tuple(vertices)
    wfun = weight if callable(weight) else (lambda s, t: weight)
    return build_digraph(vertices, ((s, t, wfun(s, t)) for s in vertices for t in vertices))
