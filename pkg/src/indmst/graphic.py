"""Graphs and the graphic matroid (independent sets are forests)."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import NamedTuple

from .errors import InfeasibleInstance, OverflowRisk, PreconditionViolated
from .matroid import MatroidOracle

INT64_MAX = 2**63 - 1


class Edge(NamedTuple):
    u: int
    v: int
    w: int
    existing: bool


@dataclass(frozen=True)
class Graph:
    """Undirected multigraph on vertices ``0 .. n-1``.

    The position of an edge in ``edges`` is its element id. ``scale`` records
    the fixed-point factor the integer weights were multiplied by on load.
    """

    n: int
    edges: tuple[Edge, ...] = ()
    scale: int = 1

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(Edge(*e) for e in self.edges))
        if self.n < 0:
            raise ValueError("negative vertex count")
        for i, (u, v, _, _) in enumerate(self.edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {i} has endpoint outside 0..{self.n - 1}")

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(e.w for e in self.edges)

    @property
    def existing(self) -> frozenset[int]:
        return frozenset(i for i, e in enumerate(self.edges) if e.existing)


class UnionFind:
    """Disjoint sets over ``0 .. n-1`` with union by rank and path halving."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n
        self.components = n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        """Merge the sets of ``a`` and ``b``; False if already merged."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        self.components -= 1
        return True


class GraphicMatroid(MatroidOracle):
    """Forest oracle. Each query rebuilds a union-find over the queried edges."""

    def __init__(self, graph: Graph):
        self.graph = graph
        self.ground_size = graph.m

    def is_independent(self, elements: Iterable[int]) -> bool:
        edges = self.graph.edges
        uf = UnionFind(self.graph.n)
        seen = set()
        for i in elements:
            if i in seen:
                continue
            seen.add(i)
            if not uf.union(edges[i].u, edges[i].v):
                return False
        return True

    def greedy(self, order: Iterable[int]) -> list[int]:
        edges = self.graph.edges
        uf = UnionFind(self.graph.n)
        return [i for i in order if uf.union(edges[i].u, edges[i].v)]

    def circuit(self, independent: Iterable[int], e: int) -> frozenset[int]:
        return cycle_through(independent, e, self.graph)

    def __repr__(self) -> str:
        return f"GraphicMatroid(n={self.graph.n}, m={self.graph.m})"


def graphic_oracle(graph: Graph) -> GraphicMatroid:
    return GraphicMatroid(graph)


def forest_path(adjacency: Sequence[dict[int, int]], source: int, target: int) -> list[int] | None:
    """Edge ids on the path from ``source`` to ``target`` in a forest.

    ``adjacency[x]`` maps edge id to the opposite endpoint. Returns None when
    the two vertices are in different trees.
    """
    if source == target:
        return []
    # iterative DFS recording the edge used to reach each vertex
    via = {source: -1}
    stack = [source]
    while stack:
        x = stack.pop()
        for eid, y in adjacency[x].items():
            if y in via:
                continue
            via[y] = eid
            if y == target:
                path = []
                while y != source:
                    eid = via[y]
                    path.append(eid)
                    y = adjacency[y][eid]
                return path
            stack.append(y)
    return None


def cycle_through(forest: Iterable[int], e: int, graph: Graph) -> frozenset[int]:
    """The unique cycle of ``forest + e``, found by DFS along the forest path."""
    edges = graph.edges
    adjacency: list[dict[int, int]] = [{} for _ in range(graph.n)]
    for i in forest:
        if i == e:
            continue
        u, v = edges[i].u, edges[i].v
        adjacency[u][i] = v
        adjacency[v][i] = u
    u, v = edges[e].u, edges[e].v
    path = forest_path(adjacency, u, v)
    if path is None:
        raise PreconditionViolated(f"endpoints of edge {e} are not connected in the forest")
    return frozenset(path) | {e}


def validate_instance(graph: Graph) -> None:
    """Require (V, E_0) connected and the absolute weight sum to fit in int64."""
    total = sum(abs(e.w) for e in graph.edges)
    if total > INT64_MAX:
        raise OverflowRisk(f"sum of |weights| = {total} exceeds the signed 64-bit range")
    if graph.n == 0:
        return
    uf = UnionFind(graph.n)
    for e in graph.edges:
        if e.existing:
            uf.union(e.u, e.v)
    if uf.components != 1:
        raise InfeasibleInstance(
            f"existing edges leave {uf.components} components; they must connect all "
            f"{graph.n} vertices", components=uf.components)
