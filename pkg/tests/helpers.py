"""Test fixtures and package-independent brute-force checks."""

from __future__ import annotations

import random
from itertools import combinations

from indmst import Graph, Instance, InfeasibleInstance, PartitionMatroid, UniformMatroid

# Example W: square 1-2-3-4 of existing edges plus both diagonals as potentials.
# ids: 0=12, 1=23, 2=34, 3=41, 4=13, 5=24
EXAMPLE_W = Graph(4, [
    (0, 1, 4, True), (1, 2, 5, True), (2, 3, 6, True), (3, 0, 7, True),
    (0, 2, 1, False), (1, 3, 2, False),
])
E12, E23, E34, E41, E13, E24 = range(6)

# triangle a, b, c; ids 0=ab, 1=bc, 2=ca
TRIANGLE = Graph(3, [(0, 1, 5, True), (1, 2, 3, True), (2, 0, 1, False)])
AB, BC, CA = range(3)


def example_w() -> Instance:
    return Instance.from_graph(EXAMPLE_W)


def triangle() -> Instance:
    return Instance.from_graph(TRIANGLE)


def is_forest(n: int, edges) -> bool:
    """Acyclicity by DFS over an explicit multigraph (no union-find)."""
    adj = {v: [] for v in range(n)}
    for idx, (u, v) in enumerate(edges):
        if u == v:
            return False
        adj[u].append((v, idx))
        adj[v].append((u, idx))
    seen = set()
    for root in range(n):
        if root in seen:
            continue
        stack = [(root, None)]
        seen.add(root)
        while stack:
            x, via = stack.pop()
            for y, idx in adj[x]:
                if idx == via:
                    continue
                if y in seen:
                    return False
                seen.add(y)
                stack.append((y, idx))
    return True


def graph_independent(g: Graph, subset) -> bool:
    return is_forest(g.n, [(g.edges[i].u, g.edges[i].v) for i in subset])


def all_bases(is_independent, ground: int) -> list[frozenset]:
    """Maximal independent sets by exhaustive subset enumeration."""
    for r in range(ground, -1, -1):
        found = [frozenset(c) for c in combinations(range(ground), r) if is_independent(c)]
        if found:
            return found
    return [frozenset()]


def brute_min_basis_weight(is_independent, ground: int, weights, allowed) -> int:
    """Min weight over maximal independent subsets of ``allowed``."""
    allowed = sorted(allowed)
    best = None
    for r in range(len(allowed), -1, -1):
        for c in combinations(allowed, r):
            if is_independent(c):
                w = sum(weights[e] for e in c)
                best = w if best is None else min(best, w)
        if best is not None:
            return best
    return 0


def brute_f(instance: Instance, added) -> int:
    return brute_min_basis_weight(instance.oracle.is_independent, instance.size,
                                  instance.weights, instance.existing | set(added))


def random_uniform_instance(rng: random.Random, max_ground: int = 10,
                            max_horizon: int = 8) -> Instance:
    n = rng.randint(2, max_ground)
    r = rng.randint(1, n - 1)
    horizon = rng.randint(0, min(max_horizon, n - r))
    potential = set(rng.sample(range(n), horizon))
    weights = [rng.randint(-9, 9) for _ in range(n)]
    return Instance.from_oracle(UniformMatroid(r, n), weights,
                                [e for e in range(n) if e not in potential])


def random_partition_instance(rng: random.Random, max_ground: int = 10,
                              max_horizon: int = 8) -> Instance:
    while True:
        n = rng.randint(2, max_ground)
        k = rng.randint(1, 4)
        blocks = [rng.randrange(k) for _ in range(n)]
        sizes = [blocks.count(b) for b in range(k)]
        capacities = [rng.randint(0, s) for s in sizes]
        horizon = rng.randint(0, min(max_horizon, n))
        potential = set(rng.sample(range(n), horizon))
        weights = [rng.randint(-9, 9) for _ in range(n)]
        try:
            return Instance.from_oracle(PartitionMatroid(blocks, capacities), weights,
                                        [e for e in range(n) if e not in potential])
        except InfeasibleInstance:
            continue


def random_basis(instance: Instance, rng: random.Random) -> frozenset:
    order = list(range(instance.size))
    rng.shuffle(order)
    return frozenset(instance.oracle.greedy(order))
