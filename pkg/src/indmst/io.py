"""Instance files, plan rendering and random instance generation.

Instance grammar (one directive per line, ``#`` starts a comment line)::

    p ind-mst <n> <m>
    s <scale>                  optional, power of ten, before any edge
    e <u> <v> <w> <flag>       m times; 1-based vertices; flag 1 = existing

Weights are integers, or fixed-point decimals when a scale is declared; they
are multiplied by the scale on load and must come out integral.
"""

from __future__ import annotations

import json
import random
from collections.abc import Iterator
from decimal import Decimal, InvalidOperation

from .errors import InvalidParams, ParseError
from .graphic import Edge, Graph, UnionFind, validate_instance
from .solver import BuildPlan, Instance, construction_sequence


def _parse_int(token: str, what: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {token!r}", lineno) from None


def _parse_weight(token: str, scale: int, lineno: int) -> int:
    try:
        value = Decimal(token) * scale
    except InvalidOperation:
        raise ParseError(f"weight must be a number, got {token!r}", lineno) from None
    if not value.is_finite() or value != value.to_integral_value():
        raise ParseError(f"weight {token} is not an integer at scale {scale}", lineno)
    return int(value)


def parse_instance(text: str, validate: bool = True) -> Graph:
    header = None
    scale = 1
    edges: list[Edge] = []
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        kind = tokens[0]
        if header is None:
            if kind != "p" or len(tokens) != 4 or tokens[1] != "ind-mst":
                raise ParseError("expected header 'p ind-mst <n> <m>'", lineno)
            n = _parse_int(tokens[2], "vertex count", lineno)
            m = _parse_int(tokens[3], "edge count", lineno)
            if n < 0 or m < 0:
                raise ParseError("counts must be non-negative", lineno)
            header = (n, m)
        elif kind == "s":
            if len(tokens) != 2:
                raise ParseError("expected 's <scale>'", lineno)
            if edges:
                raise ParseError("scale directive must precede the edges", lineno)
            scale = _parse_int(tokens[1], "scale", lineno)
            if scale < 1 or str(scale).rstrip("0") != "1":
                raise ParseError(f"scale must be a power of ten, got {scale}", lineno)
        elif kind == "e":
            if len(tokens) != 5:
                raise ParseError("expected 'e <u> <v> <w> <flag>'", lineno)
            if len(edges) == header[1]:
                raise ParseError(f"more than the declared {header[1]} edges", lineno)
            u = _parse_int(tokens[1], "vertex", lineno)
            v = _parse_int(tokens[2], "vertex", lineno)
            for x in (u, v):
                if not 1 <= x <= header[0]:
                    raise ParseError(f"vertex {x} outside 1..{header[0]}", lineno)
            w = _parse_weight(tokens[3], scale, lineno)
            if tokens[4] not in ("0", "1"):
                raise ParseError(f"flag must be 0 or 1, got {tokens[4]!r}", lineno)
            edges.append(Edge(u - 1, v - 1, w, tokens[4] == "1"))
        else:
            raise ParseError(f"unknown directive {kind!r}", lineno)
    if header is None:
        raise ParseError("missing header 'p ind-mst <n> <m>'", lineno or None)
    if len(edges) != header[1]:
        raise ParseError(f"declared {header[1]} edges, found {len(edges)}", lineno)
    graph = Graph(header[0], tuple(edges), scale)
    if validate:
        validate_instance(graph)
    return graph


def _format_weight(w: int, scale: int) -> str:
    if scale == 1:
        return str(w)
    digits = len(str(scale)) - 1
    return format(Decimal(w).scaleb(-digits), "f")


def emit_instance(graph: Graph) -> str:
    lines = [f"p ind-mst {graph.n} {graph.m}"]
    if graph.scale != 1:
        lines.append(f"s {graph.scale}")
    for u, v, w, existing in graph.edges:
        lines.append(f"e {u + 1} {v + 1} {_format_weight(w, graph.scale)} {int(existing)}")
    return "\n".join(lines) + "\n"


def random_graph(rng: random.Random, n: int, m: int, weight_range: tuple[int, int],
                 existing_count: int) -> Graph:
    """Connected multigraph with ``existing_count`` existing edges, which
    always include a spanning tree.

    Extra edges are uniform vertex pairs, so loops and parallel edges occur.
    """
    lo, hi = weight_range
    perm = list(range(n))
    rng.shuffle(perm)
    pairs = [(perm[i], perm[rng.randrange(i)]) for i in range(1, n)]
    pairs += [(rng.randrange(n), rng.randrange(n)) for _ in range(m - len(pairs))]
    rng.shuffle(pairs)
    weights = [rng.randint(lo, hi) for _ in range(m)]

    # existing set = random spanning tree plus random extra edges
    shuffled = list(range(m))
    rng.shuffle(shuffled)
    uf = UnionFind(n)
    tree = [i for i in shuffled if uf.union(*pairs[i])]
    in_tree = set(tree)
    others = [i for i in shuffled if i not in in_tree]
    existing = in_tree.union(others[:existing_count - len(tree)])
    edges = tuple(Edge(u, v, weights[i], i in existing) for i, (u, v) in enumerate(pairs))
    return Graph(n, edges)


def gen_random(n: int, m: int, seed: int, weight_range: tuple[int, int] = (1, 100),
               e0_fraction: float = 0.5) -> Graph:
    """Deterministic random instance; the existing edges always connect all vertices."""
    if n < 1:
        raise InvalidParams("need at least one vertex")
    if m < n - 1:
        raise InvalidParams(f"m={m} edges cannot connect n={n} vertices")
    lo, hi = weight_range
    if lo > hi:
        raise InvalidParams(f"empty weight range [{lo}, {hi}]")
    if not 0.0 <= e0_fraction <= 1.0:
        raise InvalidParams("e0_fraction must lie in [0, 1]")
    existing_count = min(m, max(n - 1, round(e0_fraction * m)))
    return random_graph(random.Random(seed), n, m, (lo, hi), existing_count)


def gen_corpus(count: int, seed: int, n_range: tuple[int, int] = (3, 7), max_m: int = 15,
               max_horizon: int = 8, weight_range: tuple[int, int] = (-9, 9)) -> Iterator[Graph]:
    """Small instances for exhaustive cross-checking."""
    for i in range(count):
        rng = random.Random(seed * 1_000_003 + i)
        n = rng.randint(*n_range)
        m = rng.randint(n - 1, max(n - 1, max_m))
        horizon = rng.randint(0, min(max_horizon, m - (n - 1)))
        yield random_graph(rng, n, m, weight_range, m - horizon)


def plan_document(plan: BuildPlan, instance: Instance | None = None,
                  verbose: bool = False) -> dict:
    doc = {
        "algorithm": plan.algorithm,
        "order": list(plan.order),
        "step_weights": list(plan.step_weights),
        "objective": plan.objective,
        "ultimate_weight": plan.ultimate_weight,
        "horizon": plan.horizon,
    }
    if instance is not None:
        doc["sequence"] = construction_sequence(instance, plan)
        if instance.graph is not None:
            edges = instance.graph.edges
            doc["edges"] = [[edges[e].u + 1, edges[e].v + 1] for e in plan.order]
            if instance.graph.scale != 1:
                doc["scale"] = instance.graph.scale
    if verbose:
        doc["exchanges"] = [list(p) for p in plan.exchanges]
        doc["bases"] = [sorted(b) for b in plan.bases()]
    return doc


def emit_plan(plan: BuildPlan, fmt: str = "json", instance: Instance | None = None,
              verbose: bool = False, extra: dict | None = None) -> str:
    """Render a plan as a JSON document or as TSV with one row per step."""
    if fmt == "json":
        doc = plan_document(plan, instance, verbose)
        if extra:
            doc.update(extra)
        return json.dumps(doc, indent=2) + "\n"
    if fmt != "tsv":
        raise InvalidParams(f"unknown output format {fmt!r}")
    edges = instance.graph.edges if instance is not None and instance.graph is not None else None
    rows = ["step\tadded\tu\tv\tbasis_weight"]
    for step, weight in enumerate(plan.step_weights):
        if step == 0:
            rows.append(f"0\t-\t-\t-\t{weight}")
            continue
        e = plan.order[step - 1]
        u, v = (edges[e].u + 1, edges[e].v + 1) if edges else ("-", "-")
        rows.append(f"{step}\t{e}\t{u}\t{v}\t{weight}")
    rows.append(f"# objective\t{plan.objective}")
    rows.append(f"# ultimate_weight\t{plan.ultimate_weight}")
    rows.append(f"# horizon\t{plan.horizon}")
    return "\n".join(rows) + "\n"
