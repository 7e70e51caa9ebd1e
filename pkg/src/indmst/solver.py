"""Construction-order solvers for incremental minimum-weight-basis design.

Given existing elements (which already span the matroid) and potential
elements that can be built one per period, find the build order minimising
the sum over periods of the minimum basis weight. Three solvers are provided:

* :func:`greedy_solve` repeatedly applies the best single exchange over all
  exchange pairs of the current basis.
* :func:`simplified_greedy_solve` restricts the search to pairs entering a
  fixed ultimate minimum basis.
* :func:`efficient_solve` builds the initial basis, the ultimate basis and the
  whole exchange list in one weight-ordered pass. This is the fast path.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import InfeasibleInstance, InternalInvariantBroken, OverflowRisk, PreconditionViolated
from .graphic import INT64_MAX, Graph, GraphicMatroid, UnionFind, forest_path, validate_instance
from .matroid import MatroidOracle, min_weight_basis, rank, weight_order


@dataclass(frozen=True, eq=False)
class Instance:
    """Weighted matroid with a set of existing elements.

    Build from a graph with :meth:`from_graph` or from any oracle with
    :meth:`from_oracle`. Graph instances unlock the union-find/DFS fast path.
    """

    oracle: MatroidOracle
    weights: tuple[int, ...]
    existing: frozenset[int]
    graph: Graph | None = None
    potential: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if len(self.weights) != self.oracle.ground_size:
            raise ValueError("one weight per ground-set element required")
        object.__setattr__(self, "weights", tuple(self.weights))
        object.__setattr__(self, "existing", frozenset(self.existing))
        object.__setattr__(self, "potential", tuple(
            e for e in range(self.size) if e not in self.existing))

    @classmethod
    def from_graph(cls, graph: Graph, validate: bool = True) -> Instance:
        inst = cls(GraphicMatroid(graph), graph.weights, graph.existing, graph)
        if validate:
            inst.validate()
        return inst

    @classmethod
    def from_oracle(cls, oracle: MatroidOracle, weights: Sequence[int],
                    existing: Iterable[int], validate: bool = True) -> Instance:
        inst = cls(oracle, tuple(weights), frozenset(existing))
        if validate:
            inst.validate()
        return inst

    @property
    def size(self) -> int:
        return self.oracle.ground_size

    @property
    def horizon(self) -> int:
        return len(self.potential)

    def weight(self, elements: Iterable[int]) -> int:
        w = self.weights
        return sum(w[e] for e in elements)

    def validate(self) -> None:
        if self.graph is not None:
            validate_instance(self.graph)
            return
        total = sum(abs(w) for w in self.weights)
        if total > INT64_MAX:
            raise OverflowRisk(f"sum of |weights| = {total} exceeds the signed 64-bit range")
        r_existing = rank(self.oracle, self.existing)
        r_full = rank(self.oracle, range(self.size))
        if r_existing != r_full:
            raise InfeasibleInstance(
                f"existing elements have rank {r_existing}, the matroid has rank {r_full}")


class ExchangePair(NamedTuple):
    """Swap ``removed`` out of a basis and ``added`` in."""

    removed: int
    added: int
    gain: int


class ExchangeEvent(NamedTuple):
    circuit: frozenset[int]
    pair: ExchangePair


@dataclass(frozen=True)
class TraceSnapshot:
    """State of the one-pass scan after handling the element at ``position``.

    ``initial`` grows greedily over existing elements only, ``ultimate``
    greedily over everything, and ``working`` receives every element added to
    either of them, shedding one potential element whenever an existing
    element closes a circuit in it. ``removed``/``added`` collect both sides
    of the exchange pairs recorded so far.
    """

    position: int
    element: int
    initial: frozenset[int]
    ultimate: frozenset[int]
    working: frozenset[int]
    removed: frozenset[int]
    added: frozenset[int]
    exchange: ExchangeEvent | None = None


@dataclass(frozen=True)
class BuildPlan:
    """Improving prefix of a construction order.

    ``step_weights[i]`` is the minimum basis weight after the first ``i``
    additions; after ``k = len(order)`` steps the ultimate weight is reached
    and the remaining ``horizon - k`` periods keep it.
    """

    order: tuple[int, ...]
    step_weights: tuple[int, ...]
    ultimate_weight: int
    horizon: int
    algorithm: str = ""
    initial_basis: frozenset[int] = frozenset()
    exchanges: tuple[ExchangePair, ...] = ()

    @property
    def k(self) -> int:
        return len(self.order)

    @property
    def objective(self) -> int:
        return objective_value(self)

    def bases(self) -> list[frozenset[int]]:
        """Replay the exchanges from the initial basis; one basis per step."""
        current = set(self.initial_basis)
        out = [frozenset(current)]
        for pair in self.exchanges:
            current.discard(pair.removed)
            current.add(pair.added)
            out.append(frozenset(current))
        return out


def objective_value(plan: BuildPlan) -> int:
    return sum(plan.step_weights) + (plan.horizon - plan.k) * plan.ultimate_weight


def construction_sequence(instance: Instance, plan: BuildPlan) -> list[int]:
    """Full order of all potential elements: the plan, then the rest by id."""
    chosen = set(plan.order)
    return list(plan.order) + [e for e in instance.potential if e not in chosen]


def _check_potential(instance: Instance, added: Iterable[int]) -> frozenset[int]:
    added = frozenset(added)
    bad = added & instance.existing
    if bad:
        raise PreconditionViolated(f"elements {sorted(bad)} are existing, not potential")
    return added


def f_eval(instance: Instance, added: Iterable[int]) -> int:
    """Minimum basis weight using the existing elements plus ``added``."""
    added = _check_potential(instance, added)
    basis = min_weight_basis(instance.oracle, instance.existing | added, instance.weights)
    return instance.weight(basis)


def _heaviest(elements: Iterable[int], weights: Sequence[int]) -> int:
    # max weight, smallest id among equals
    return min(elements, key=lambda e: (-weights[e], e))


def basis_update(instance: Instance, basis: Iterable[int], e: int) -> tuple[frozenset[int], int | None]:
    """Add potential element ``e`` to a minimum basis and drop the heaviest
    element of the circuit it closes.

    Returns the new basis and the dropped element (None if ``e`` raised the
    rank, which cannot happen when the existing elements span).
    """
    basis = frozenset(basis)
    if e in basis or e in instance.existing:
        raise PreconditionViolated(f"element {e} is already available")
    grown = basis | {e}
    if instance.oracle.is_independent(grown):
        return grown, None
    circuit = instance.oracle.circuit(basis, e)
    drop = _heaviest(circuit, instance.weights)
    return grown - {drop}, drop


def enumerate_exchange_pairs(instance: Instance, basis: Iterable[int],
                             restrict_to: Iterable[int] | None = None) -> list[ExchangePair]:
    """All exchange pairs for ``basis``, best gain first, then by ids.

    With ``restrict_to``, only pairs whose added element lies in it.
    """
    basis = frozenset(basis)
    pool = range(instance.size) if restrict_to is None else sorted(set(restrict_to))
    w = instance.weights
    pairs = []
    for added in pool:
        if added in basis:
            continue
        for removed in instance.oracle.circuit(basis, added):
            if removed != added:
                pairs.append(ExchangePair(removed, added, w[removed] - w[added]))
    pairs.sort(key=lambda p: (-p.gain, p.removed, p.added))
    return pairs


def _plan_from_pairs(instance: Instance, initial: frozenset[int], pairs: Sequence[ExchangePair],
                     ultimate_weight: int, algorithm: str) -> BuildPlan:
    weights = [instance.weight(initial)]
    for p in pairs:
        weights.append(weights[-1] - p.gain)
    if weights[-1] != ultimate_weight:
        raise InternalInvariantBroken(
            f"{algorithm}: final basis weight {weights[-1]} != ultimate weight {ultimate_weight}")
    return BuildPlan(
        order=tuple(p.added for p in pairs),
        step_weights=tuple(weights),
        ultimate_weight=ultimate_weight,
        horizon=instance.horizon,
        algorithm=algorithm,
        initial_basis=initial,
        exchanges=tuple(pairs),
    )


def greedy_solve(instance: Instance) -> BuildPlan:
    """Apply a best exchange pair (over all pairs) until the basis is optimal."""
    oracle, w = instance.oracle, instance.weights
    initial = min_weight_basis(oracle, instance.existing, w)
    target = instance.weight(min_weight_basis(oracle, range(instance.size), w))
    basis = set(initial)
    current = instance.weight(basis)
    pairs = []
    while current > target:
        best = enumerate_exchange_pairs(instance, basis)[0]
        if best.gain <= 0:
            raise InternalInvariantBroken("no improving exchange although the basis is not optimal")
        basis.remove(best.removed)
        basis.add(best.added)
        current -= best.gain
        pairs.append(best)
    return _plan_from_pairs(instance, initial, pairs, target, "greedy")


def simplified_greedy_solve(instance: Instance) -> BuildPlan:
    """Best exchange pairs restricted to entering a fixed ultimate basis."""
    oracle, w = instance.oracle, instance.weights
    initial = min_weight_basis(oracle, instance.existing, w)
    ultimate = min_weight_basis(oracle, range(instance.size), w)
    basis = set(initial)
    pairs = []
    for _ in range(len(ultimate - initial)):
        candidates = enumerate_exchange_pairs(instance, basis, restrict_to=ultimate)
        # zero-gain swaps only trade between equal-weight optima
        if not candidates or candidates[0].gain <= 0:
            break
        best = candidates[0]
        basis.remove(best.removed)
        basis.add(best.added)
        pairs.append(best)
    return _plan_from_pairs(instance, initial, pairs, instance.weight(ultimate), "simplified")


@dataclass
class ScanResult:
    """Output of the one-pass scan.

    ``exchanges`` is the complete sorted exchange list, including zero-gain
    pairs that arise between equal weights; ``plan`` keeps only the improving
    prefix.
    """

    initial: frozenset[int]
    ultimate: frozenset[int]
    exchanges: list[ExchangePair]
    plan: BuildPlan
    trace: list[TraceSnapshot] | None = None


def efficient_scan(instance: Instance, want_trace: bool = False,
                   fast: bool | None = None) -> ScanResult:
    """One weight-ordered pass producing both bases and all exchange pairs.

    ``fast`` selects the union-find/DFS implementation for graph instances
    (default: whenever a graph is present); otherwise only oracle queries are
    used.
    """
    if fast is None:
        fast = instance.graph is not None
    if fast and instance.graph is None:
        raise PreconditionViolated("fast scan needs a graph instance")
    order = weight_order(range(instance.size), instance.weights)
    scan = _scan_graph if fast else _scan_oracle
    initial, ultimate, inserted, trace = scan(instance, order, want_trace)

    # best gain first; among equal gains the later-inserted pair first
    ranked = sorted(range(len(inserted)), key=lambda j: (-inserted[j].gain, -j))
    exchanges = [inserted[j] for j in ranked]
    improving = [p for p in exchanges if p.gain > 0]
    plan = _plan_from_pairs(instance, frozenset(initial), improving,
                            instance.weight(ultimate), "efficient")
    return ScanResult(frozenset(initial), frozenset(ultimate), exchanges, plan, trace)


def efficient_solve(instance: Instance, want_trace: bool = False) -> tuple[BuildPlan, list[TraceSnapshot] | None]:
    result = efficient_scan(instance, want_trace)
    return result.plan, result.trace


class _Tracer:
    def __init__(self, enabled: bool):
        self.snapshots: list[TraceSnapshot] | None = [] if enabled else None
        self.removed: set[int] = set()
        self.added: set[int] = set()

    def record(self, position, element, x, y, z, event):
        if event is not None:
            self.removed.add(event.pair.removed)
            self.added.add(event.pair.added)
        if self.snapshots is not None:
            self.snapshots.append(TraceSnapshot(
                position, element, frozenset(x), frozenset(y), frozenset(z),
                frozenset(self.removed), frozenset(self.added), event))


def _scan_oracle(instance: Instance, order: list[int], want_trace: bool):
    oracle, w, existing = instance.oracle, instance.weights, instance.existing
    x: list[int] = []
    y: list[int] = []
    z: set[int] = set()
    inserted: list[ExchangePair] = []
    tracer = _Tracer(want_trace)
    for position, e in enumerate(order, start=1):
        event = None
        if e in existing and oracle.is_independent([*x, e]):
            x.append(e)
            if oracle.is_independent(z | {e}):
                z.add(e)
            else:
                circuit = oracle.circuit(z, e)
                event = _exchange(circuit, e, existing, w)
                z.add(e)
                z.discard(event.pair.added)
                inserted.append(event.pair)
        if oracle.is_independent([*y, e]):
            y.append(e)
            z.add(e)
        tracer.record(position, e, x, y, z, event)
    return x, y, inserted, tracer.snapshots


def _exchange(circuit: frozenset[int], e: int, existing: frozenset[int],
              w: Sequence[int]) -> ExchangeEvent:
    candidates = [f for f in circuit if f not in existing]
    if not candidates:
        raise InternalInvariantBroken(f"circuit closed by element {e} has no potential element")
    out = _heaviest(candidates, w)
    return ExchangeEvent(circuit, ExchangePair(e, out, w[e] - w[out]))


def _scan_graph(instance: Instance, order: list[int], want_trace: bool):
    graph = instance.graph
    edges, w, existing = graph.edges, instance.weights, instance.existing
    uf_x, uf_y = UnionFind(graph.n), UnionFind(graph.n)
    # the working forest as adjacency maps: vertex -> {edge id: other endpoint}
    adjacency: list[dict[int, int]] = [{} for _ in range(graph.n)]
    x: list[int] = []
    y: list[int] = []
    inserted: list[ExchangePair] = []
    tracer = _Tracer(want_trace)
    z: set[int] = set()
    for position, e in enumerate(order, start=1):
        u, v, _, is_existing = edges[e]
        into_x = is_existing and uf_x.union(u, v)
        into_y = uf_y.union(u, v)
        event = None
        if into_x and not into_y:
            # e joins vertices already linked in the working forest
            path = forest_path(adjacency, u, v)
            if path is None:
                raise InternalInvariantBroken(f"edge {e} closes no cycle in the working forest")
            event = _exchange(frozenset(path) | {e}, e, existing, w)
            out = event.pair.added
            a, b = edges[out].u, edges[out].v
            del adjacency[a][out]
            del adjacency[b][out]
            inserted.append(event.pair)
            if want_trace:
                z.discard(out)
        if into_x:
            x.append(e)
        if into_y:
            y.append(e)
        if into_x or into_y:
            adjacency[u][e] = v
            adjacency[v][e] = u
            if want_trace:
                z.add(e)
        tracer.record(position, e, x, y, z, event)
    return x, y, inserted, tracer.snapshots
