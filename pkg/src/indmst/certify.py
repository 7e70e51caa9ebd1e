"""Exhaustive certification: exact optima by enumeration and invariant audits.

Everything here evaluates the objective from scratch with minimum-basis
computations over explicit subsets, independently of the solvers' exchange
logic, so agreement between the two is meaningful.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, permutations

from .errors import CapExceeded
from .matroid import closure, min_weight_basis
from .solver import (BuildPlan, ExchangePair, Instance, ScanResult, TraceSnapshot, basis_update,
                     enumerate_exchange_pairs)

DEFAULT_CAP = 12
EXTENSION_CAP = 6


@dataclass
class Check:
    name: str
    passed: bool = True
    position: int | None = None
    detail: str = ""

    def fail(self, position: int | None, detail: str) -> None:
        # keep the first violation only
        if self.passed:
            self.passed = False
            self.position = position
            self.detail = detail


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str) -> Check:
        check = Check(name)
        self.checks.append(check)
        return check

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "checks": [
                {"name": c.name, "passed": c.passed, "position": c.position, "detail": c.detail}
                for c in self.checks
            ],
        }

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            where = f" at position {c.position}" if c.position is not None else ""
            detail = f": {c.detail}" if c.detail else ""
            out.append(f"{status} {self.title} / {c.name}{where}{detail}")
        return out


def _require_cap(instance: Instance, cap: int) -> None:
    if instance.horizon > cap:
        raise CapExceeded(instance.horizon, cap)


class SubsetWeights:
    """Memoised minimum basis weight over existing + a subset of potentials.

    Subsets are bitmasks over ``instance.potential`` (bit ``i`` is the
    ``i``-th potential element in ascending id order).
    """

    def __init__(self, instance: Instance):
        self.instance = instance
        self.potential = instance.potential
        self._cache: dict[int, int] = {}

    def elements(self, mask: int) -> list[int]:
        return [e for i, e in enumerate(self.potential) if mask >> i & 1]

    def mask(self, elements: Iterable[int]) -> int:
        index = {e: i for i, e in enumerate(self.potential)}
        return sum(1 << index[e] for e in set(elements))

    def __call__(self, mask: int) -> int:
        value = self._cache.get(mask)
        if value is None:
            inst = self.instance
            basis = min_weight_basis(inst.oracle, inst.existing.union(self.elements(mask)),
                                     inst.weights)
            value = self._cache[mask] = inst.weight(basis)
        return value

    @cached_property
    def full(self) -> int:
        return (1 << len(self.potential)) - 1


def _best_completions(f: SubsetWeights) -> list[int]:
    """best[mask] = cheapest total of f over every chain from mask to full."""
    full = f.full
    best = [0] * (full + 1)
    t = len(f.potential)
    for mask in range(full, -1, -1):
        tail = min((best[mask | 1 << i] for i in range(t) if not mask >> i & 1), default=0)
        best[mask] = f(mask) + tail
    return best


def brute_force_optimum(instance: Instance, cap: int = DEFAULT_CAP) -> int:
    """Exact optimum of the summed per-period basis weight, by subset DP."""
    _require_cap(instance, cap)
    return _best_completions(SubsetWeights(instance))[0]


def optimal_chain(instance: Instance, cap: int = DEFAULT_CAP) -> list[int]:
    """An optimal full construction order; ties go to the smaller element id."""
    _require_cap(instance, cap)
    f = SubsetWeights(instance)
    best = _best_completions(f)
    mask, order = 0, []
    for _ in range(len(f.potential)):
        free = [i for i in range(len(f.potential)) if not mask >> i & 1]
        i = min(free, key=lambda i: (best[mask | 1 << i], i))
        order.append(f.potential[i])
        mask |= 1 << i
    return order


def permutation_optimum(instance: Instance, cap: int = 5) -> int:
    """Minimum over all T! construction orders; a check on the subset DP."""
    _require_cap(instance, cap)
    f = SubsetWeights(instance)
    best = None
    for perm in permutations(range(len(f.potential))):
        mask, total = 0, f(0)
        for i in perm:
            mask |= 1 << i
            total += f(mask)
        best = total if best is None else min(best, total)
    return best


def plan_for_order(instance: Instance, order: Sequence[int]) -> BuildPlan:
    """Plan that follows ``order`` through every period, improving or not."""
    f = SubsetWeights(instance)
    mask, weights = 0, [f(0)]
    for e in order:
        mask |= f.mask([e])
        weights.append(f(mask))
    return BuildPlan(tuple(order), tuple(weights), f(f.full), instance.horizon, "fixed-order")


def brute_plan(instance: Instance, cap: int = DEFAULT_CAP) -> BuildPlan:
    """Plan from the DP's optimal chain, cut where the ultimate weight is reached."""
    chain = optimal_chain(instance, cap)
    inst = instance
    basis = min_weight_basis(inst.oracle, inst.existing, inst.weights)
    initial = basis
    ultimate = inst.weight(min_weight_basis(inst.oracle, range(inst.size), inst.weights))
    weights = [inst.weight(basis)]
    pairs = []
    for e in chain:
        if weights[-1] == ultimate:
            break
        basis, dropped = basis_update(inst, basis, e)
        weights.append(inst.weight(basis))
        pairs.append(ExchangePair(dropped, e, inst.weights[dropped] - inst.weights[e]))
    return BuildPlan(tuple(p.added for p in pairs), tuple(weights), ultimate, inst.horizon,
                     "brute", initial, tuple(pairs))


@dataclass(frozen=True)
class FSeries:
    """Best achievable basis weight after exactly t additions, t = 0..T."""

    values: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.values)

    @property
    def stable_index(self) -> int:
        """First t from which the series stays constant."""
        v = self.values
        t = len(v) - 1
        while t > 0 and v[t - 1] == v[t]:
            t -= 1
        return t


def _level_minima(f: SubsetWeights) -> list[int]:
    t = len(f.potential)
    minima = [None] * (t + 1)
    for mask in range(f.full + 1):
        size = bin(mask).count("1")
        value = f(mask)
        if minima[size] is None or value < minima[size]:
            minima[size] = value
    return minima


def compute_F_series(instance: Instance, cap: int = DEFAULT_CAP) -> FSeries:
    _require_cap(instance, cap)
    return FSeries(tuple(_level_minima(SubsetWeights(instance))))


def check_lower_bound(instance: Instance, plan: BuildPlan, cap: int = DEFAULT_CAP) -> bool:
    """True iff the plan's objective meets the per-period lower bound exactly."""
    return plan.objective == compute_F_series(instance, cap).total


def check_extension_property(instance: Instance, cap: int = EXTENSION_CAP) -> Report:
    """Every optimal k-set extends by one element of any optimal (k+1)-set
    to an optimal (k+1)-set, for all k below the stabilisation index."""
    _require_cap(instance, cap)
    f = SubsetWeights(instance)
    t_all = len(f.potential)
    minima = _level_minima(f)
    stable = FSeries(tuple(minima)).stable_index
    by_level: list[list[int]] = [[] for _ in range(t_all + 1)]
    for mask in range(f.full + 1):
        size = bin(mask).count("1")
        if f(mask) == minima[size]:
            by_level[size].append(mask)
    report = Report("extension")
    for k in range(stable):
        check = report.add(f"level {k}")
        pairs = 0
        for a in by_level[k]:
            for b in by_level[k + 1]:
                pairs += 1
                extra = b & ~a
                bits = [i for i in range(t_all) if extra >> i & 1]
                if not any(f(a | 1 << i) == minima[k + 1] for i in bits):
                    check.fail(k, f"A={f.elements(a)} B={f.elements(b)} have no extending element")
        if check.passed:
            check.detail = f"{pairs} optimal pairs"
    return report


def audit_trace(instance: Instance, snapshots: Sequence[TraceSnapshot]) -> Report:
    """Check the one-pass scan's set relations at every position."""
    oracle, existing = instance.oracle, instance.existing
    report = Report("trace")
    nested = report.add("initial <= working <= initial | ultimate")
    span = report.add("span(ultimate) == span(working)")
    extra = report.add("ultimate - initial is potential")
    indep = report.add("all three sets independent")
    removed = report.add("initial - ultimate == removed so far")
    added = report.add("ultimate - working == added so far")
    circuit = report.add("exchange circuit meets added set in its own element")
    final = report.add("final sets match the exchange list")

    for s in snapshots:
        p = s.position
        if not (s.initial <= s.working <= s.initial | s.ultimate):
            nested.fail(p, "containment broken")
        if closure(oracle, s.ultimate) != closure(oracle, s.working):
            span.fail(p, "closures differ")
        if (s.ultimate - s.initial) & existing:
            extra.fail(p, f"existing elements {sorted((s.ultimate - s.initial) & existing)}")
        for name, part in (("initial", s.initial), ("ultimate", s.ultimate), ("working", s.working)):
            if not oracle.is_independent(part):
                indep.fail(p, f"{name} set dependent")
        if s.initial - s.ultimate != s.removed:
            removed.fail(p, f"{sorted(s.initial - s.ultimate)} != {sorted(s.removed)}")
        if s.ultimate - s.working != s.added:
            added.fail(p, f"{sorted(s.ultimate - s.working)} != {sorted(s.added)}")
        if s.exchange is not None:
            hit = s.exchange.circuit & s.added
            if hit != {s.exchange.pair.added}:
                circuit.fail(p, f"circuit meets added set in {sorted(hit)}")

    if snapshots:
        last = snapshots[-1]
        events = [s.exchange.pair for s in snapshots if s.exchange is not None]
        if last.initial != last.working:
            final.fail(last.position, "initial != working at the end")
        elif last.initial - last.ultimate != {p.removed for p in events}:
            final.fail(last.position, "initial - ultimate is not the removed side")
        elif last.ultimate - last.initial != {p.added for p in events}:
            final.fail(last.position, "ultimate - initial is not the added side")
    return report


def check_exchange_pairs(instance: Instance, scan: ScanResult) -> Report:
    """Each listed pair is a best exchange entering the ultimate basis from the
    running basis, and no unrestricted exchange does better."""
    report = Report("exchange pairs")
    valid = report.add("pair is an exchange for (running basis, ultimate)")
    best_restricted = report.add("pair has the best gain into the ultimate basis")
    restricted_is_global = report.add("best gain into the ultimate basis is the global best")
    basis = set(scan.initial)
    for i, pair in enumerate(scan.exchanges, start=1):
        into_ultimate = enumerate_exchange_pairs(instance, basis, restrict_to=scan.ultimate)
        everything = enumerate_exchange_pairs(instance, basis)
        if pair not in into_ultimate:
            valid.fail(i, f"{tuple(pair)} not an exchange pair")
        top = into_ultimate[0].gain if into_ultimate else None
        if top != pair.gain:
            best_restricted.fail(i, f"gain {pair.gain}, best {top}")
        if everything and top != everything[0].gain:
            restricted_is_global.fail(i, f"restricted best {top}, global best {everything[0].gain}")
        basis.discard(pair.removed)
        basis.add(pair.added)
    return report


def enumerate_bases(instance: Instance) -> list[frozenset[int]]:
    """All bases, by testing every subset of the rank's size (small ground sets only)."""
    oracle = instance.oracle
    r = len(min_weight_basis(oracle, range(instance.size), instance.weights))
    return [frozenset(c) for c in combinations(range(instance.size), r)
            if oracle.is_independent(c)]
