"""Matroid independence oracles and the primitive operations built on them.

Elements are dense integer ids ``0 .. ground_size - 1``. Sets of elements are
plain Python sets/frozensets; wherever iteration order matters it is ascending
id, so every result here is deterministic.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Iterable, Sequence

from .errors import InternalInvariantBroken, PreconditionViolated


class MatroidOracle(ABC):
    """Independence oracle for a matroid on ``range(ground_size)``.

    Subclasses implement :meth:`is_independent`. :meth:`greedy` and
    :meth:`circuit` have generic oracle-backed defaults which subclasses may
    replace with something faster.
    """

    ground_size: int

    @abstractmethod
    def is_independent(self, elements: Iterable[int]) -> bool:
        ...

    def greedy(self, order: Iterable[int]) -> list[int]:
        """Scan ``order`` and keep each element that preserves independence."""
        kept: list[int] = []
        for e in order:
            kept.append(e)
            if not self.is_independent(kept):
                kept.pop()
        return kept

    def circuit(self, independent: Iterable[int], e: int) -> frozenset[int]:
        """Unique circuit of ``independent + e``; callers guarantee it exists."""
        return _circuit_by_removal(self, frozenset(independent), e)

    @property
    def ground(self) -> range:
        return range(self.ground_size)


def _circuit_by_removal(oracle: MatroidOracle, base: frozenset[int], e: int) -> frozenset[int]:
    # f lies on the circuit iff dropping it from base + e restores independence
    full = base | {e}
    circuit = {e}
    for f in sorted(base):
        if oracle.is_independent(full - {f}):
            circuit.add(f)
    return frozenset(circuit)


class UniformMatroid(MatroidOracle):
    """U(r, n): every set of at most ``rank`` elements is independent."""

    def __init__(self, rank: int, ground_size: int):
        if not 0 <= rank <= ground_size:
            raise ValueError(f"need 0 <= rank <= ground_size, got U({rank},{ground_size})")
        self.rank = rank
        self.ground_size = ground_size

    def is_independent(self, elements: Iterable[int]) -> bool:
        return len(set(elements)) <= self.rank

    def __repr__(self) -> str:
        return f"UniformMatroid(rank={self.rank}, ground_size={self.ground_size})"


class PartitionMatroid(MatroidOracle):
    """Independent iff each block holds at most its capacity of chosen elements.

    ``blocks[e]`` is the block index of element ``e``.
    """

    def __init__(self, blocks: Sequence[int], capacities: Sequence[int]):
        if any(not 0 <= b < len(capacities) for b in blocks):
            raise ValueError("block index out of range")
        if any(c < 0 for c in capacities):
            raise ValueError("capacities must be non-negative")
        self.blocks = tuple(blocks)
        self.capacities = tuple(capacities)
        self.ground_size = len(self.blocks)

    def is_independent(self, elements: Iterable[int]) -> bool:
        used = [0] * len(self.capacities)
        for e in set(elements):
            b = self.blocks[e]
            used[b] += 1
            if used[b] > self.capacities[b]:
                return False
        return True

    def __repr__(self) -> str:
        return f"PartitionMatroid(blocks={self.blocks}, capacities={self.capacities})"


def rank(oracle: MatroidOracle, elements: Iterable[int]) -> int:
    return len(oracle.greedy(sorted(set(elements))))


def closure(oracle: MatroidOracle, elements: Iterable[int]) -> frozenset[int]:
    """All elements whose addition does not raise the rank of ``elements``."""
    elements = frozenset(elements)
    basis = oracle.greedy(sorted(elements))
    spanned = set(elements)
    for e in oracle.ground:
        if e not in spanned and not oracle.is_independent([*basis, e]):
            spanned.add(e)
    return frozenset(spanned)


def find_circuit(oracle: MatroidOracle, independent: Iterable[int], e: int) -> frozenset[int]:
    """Circuit of ``independent + e`` found purely by oracle removal tests.

    Raises PreconditionViolated unless ``independent`` is independent and
    ``independent + e`` is not.
    """
    base = frozenset(independent)
    if not oracle.is_independent(base):
        raise PreconditionViolated("base set is dependent")
    if e in base or oracle.is_independent(base | {e}):
        raise PreconditionViolated(f"adding element {e} does not create a circuit")
    return _circuit_by_removal(oracle, base, e)


def weight_order(elements: Iterable[int], weights: Sequence[int]) -> list[int]:
    """Nondecreasing weight, ties by ascending id."""
    return sorted(elements, key=lambda e: (weights[e], e))


def min_weight_basis(oracle: MatroidOracle, restrict: Iterable[int],
                     weights: Sequence[int]) -> frozenset[int]:
    return frozenset(oracle.greedy(weight_order(set(restrict), weights)))


def strong_exchange_witness(oracle: MatroidOracle, x: Iterable[int], y: Iterable[int],
                            e: int) -> int:
    """First ``f`` in ``y`` (by id) with both ``x - e + f`` and ``y - f + e`` bases."""
    x, y = frozenset(x), frozenset(y)
    if e not in x:
        raise PreconditionViolated(f"element {e} is not in the first basis")
    size = len(x)
    if len(y) != size:
        raise PreconditionViolated("bases of different sizes")
    for f in sorted(y):
        x_swap = (x - {e}) | {f}
        y_swap = (y - {f}) | {e}
        if (len(x_swap) == size and len(y_swap) == size
                and oracle.is_independent(x_swap) and oracle.is_independent(y_swap)):
            return f
    raise InternalInvariantBroken(
        f"no strong-exchange partner for element {e}; oracle is not a matroid")
