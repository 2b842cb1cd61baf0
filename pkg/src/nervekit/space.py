"""Finite semantic spaces, world sets and probability measures.

A :class:`WorldSet` is a bitset over the worlds of one :class:`SemanticSpace`,
stored as a Python ``int`` (bit ``i`` set iff world ``i`` is a member).
"""
from __future__ import annotations

import math
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    DuplicateWorld,
    EmptySpace,
    InvalidMeasure,
    SpaceMismatch,
    UnknownWorld,
)

NORMALIZATION_TOLERANCE = 1e-9


class SemanticSpace:
    """An ordered, non-empty collection of distinct world labels."""

    __slots__ = ("worlds", "_index", "_full")

    def __init__(self, labels: Iterable[str]):
        worlds = tuple(labels)
        if not worlds:
            raise EmptySpace("a semantic space needs at least one world")
        index = {}
        for i, label in enumerate(worlds):
            if not isinstance(label, str):
                raise TypeError(f"world labels must be strings, got {label!r}")
            if label in index:
                raise DuplicateWorld(label)
            index[label] = i
        self.worlds = worlds
        self._index = index
        self._full = (1 << len(worlds)) - 1

    @property
    def size(self) -> int:
        return len(self.worlds)

    def __len__(self):
        return len(self.worlds)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, SemanticSpace):
            return NotImplemented
        return self.worlds == other.worlds

    def __hash__(self):
        return hash(self.worlds)

    def __repr__(self):
        return f"SemanticSpace({list(self.worlds)!r})"

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownWorld(label) from None

    def subset(self, labels: Iterable[str]) -> WorldSet:
        bits = 0
        for label in labels:
            bits |= 1 << self.index(label)
        return WorldSet(self, bits)

    def from_indices(self, indices: Iterable[int]) -> WorldSet:
        bits = 0
        for i in indices:
            if not 0 <= i < len(self.worlds):
                raise IndexError(f"world index {i} out of range")
            bits |= 1 << i
        return WorldSet(self, bits)

    def empty(self) -> WorldSet:
        return WorldSet(self, 0)

    def full(self) -> WorldSet:
        return WorldSet(self, self._full)


def make_space(labels: Sequence[str]) -> SemanticSpace:
    return SemanticSpace(labels)


class WorldSet:
    """Immutable set of worlds of a fixed space."""

    __slots__ = ("space", "bits")

    def __init__(self, space: SemanticSpace, bits: int = 0):
        if bits < 0 or bits >> space.size:
            raise ValueError("bits outside the space")
        self.space = space
        self.bits = bits

    def _check(self, other: WorldSet) -> None:
        if not isinstance(other, WorldSet):
            raise TypeError(f"expected WorldSet, got {type(other).__name__}")
        if other.space is not self.space and other.space != self.space:
            raise SpaceMismatch(
                f"world sets over different spaces ({self.space.size} vs {other.space.size} worlds)"
            )

    def __and__(self, other: WorldSet) -> WorldSet:
        self._check(other)
        return WorldSet(self.space, self.bits & other.bits)

    def __or__(self, other: WorldSet) -> WorldSet:
        self._check(other)
        return WorldSet(self.space, self.bits | other.bits)

    def __sub__(self, other: WorldSet) -> WorldSet:
        self._check(other)
        return WorldSet(self.space, self.bits & ~other.bits)

    def __invert__(self) -> WorldSet:
        return WorldSet(self.space, self.space._full ^ self.bits)

    def __le__(self, other: WorldSet) -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def __ge__(self, other: WorldSet) -> bool:
        return other <= self

    def __eq__(self, other):
        if not isinstance(other, WorldSet):
            return NotImplemented
        return self.bits == other.bits and self.space == other.space

    def __hash__(self):
        return hash((self.space, self.bits))

    def __bool__(self):
        return self.bits != 0

    def __len__(self):
        return self.bits.bit_count()

    def __contains__(self, index: int) -> bool:
        return index >= 0 and (self.bits >> index) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def is_empty(self) -> bool:
        return self.bits == 0

    def is_full(self) -> bool:
        return self.bits == self.space._full

    def labels(self) -> list[str]:
        worlds = self.space.worlds
        return [worlds[i] for i in self]

    def __repr__(self):
        return "{" + ", ".join(self.labels()) + "}"


def _worldset(space: SemanticSpace, bits: int) -> WorldSet:
    # unchecked constructor for hot loops whose bits are known to be in range
    ws = object.__new__(WorldSet)
    ws.space = space
    ws.bits = bits
    return ws


def intersect(a: WorldSet, b: WorldSet) -> WorldSet:
    return a & b


def union(a: WorldSet, b: WorldSet) -> WorldSet:
    return a | b


def complement(a: WorldSet) -> WorldSet:
    return ~a


def is_empty(a: WorldSet) -> bool:
    return a.is_empty()


def is_subset(a: WorldSet, b: WorldSet) -> bool:
    return a <= b


class Measure:
    """Probability weights, one per world, summing to one."""

    __slots__ = ("space", "weights")

    def __init__(self, space: SemanticSpace, weights: Sequence[float]):
        weights = tuple(float(w) for w in weights)
        if len(weights) != space.size:
            raise InvalidMeasure(f"expected {space.size} weights, got {len(weights)}")
        for label, w in zip(space.worlds, weights):
            if not (0.0 <= w <= 1.0):
                raise InvalidMeasure(f"weight of world {label!r} is {w}, outside [0, 1]")
        total = math.fsum(weights)
        if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
            raise InvalidMeasure(f"measure not normalized (weights sum to {total!r})")
        self.space = space
        self.weights = weights

    @classmethod
    def from_mapping(cls, space: SemanticSpace, weights: Mapping[str, float]) -> Measure:
        """Build a measure from ``{label: weight}``; absent worlds weigh zero."""
        values = [0.0] * space.size
        for label, w in weights.items():
            values[space.index(label)] = w
        return cls(space, values)

    @classmethod
    def uniform(cls, space: SemanticSpace) -> Measure:
        return cls(space, [1.0 / space.size] * space.size)

    def __eq__(self, other):
        if not isinstance(other, Measure):
            return NotImplemented
        return self.space == other.space and self.weights == other.weights

    def __hash__(self):
        return hash((self.space, self.weights))

    def __repr__(self):
        pairs = ", ".join(f"{k}: {w}" for k, w in zip(self.space.worlds, self.weights))
        return f"Measure({{{pairs}}})"

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.space.worlds, self.weights))


def measure_of(s: WorldSet, m: Measure) -> float:
    """Total weight of the worlds in ``s``."""
    if s.space is not m.space and s.space != m.space:
        raise SpaceMismatch("world set and measure belong to different spaces")
    w = m.weights
    return math.fsum(w[i] for i in s)
