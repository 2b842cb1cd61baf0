"""Dialogue nerves: the simplicial complex of jointly consistent utterances.

A simplex is a strictly increasing tuple of 1-based utterance indices. A
:class:`Nerve` stores every simplex of the complex (including the empty one)
together with the common intersection of its sets, so that extending it by a
new set costs one intersection test per stored simplex.
"""
from __future__ import annotations

import os
from typing import Iterable, Iterator, Sequence

from .errors import GuardExceeded, IndexOutOfRange, SpaceMismatch
from .space import SemanticSpace, WorldSet, _worldset

Simplex = tuple[int, ...]

DEFAULT_BATCH_GUARD = 20
DEFAULT_SIMPLEX_CAP = 2**22
CAP_ENV = "NERVEKIT_SIMPLEX_CAP"


def default_simplex_cap() -> int:
    """Simplex-count cap, taken from ``$NERVEKIT_SIMPLEX_CAP`` when set."""
    raw = os.environ.get(CAP_ENV)
    if not raw:
        return DEFAULT_SIMPLEX_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError(f"{CAP_ENV} must be positive, got {cap}")
    return cap


def make_simplex(indices: Iterable[int]) -> Simplex:
    out = sorted(set(indices))
    for i in out:
        if not isinstance(i, int) or isinstance(i, bool):
            raise TypeError(f"simplex indices must be integers, got {i!r}")
    if out and out[0] < 1:
        raise IndexOutOfRange(f"utterance index {out[0]} is below 1")
    return tuple(out)


def _same_space(space: SemanticSpace, ws: WorldSet) -> None:
    if not isinstance(ws, WorldSet):
        raise TypeError(f"expected WorldSet, got {type(ws).__name__}")
    if ws.space is not space and ws.space != space:
        raise SpaceMismatch("all sets of a nerve must share one semantic space")


class Nerve:
    """Immutable dialogue nerve over ``n`` world sets.

    ``update_tests`` records how many intersection tests the incremental
    update that produced this nerve performed (zero for batch-built nerves).
    """

    __slots__ = ("space", "sets", "_cells", "update_tests")

    def __init__(self, space: SemanticSpace, sets: tuple[WorldSet, ...], cells: dict, update_tests: int = 0):
        self.space = space
        self.sets = sets
        self._cells = cells
        self.update_tests = update_tests

    @classmethod
    def empty(cls, space: SemanticSpace) -> Nerve:
        return cls(space, (), {(): space.full()})

    @property
    def n(self) -> int:
        return len(self.sets)

    def __len__(self):
        return len(self._cells)

    def __contains__(self, simplex) -> bool:
        return tuple(simplex) in self._cells

    def __iter__(self) -> Iterator[Simplex]:
        return iter(self.simplices())

    def __eq__(self, other):
        if not isinstance(other, Nerve):
            return NotImplemented
        return self.space == other.space and self.sets == other.sets and self._cells == other._cells

    def __repr__(self):
        shown = ", ".join(_fmt(s) for s in self.simplices()[:8])
        more = ", ..." if len(self) > 8 else ""
        return f"Nerve(n={self.n}, [{shown}{more}])"

    def simplices(self) -> list[Simplex]:
        return sorted(self._cells, key=_order)

    def intersection(self, simplex: Iterable[int]) -> WorldSet:
        """Cached common intersection of a stored simplex."""
        return self._cells[tuple(simplex)]

    def items(self):
        return self._cells.items()

    def insert(self, new_set: WorldSet, cap: int | None = None) -> Nerve:
        return nerve_insert(self, new_set, cap=cap)

    @property
    def negative(self) -> NegativeNerve:
        return NegativeNerve(self)


def _order(simplex: Simplex):
    return (len(simplex), simplex)


def _fmt(simplex: Simplex) -> str:
    return "{" + ",".join(map(str, simplex)) + "}"


def nerve_batch(
    sets: Sequence[WorldSet],
    *,
    space: SemanticSpace | None = None,
    guard: int = DEFAULT_BATCH_GUARD,
) -> Nerve:
    """Nerve of ``sets`` by enumerating every subset of ``{1..n}``.

    Each subset's intersection is obtained from the subset without its lowest
    index, so all ``2**n`` subsets are visited in ``O(2**n)`` set operations.
    """
    sets = tuple(sets)
    if space is None:
        if not sets:
            raise ValueError("space is required when there are no sets")
        space = sets[0].space
    for s in sets:
        _same_space(space, s)
    n = len(sets)
    if n > guard:
        raise GuardExceeded("utterances for batch nerve", n, guard)

    bits = [s.bits for s in sets]
    inter = [0] * (1 << n)
    inter[0] = space.full().bits
    # index tuple per mask, filled only for non-empty intersections (whose
    # sub-masks are then non-empty too)
    names: list = [None] * (1 << n)
    names[0] = ()
    cells = {(): space.full()}
    for mask in range(1, 1 << n):
        low = mask & -mask
        rest = mask ^ low
        i = low.bit_length() - 1
        common = inter[rest] & bits[i]
        inter[mask] = common
        if common:
            simplex = (i + 1,) + names[rest]
            names[mask] = simplex
            cells[simplex] = _worldset(space, common)
    return Nerve(space, sets, cells)


def nerve_insert(nerve: Nerve, new_set: WorldSet, *, cap: int | None = None) -> Nerve:
    """Extend ``nerve`` by one more set, returning the nerve of ``sets + [new_set]``.

    Every stored simplex ``s`` is tested once: ``s + (n+1,)`` joins the nerve
    iff the cached intersection of ``s`` meets ``new_set``. The empty simplex
    yields the singleton ``(n+1,)`` exactly when ``new_set`` is non-empty.
    """
    space = nerve.space
    _same_space(space, new_set)
    if cap is None:
        cap = default_simplex_cap()
    new_index = nerve.n + 1
    new_bits = new_set.bits
    cells = nerve._cells
    extension = {}
    tests = 0
    for simplex, common in cells.items():
        tests += 1
        meet = common.bits & new_bits
        if meet:
            extension[simplex + (new_index,)] = _worldset(space, meet)
    total = len(cells) + len(extension)
    if total > cap:
        raise GuardExceeded("simplex count", total, cap)
    merged = dict(cells)
    merged.update(extension)
    return Nerve(space, nerve.sets + (new_set,), merged, update_tests=tests)


def check_indices(nerve: Nerve, indices: Iterable[int]) -> Simplex:
    """Canonical simplex for ``indices``, which must lie in ``1..nerve.n``."""
    simplex = make_simplex(indices)
    if simplex and simplex[-1] > nerve.n:
        raise IndexOutOfRange(f"utterance index {simplex[-1]} exceeds {nerve.n}")
    return simplex


def has_simplex(nerve: Nerve, indices: Iterable[int]) -> bool:
    return check_indices(nerve, indices) in nerve._cells


def negative_members(nerve: Nerve, indices: Iterable[int]) -> bool:
    """True iff the sets indexed by ``indices`` have empty common intersection."""
    return check_indices(nerve, indices) not in nerve._cells


def minimal_inconsistent_sets(nerve: Nerve) -> list[Simplex]:
    """Index sets with empty intersection all of whose proper subsets are consistent.

    A minimal inconsistent set minus its largest index is a stored simplex,
    so candidates are generated by appending one larger index to each simplex
    and keeping those absent from the nerve whose other facets are present.
    """
    cells = nerve._cells
    n = nerve.n
    found = []
    for simplex in cells:
        start = simplex[-1] + 1 if simplex else 1
        for j in range(start, n + 1):
            tau = simplex + (j,)
            if tau in cells:
                continue
            if all(tau[:k] + tau[k + 1:] in cells for k in range(len(tau) - 1)):
                found.append(tau)
    found.sort(key=_order)
    return found


def facets(nerve: Nerve) -> list[Simplex]:
    """Maximal simplices, largest first, ties in lexicographic order."""
    cells = nerve._cells
    n = nerve.n
    out = []
    for simplex in cells:
        members = set(simplex)
        if not any(
            tuple(sorted(simplex + (j,))) in cells for j in range(1, n + 1) if j not in members
        ):
            out.append(simplex)
    out.sort(key=lambda s: (-len(s), s))
    return out


class NegativeNerve:
    """Inconsistent index sets of a nerve: the complement of the nerve in
    the power set of ``{1..n}``. This family is closed upwards; its minimal
    elements are the minimal inconsistent groups.
    """

    __slots__ = ("nerve",)

    def __init__(self, nerve: Nerve):
        self.nerve = nerve

    def __contains__(self, indices) -> bool:
        return negative_members(self.nerve, indices)

    def __len__(self):
        return 2**self.nerve.n - len(self.nerve)

    def minimal(self) -> list[Simplex]:
        return minimal_inconsistent_sets(self.nerve)
