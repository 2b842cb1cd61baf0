"""Consistency, entailment and improbability-ranked consequences.

Every query takes a dialogue state exposing ``atlas``, ``nerve`` and
``measure`` attributes (see :class:`nervekit.session.DialogueState`) and a
set of 1-based utterance indices naming the asserted premises.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import GuardExceeded, NoMeasure
from .formula import Atom, Formula, Not, conjoin, disjoin, interpret, to_text
from .nerve import Simplex, check_indices
from .space import Measure, WorldSet, _worldset, measure_of

ENUMERATION_MAX_WORLDS = 20
ENUMERATION_MAX_CANDIDATES = 2**16


class ExplosionWarning(UserWarning):
    """Premises are jointly inconsistent, so they entail every formula."""

    def __init__(self, premises: Simplex, witness: Simplex):
        self.premises = premises
        self.witness = witness
        super().__init__(
            f"premises {_fmt(premises)} are inconsistent (minimal witness {_fmt(witness)}); "
            "they entail every formula"
        )


def _fmt(simplex) -> str:
    return "{" + ",".join(map(str, simplex)) + "}"


def asserted_worlds(state, indices: Iterable[int]) -> WorldSet:
    """Worlds compatible with every premise; all worlds for no premises."""
    nerve = state.nerve
    simplex = check_indices(nerve, indices)
    cached = nerve._cells.get(simplex)
    if cached is not None:
        return cached
    return direct_intersection(state, simplex)


def direct_intersection(state, indices: Iterable[int]) -> WorldSet:
    """Intersection recomputed from the utterance extensions, bypassing the nerve."""
    nerve = state.nerve
    simplex = check_indices(nerve, indices)
    bits = nerve.space.full().bits
    for i in simplex:
        bits &= nerve.sets[i - 1].bits
    return _worldset(nerve.space, bits)


def consistent(state, indices: Iterable[int]) -> bool:
    return check_indices(state.nerve, indices) in state.nerve._cells


def consistent_direct(state, indices: Iterable[int]) -> bool:
    return not direct_intersection(state, indices).is_empty()


def inconsistency_witness(state, indices: Iterable[int]) -> Simplex | None:
    """A minimal inconsistent subset of ``indices``, or None if they are consistent.

    Deletion-based shrinking: drop each index in turn and keep it out whenever
    the remainder stays inconsistent.
    """
    cells = state.nerve._cells
    core = list(check_indices(state.nerve, indices))
    if tuple(core) in cells:
        return None
    for i in list(core):
        trial = [j for j in core if j != i]
        if tuple(trial) not in cells:
            core = trial
    return tuple(core)


def _warn_if_exploding(state, simplex: Simplex, worlds: WorldSet) -> None:
    if worlds.is_empty():
        witness = inconsistency_witness(state, simplex)
        warnings.warn(ExplosionWarning(simplex, witness), stacklevel=3)


def entails(state, premises: Iterable[int], conclusion: Formula) -> bool:
    """Whether every world compatible with ``premises`` satisfies ``conclusion``.

    Inconsistent premises entail everything; an :class:`ExplosionWarning`
    naming a minimal inconsistent witness is issued in that case.
    """
    simplex = check_indices(state.nerve, premises)
    extension = interpret(conclusion, state.atlas)
    worlds = asserted_worlds(state, simplex)
    _warn_if_exploding(state, simplex, worlds)
    return worlds <= extension


@dataclass(frozen=True)
class RankedConsequence:
    formula: Formula
    extension: WorldSet
    probability: float
    improbability: float  # nats; inf when probability is zero

    @property
    def text(self) -> str:
        return to_text(self.formula)


def improbability(p: float) -> float:
    if p <= 0.0:
        return math.inf
    if p >= 1.0:
        return 0.0
    return -math.log(p)


def rank_consequences(
    state,
    indices: Iterable[int],
    candidates: Sequence[Formula],
    measure: Measure | None = None,
) -> list[RankedConsequence]:
    """Entailed candidates, most improbable (most informative) first.

    Candidates not entailed by the premises are dropped. Ties are broken by
    the canonical formula text.
    """
    m = measure if measure is not None else state.measure
    if m is None:
        raise NoMeasure("no probability measure attached to the dialogue")
    atlas = state.atlas
    for f in candidates:
        atlas.check(f)
    simplex = check_indices(state.nerve, indices)
    worlds = asserted_worlds(state, simplex)
    _warn_if_exploding(state, simplex, worlds)

    ranked = []
    for f in candidates:
        ext = interpret(f, atlas)
        if not worlds <= ext:
            continue
        p = 1.0 if ext.is_full() else min(1.0, measure_of(ext, m))
        ranked.append(RankedConsequence(f, ext, p, improbability(p)))
    ranked.sort(key=lambda r: (-r.improbability, r.text))
    return ranked


def enumerate_consequences(state, indices: Iterable[int], max_atoms: int | None = None) -> list[Formula]:
    """One formula per distinct consequence extension of the premises.

    Each formula is a disjunction of world descriptions (conjunctions of
    literals over the first ``max_atoms`` atoms in name order). Worlds the
    chosen atoms cannot tell apart share a description, so the result holds
    one formula per expressible superset of the asserted worlds, ordered by
    extension size and then by world indices.
    """
    atlas = state.atlas
    space = atlas.space
    if space.size > ENUMERATION_MAX_WORLDS:
        raise GuardExceeded("worlds for consequence enumeration", space.size, ENUMERATION_MAX_WORLDS)
    worlds = asserted_worlds(state, indices)
    free = [i for i in range(space.size) if i not in worlds]
    if 2 ** len(free) > ENUMERATION_MAX_CANDIDATES:
        raise GuardExceeded("candidate consequences", 2 ** len(free), ENUMERATION_MAX_CANDIDATES)

    names = atlas.atom_names()
    if max_atoms is not None:
        if max_atoms < 1:
            raise ValueError("max_atoms must be at least 1")
        names = names[:max_atoms]
    if not names:
        raise ValueError("the atlas has no atoms to describe worlds with")

    profiles = [tuple(i in atlas[a] for a in names) for i in range(space.size)]
    class_bits: dict[tuple, int] = {}
    for i, prof in enumerate(profiles):
        class_bits[prof] = class_bits.get(prof, 0) | (1 << i)
    world_class = [class_bits[prof] for prof in profiles]

    base = 0
    for i in worlds:
        base |= world_class[i]
    closures = [base] * (1 << len(free))
    seen = {base}
    for mask in range(1, len(closures)):
        low = mask & -mask
        closure = closures[mask ^ low] | world_class[free[low.bit_length() - 1]]
        closures[mask] = closure
        seen.add(closure)

    def key(bits):
        members = _worldset(space, bits)
        return (len(members), list(members))

    out = []
    for bits in sorted(seen, key=key):
        out.append(_describe(bits, profiles, names))
    return out


def _describe(bits: int, profiles, names) -> Formula:
    if bits == 0:
        a = Atom(names[0])
        return conjoin(a, Not(a))
    terms = []
    done = set()
    i = 0
    while bits >> i:
        if bits >> i & 1 and profiles[i] not in done:
            done.add(profiles[i])
            literals = [Atom(a) if val else Not(Atom(a)) for a, val in zip(names, profiles[i])]
            terms.append(conjoin(*literals))
        i += 1
    return disjoin(*terms)
