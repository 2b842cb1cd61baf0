"""Incremental dialogue nerves over finite discrete semantic spaces."""

from .errors import (
    DuplicateWorld,
    EmptySpace,
    GuardExceeded,
    IndexOutOfRange,
    InvalidMeasure,
    NerveKitError,
    NoMeasure,
    ParseError,
    SchemaError,
    SpaceMismatch,
    UnknownAtom,
    UnknownWorld,
)
from .formula import And, Atlas, Atom, Formula, Not, Or, interpret, parse_formula, satisfies, to_text
from .nerve import (
    Nerve,
    Simplex,
    facets,
    has_simplex,
    minimal_inconsistent_sets,
    negative_members,
    nerve_batch,
    nerve_insert,
)
from .reasoner import (
    ExplosionWarning,
    RankedConsequence,
    asserted_worlds,
    consistent,
    entails,
    enumerate_consequences,
    rank_consequences,
)
from .session import DialogueState, assert_utterance, load_session, new_state, save_session
from .space import (
    Measure,
    SemanticSpace,
    WorldSet,
    complement,
    intersect,
    is_empty,
    is_subset,
    make_space,
    measure_of,
    union,
)

__version__ = "0.1.0"
