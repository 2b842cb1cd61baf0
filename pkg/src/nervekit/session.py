"""Dialogue state, incremental assertion and session files.

A session file is a canonical UTF-8 JSON document holding only the sources
of truth: worlds, atom valuations, the optional measure and the utterance
texts. The nerve is rebuilt on load by replaying every utterance.
"""
from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import InvalidMeasure, NerveKitError, SchemaError
from .formula import Atlas, Formula, interpret, is_identifier, parse_formula
from .nerve import Nerve, Simplex, facets, nerve_insert
from .space import Measure, SemanticSpace, WorldSet

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Utterance:
    text: str
    formula: Formula
    extension: WorldSet


@dataclass
class AssertionReport:
    index: int
    simplex_count: int
    consistent: bool  # the utterance on its own has a non-empty extension
    broken_groups: list[Simplex] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


class DialogueState:
    """Append-only dialogue over a fixed atlas; the nerve tracks every prefix."""

    def __init__(self, atlas: Atlas, measure: Measure | None = None, cap: int | None = None):
        if measure is not None and measure.space != atlas.space:
            raise InvalidMeasure("measure is over a different space than the atlas")
        self.atlas = atlas
        self.measure = measure
        self.cap = cap
        self.utterances: list[Utterance] = []
        self.nerve = Nerve.empty(atlas.space)

    @property
    def space(self) -> SemanticSpace:
        return self.atlas.space

    @property
    def n(self) -> int:
        return len(self.utterances)

    def all_consistent(self) -> bool:
        return tuple(range(1, self.n + 1)) in self.nerve

    def assert_utterance(self, text: str) -> AssertionReport:
        return assert_utterance(self, text)


def assert_utterance(state: DialogueState, text: str) -> AssertionReport:
    """Parse, interpret and append one utterance, updating the nerve.

    The state is left untouched if any step fails.
    """
    formula = parse_formula(text)
    extension = interpret(formula, state.atlas)
    old = state.nerve
    new = nerve_insert(old, extension, cap=state.cap)
    index = new.n

    broken = [s for s in facets(old) if s and s + (index,) not in new]
    report = AssertionReport(index, len(new), not extension.is_empty(), broken)
    if extension.is_empty():
        report.warnings.append(f"contradictory utterance {index}: its extension is empty")

    state.utterances.append(Utterance(text, formula, extension))
    state.nerve = new
    return report


def new_state(
    worlds: Sequence[str],
    atoms: Mapping[str, Sequence[str]],
    measure: Mapping[str, float] | None = None,
    cap: int | None = None,
) -> DialogueState:
    space = SemanticSpace(worlds)
    atlas = Atlas.from_labels(space, atoms)
    m = Measure.from_mapping(space, measure) if measure is not None else None
    return DialogueState(atlas, m, cap=cap)


# -- canonical serialization -------------------------------------------------

def _float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize {x!r}")
    text = format(x, ".17g")
    if "." not in text and "e" not in text:
        text += ".0"
    return text


def dumps(obj, indent: int = 0) -> str:
    """Canonical JSON text: two-space indent, keys in the given order, floats
    written with 17 significant digits."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _float(obj)
    if isinstance(obj, Mapping):
        if not obj:
            return "{}"
        body = ",\n".join(
            f"{inner}{json.dumps(str(k), ensure_ascii=False)}: {dumps(v, indent + 1)}" for k, v in obj.items()
        )
        return "{\n" + body + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (str, int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        body = ",\n".join(inner + dumps(v, indent + 1) for v in obj)
        return "[\n" + body + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_document(state: DialogueState) -> dict:
    atlas = state.atlas
    doc = {
        "version": SCHEMA_VERSION,
        "worlds": list(atlas.space.worlds),
        "atoms": {name: atlas[name].labels() for name in atlas.atom_names()},
        "measure": state.measure.as_dict() if state.measure is not None else None,
        "utterances": [u.text for u in state.utterances],
    }
    return doc


def serialize(state: DialogueState) -> str:
    return dumps(to_document(state)) + "\n"


def save_session(state: DialogueState, path) -> None:
    """Write ``state`` to ``path`` atomically (temp file + rename)."""
    text = serialize(state)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".nervekit-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _expect(cond: bool, path: str, message: str) -> None:
    if not cond:
        raise SchemaError(path, message)


def from_document(doc, cap: int | None = None) -> DialogueState:
    """Rebuild a state from a parsed session document, replaying utterances."""
    _expect(isinstance(doc, dict), "", "session document must be an object")
    known = {"version", "worlds", "atoms", "measure", "utterances"}
    for key in doc:
        _expect(key in known, key, "unknown field")
    _expect(doc.get("version") == SCHEMA_VERSION, "version", f"expected schema version {SCHEMA_VERSION}")

    worlds = doc.get("worlds")
    _expect(isinstance(worlds, list) and worlds, "worlds", "expected a non-empty list of labels")
    for i, w in enumerate(worlds):
        _expect(isinstance(w, str), f"worlds[{i}]", "world label must be a string")
    try:
        space = SemanticSpace(worlds)
    except NerveKitError as exc:
        raise SchemaError("worlds", str(exc)) from None

    atoms = doc.get("atoms", {})
    _expect(isinstance(atoms, dict), "atoms", "expected an object")
    valuation = {}
    for name, labels in atoms.items():
        _expect(is_identifier(name), f"atoms.{name}", "atom name must be an identifier")
        _expect(isinstance(labels, list), f"atoms.{name}", "expected a list of world labels")
        for i, label in enumerate(labels):
            _expect(isinstance(label, str) and label in space._index, f"atoms.{name}[{i}]", f"unknown world {label!r}")
        valuation[name] = space.subset(labels)
    atlas = Atlas(space, valuation)

    measure = None
    raw = doc.get("measure")
    if raw is not None:
        _expect(isinstance(raw, dict), "measure", "expected an object mapping worlds to weights")
        for label, w in raw.items():
            _expect(label in space._index, f"measure.{label}", "unknown world")
            _expect(isinstance(w, (int, float)) and not isinstance(w, bool), f"measure.{label}", "weight must be a number")
        try:
            measure = Measure.from_mapping(space, raw)
        except InvalidMeasure as exc:
            raise SchemaError("measure", str(exc)) from None

    utterances = doc.get("utterances", [])
    _expect(isinstance(utterances, list), "utterances", "expected a list of formula texts")
    for i, text in enumerate(utterances):
        _expect(isinstance(text, str), f"utterances[{i}]", "utterance must be a string")

    state = DialogueState(atlas, measure, cap=cap)
    for text in utterances:
        assert_utterance(state, text)
    return state


def loads(text: str, cap: int | None = None) -> DialogueState:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"not a valid session document: {exc}") from None
    return from_document(doc, cap=cap)


def load_session(path, cap: int | None = None) -> DialogueState:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), cap=cap)
