"""Propositional formulas over atoms with negation, conjunction and disjunction.

Concrete syntax, loosest binding first::

    formula := conj (OR conj)*
    conj    := unary (AND unary)*
    unary   := NOT unary | '(' formula ')' | IDENT

    NOT = ! | ~ | ¬      AND = & | && | ∧      OR = | | || | ∨

Binary connectives associate to the left.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Union

from .errors import IndexOutOfRange, ParseError, SpaceMismatch, UnknownAtom
from .space import SemanticSpace, WorldSet

MAX_NODES = 10_000
# Tree consumers recurse; keep well below the interpreter's recursion limit.
MAX_DEPTH = 200


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Not:
    child: Formula

    def __str__(self):
        return "!" + str(self.child)


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula

    def __str__(self):
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Or:
    left: Formula
    right: Formula

    def __str__(self):
        return f"({self.left} | {self.right})"


Formula = Union[Atom, Not, And, Or]


def to_text(f: Formula) -> str:
    """Fully parenthesized ASCII rendering; parses back to ``f``."""
    return str(f)


def atoms(f: Formula) -> set[str]:
    out = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            out.add(node.name)
        elif isinstance(node, Not):
            stack.append(node.child)
        else:
            stack.append(node.left)
            stack.append(node.right)
    return out


def conjoin(*parts: Formula) -> Formula:
    result = parts[0]
    for p in parts[1:]:
        result = And(result, p)
    return result


def disjoin(*parts: Formula) -> Formula:
    result = parts[0]
    for p in parts[1:]:
        result = Or(result, p)
    return result


# -- tokenizer ---------------------------------------------------------------

_SINGLE = {
    "!": "NOT", "~": "NOT", "¬": "NOT",
    "&": "AND", "∧": "AND",
    "|": "OR", "∨": "OR",
    "(": "LPAREN", ")": "RPAREN",
}
_ASCII_LETTERS = frozenset("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz_")
_IDENT_CHARS = _ASCII_LETTERS | frozenset("0123456789")


def is_identifier(name: str) -> bool:
    return bool(name) and name[0] in _ASCII_LETTERS and all(c in _IDENT_CHARS for c in name)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int  # 1-based


def tokenize(text: str) -> list[Token]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _ASCII_LETTERS:
            j = i + 1
            while j < n and text[j] in _IDENT_CHARS:
                j += 1
            tokens.append(Token("IDENT", text[i:j], i + 1))
            i = j
            continue
        kind = _SINGLE.get(c)
        if kind is None:
            raise ParseError(i + 1, f"atom, connective or parenthesis, found {c!r}", text)
        if c in "&|" and i + 1 < n and text[i + 1] == c:
            tokens.append(Token(kind, c + c, i + 1))
            i += 2
        else:
            tokens.append(Token(kind, c, i + 1))
            i += 1
    tokens.append(Token("EOF", "", n + 1))
    return tokens


# -- parser ------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self.nodes = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def fail(self, expected: str):
        tok = self.peek()
        found = "end of input" if tok.kind == "EOF" else repr(tok.text)
        raise ParseError(tok.position, f"{expected}, found {found}", self.text)

    def node(self, depth: int) -> None:
        self.nodes += 1
        if self.nodes > MAX_NODES:
            raise ParseError(self.peek().position, f"a formula of at most {MAX_NODES} nodes", self.text)
        if depth > MAX_DEPTH:
            raise ParseError(self.peek().position, f"a formula nested at most {MAX_DEPTH} deep", self.text)

    def parse(self) -> Formula:
        f, _ = self.disjunction()
        if self.peek().kind != "EOF":
            self.fail("connective or end of input")
        return f

    def disjunction(self, nesting=0):
        left, depth = self.conjunction(nesting)
        while self.peek().kind == "OR":
            self.pos += 1
            right, rdepth = self.conjunction(nesting)
            depth = max(depth, rdepth) + 1
            self.node(depth)
            left = Or(left, right)
        return left, depth

    def conjunction(self, nesting):
        left, depth = self.unary(nesting)
        while self.peek().kind == "AND":
            self.pos += 1
            right, rdepth = self.unary(nesting)
            depth = max(depth, rdepth) + 1
            self.node(depth)
            left = And(left, right)
        return left, depth

    def unary(self, nesting):
        # nesting counts enclosing prefix operators and parentheses; it bounds
        # the parser's own recursion independently of the tree depth
        if nesting > MAX_DEPTH:
            raise ParseError(self.peek().position, f"a formula nested at most {MAX_DEPTH} deep", self.text)
        tok = self.peek()
        if tok.kind == "NOT":
            self.pos += 1
            child, depth = self.unary(nesting + 1)
            self.node(depth + 1)
            return Not(child), depth + 1
        if tok.kind == "LPAREN":
            self.pos += 1
            inner, depth = self.disjunction(nesting + 1)
            if self.peek().kind != "RPAREN":
                self.fail("')'")
            self.pos += 1
            return inner, depth
        if tok.kind == "IDENT":
            self.pos += 1
            self.node(1)
            return Atom(tok.text), 1
        self.fail("atom, '!' or '('")


def parse_formula(text: str) -> Formula:
    """Parse ``text`` into a formula tree.

    >>> parse_formula("p | q & r")
    Or(left=Atom(name='p'), right=And(left=Atom(name='q'), right=Atom(name='r')))
    """
    if not isinstance(text, str):
        raise TypeError("formula text must be a string")
    return _Parser(text).parse()


# -- semantics ---------------------------------------------------------------

class Atlas:
    """A semantic space together with the extension of every atom."""

    __slots__ = ("space", "valuation")

    def __init__(self, space: SemanticSpace, valuation: Mapping[str, WorldSet]):
        checked = {}
        for name, ws in valuation.items():
            if not is_identifier(name):
                raise ValueError(f"invalid atom name {name!r}")
            if ws.space is not space and ws.space != space:
                raise SpaceMismatch(f"valuation of {name!r} is over a different space")
            checked[name] = ws
        self.space = space
        self.valuation = checked

    @classmethod
    def from_labels(cls, space: SemanticSpace, valuation: Mapping[str, list[str]]) -> Atlas:
        return cls(space, {name: space.subset(labels) for name, labels in valuation.items()})

    def __getitem__(self, name: str) -> WorldSet:
        try:
            return self.valuation[name]
        except KeyError:
            raise UnknownAtom(name) from None

    def __contains__(self, name):
        return name in self.valuation

    def atom_names(self) -> list[str]:
        return sorted(self.valuation)

    def check(self, f: Formula) -> None:
        for name in sorted(atoms(f)):
            if name not in self.valuation:
                raise UnknownAtom(name)

    def __eq__(self, other):
        if not isinstance(other, Atlas):
            return NotImplemented
        return self.space == other.space and self.valuation == other.valuation

    def __repr__(self):
        return f"Atlas({self.space!r}, {self.valuation!r})"


def _bits(f: Formula, valuation, full: int) -> int:
    if isinstance(f, Atom):
        try:
            return valuation[f.name].bits
        except KeyError:
            raise UnknownAtom(f.name) from None
    if isinstance(f, Not):
        return full ^ _bits(f.child, valuation, full)
    if isinstance(f, And):
        return _bits(f.left, valuation, full) & _bits(f.right, valuation, full)
    if isinstance(f, Or):
        return _bits(f.left, valuation, full) | _bits(f.right, valuation, full)
    raise TypeError(f"not a formula: {f!r}")


def interpret(f: Formula, atlas: Atlas) -> WorldSet:
    """The set of worlds at which ``f`` holds."""
    space = atlas.space
    return WorldSet(space, _bits(f, atlas.valuation, space.full().bits))


def satisfies(world_index: int, f: Formula, atlas: Atlas) -> bool:
    if not 0 <= world_index < atlas.space.size:
        raise IndexOutOfRange(f"world index {world_index} outside 0..{atlas.space.size - 1}")
    return world_index in interpret(f, atlas)


def subformulas(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Not):
            stack.append(node.child)
        elif isinstance(node, (And, Or)):
            stack.append(node.right)
            stack.append(node.left)
