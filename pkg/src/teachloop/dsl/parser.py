"""Recursive-descent parser for the pattern language.

Grammar (whitespace around operators is ignored):

    alt  := seq ('|' seq)*
    seq  := atom ('+' atom)*
    atom := POSTAG | '[' word ']' | '(' word ')' | '$' ENTTYPE | '*'

Errors carry the 0-based column offset of the offending character.
A doubled operator such as `++` is rejected explicitly (it reads as an
empty atom), as are branches consisting only of wildcards.
"""

from __future__ import annotations

from ..annotation.types import EntityType, Pos, PATTERN_POS_TAGS
from ..errors import PatternSyntaxError, PreconditionError
from .ast import (
    EntityAtom,
    PatternAst,
    PatternAtom,
    PosTagAtom,
    SoftAtom,
    StemAtom,
    WildcardAtom,
)

_POS_NAMES = {t.value for t in PATTERN_POS_TAGS}
_ENTITY_NAMES = {t.value for t in EntityType}
_WORD_FORBIDDEN = set("()[]|+*$")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def error(self, message: str, column: int | None = None) -> PatternSyntaxError:
        return PatternSyntaxError(message, self.pos if column is None else column)


def parse_pattern(text: str) -> PatternAst:
    if not text or not text.strip():
        raise PreconditionError("pattern text must be nonempty")
    sc = _Scanner(text)
    branches = [_parse_sequence(sc)]
    sc.skip_ws()
    while sc.peek() == "|":
        sc.pos += 1
        branches.append(_parse_sequence(sc))
        sc.skip_ws()
    if sc.pos < len(sc.text):
        raise sc.error(f"unexpected character {sc.peek()!r}")
    return PatternAst(tuple(branches))


def _parse_sequence(sc: _Scanner) -> tuple[PatternAtom, ...]:
    sc.skip_ws()
    seq_start = sc.pos
    atoms = [_parse_atom(sc)]
    sc.skip_ws()
    while sc.peek() == "+":
        sc.pos += 1
        atoms.append(_parse_atom(sc))
        sc.skip_ws()
    if all(isinstance(a, WildcardAtom) for a in atoms):
        raise sc.error("sequence cannot consist only of wildcards", seq_start)
    return tuple(atoms)


def _parse_atom(sc: _Scanner) -> PatternAtom:
    sc.skip_ws()
    start = sc.pos
    ch = sc.peek()
    if not ch or ch in "+|":
        raise sc.error("expected an atom" if ch else "trailing operator", start)
    if ch == "*":
        sc.pos += 1
        return WildcardAtom()
    if ch == "[":
        word = _read_bracketed(sc, "]")
        return StemAtom(word.lower())
    if ch == "(":
        word = _read_bracketed(sc, ")")
        return SoftAtom(word.lower())
    if ch == "$":
        sc.pos += 1
        name = _read_name(sc)
        if name not in _ENTITY_NAMES:
            raise sc.error(f"unknown entity type ${name or '?'}", start)
        return EntityAtom(EntityType(name))
    if ch.isalpha():
        name = _read_name(sc)
        if name not in _POS_NAMES:
            raise sc.error(f"unknown POS tag {name!r}", start)
        return PosTagAtom(Pos(name))
    raise sc.error(f"unexpected character {ch!r}", start)


def _read_bracketed(sc: _Scanner, closer: str) -> str:
    opener_col = sc.pos
    sc.pos += 1
    start = sc.pos
    while sc.pos < len(sc.text) and sc.text[sc.pos] != closer:
        sc.pos += 1
    if sc.pos >= len(sc.text):
        raise sc.error(f"unbalanced {sc.text[opener_col]!r}", opener_col)
    word = sc.text[start : sc.pos]
    sc.pos += 1
    if not word:
        raise sc.error("empty atom", opener_col)
    if any(c.isspace() for c in word):
        raise sc.error("atom word cannot contain whitespace", start)
    if any(c in _WORD_FORBIDDEN for c in word):
        raise sc.error("atom word cannot contain operator characters", start)
    return word


def _read_name(sc: _Scanner) -> str:
    start = sc.pos
    while sc.pos < len(sc.text) and (sc.text[sc.pos].isalpha() or sc.text[sc.pos] == "_"):
        sc.pos += 1
    return sc.text[start : sc.pos]
