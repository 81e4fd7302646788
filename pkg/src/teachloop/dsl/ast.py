"""Pattern language AST.

A pattern is an alternation (`|`) of sequences, each sequence a `+`-joined
run of atoms. Atoms: a POS tag, `[word]` for stem match, `(word)` for soft
match, `$TYPE` for an entity run, `*` for a wildcard over any token span.
`|` binds looser than `+`. The canonical printed form (no spaces around
operators) is the wire and storage format for patterns everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..annotation.types import EntityType, Pos, PATTERN_POS_TAGS
from ..errors import IntegrityError


@dataclass(frozen=True)
class PosTagAtom:
    tag: Pos

    def __post_init__(self):
        if self.tag not in PATTERN_POS_TAGS:
            raise IntegrityError(f"pattern POS tag must be one of the core eight: {self.tag}")

    def canonical(self) -> str:
        return self.tag.value


@dataclass(frozen=True)
class StemAtom:
    word: str

    def __post_init__(self):
        _check_word(self.word)

    def canonical(self) -> str:
        return f"[{self.word}]"


@dataclass(frozen=True)
class SoftAtom:
    word: str

    def __post_init__(self):
        _check_word(self.word)

    def canonical(self) -> str:
        return f"({self.word})"


@dataclass(frozen=True)
class EntityAtom:
    type: EntityType

    def canonical(self) -> str:
        return f"${self.type.value}"


@dataclass(frozen=True)
class WildcardAtom:
    def canonical(self) -> str:
        return "*"


PatternAtom = Union[PosTagAtom, StemAtom, SoftAtom, EntityAtom, WildcardAtom]


def _check_word(word: str) -> None:
    if not word or any(c.isspace() for c in word):
        raise IntegrityError(f"pattern word must be a single token: {word!r}")


@dataclass(frozen=True)
class PatternAst:
    """Alternation of sequences; no sequence may consist only of wildcards."""

    branches: tuple[tuple[PatternAtom, ...], ...]

    def __post_init__(self):
        if not self.branches:
            raise IntegrityError("pattern must have at least one branch")
        for seq in self.branches:
            if not seq:
                raise IntegrityError("pattern branch must have at least one atom")
            if all(isinstance(a, WildcardAtom) for a in seq):
                raise IntegrityError("pattern branch cannot be all wildcards")

    def canonical(self) -> str:
        return "|".join("+".join(a.canonical() for a in seq) for seq in self.branches)

    @property
    def atom_count(self) -> int:
        return sum(len(seq) for seq in self.branches)


def print_pattern(ast: PatternAst) -> str:
    """Canonical string form; parse(print(ast)) is structurally identical."""
    return ast.canonical()


def sequence(*atoms: PatternAtom) -> PatternAst:
    return PatternAst((tuple(atoms),))


def alternation(*seqs: tuple[PatternAtom, ...]) -> PatternAst:
    return PatternAst(tuple(seqs))
