"""Core token-level types: the substrate every matcher and model runs on."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from ..errors import IntegrityError


class Pos(str, Enum):
    """Part-of-speech vocabulary. OTHER catches everything outside the core eight."""

    VERB = "VERB"
    PROPN = "PROPN"
    NOUN = "NOUN"
    ADJ = "ADJ"
    ADV = "ADV"
    AUX = "AUX"
    PRON = "PRON"
    NUM = "NUM"
    OTHER = "OTHER"


# Tags usable inside pattern atoms (OTHER is deliberately excluded).
PATTERN_POS_TAGS = (
    Pos.VERB,
    Pos.PROPN,
    Pos.NOUN,
    Pos.ADJ,
    Pos.ADV,
    Pos.AUX,
    Pos.PRON,
    Pos.NUM,
)


class EntityType(str, Enum):
    PERSON = "PERSON"
    LOCATION = "LOCATION"
    DATE = "DATE"
    ORG = "ORG"


class EntityRole(str, Enum):
    BEGIN = "B"
    INSIDE = "I"


@dataclass(frozen=True)
class EntityTag:
    type: EntityType
    role: EntityRole

    def encode(self) -> str:
        return f"{self.role.value}-{self.type.value}"

    @staticmethod
    def decode(text: str) -> "EntityTag":
        role, _, etype = text.partition("-")
        try:
            return EntityTag(EntityType(etype), EntityRole(role))
        except ValueError:
            raise IntegrityError(f"bad entity tag {text!r}") from None


@dataclass(frozen=True)
class Token:
    text: str
    lemma: str
    pos: Pos
    entity: Optional[EntityTag] = None

    def __post_init__(self):
        if not self.lemma or any(c.isspace() for c in self.lemma):
            raise IntegrityError(f"token lemma must be nonempty without whitespace: {self.lemma!r}")
        if self.lemma != self.lemma.lower():
            raise IntegrityError(f"token lemma must be lowercase: {self.lemma!r}")


@dataclass(frozen=True)
class AnnotatedSentence:
    id: str
    raw_text: str
    tokens: tuple[Token, ...]

    def __post_init__(self):
        _check_entity_runs(self.tokens)
        # Token texts must reconstruct the raw text up to whitespace placement
        # (punctuation is split into its own tokens, so compare ignoring spaces).
        squeezed_raw = "".join(self.raw_text.split())
        squeezed_tok = "".join(t.text for t in self.tokens)
        if squeezed_raw != squeezed_tok:
            raise IntegrityError(
                f"tokens do not reconstruct raw text for sentence {self.id!r}"
            )

    @property
    def lemmas(self) -> tuple[str, ...]:
        return tuple(t.lemma for t in self.tokens)

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(t.text for t in self.tokens)

    def entity_runs(self) -> list[tuple[int, int, EntityType]]:
        """Contiguous (start, end, type) entity spans, half-open token ranges."""
        runs: list[tuple[int, int, EntityType]] = []
        i = 0
        while i < len(self.tokens):
            tag = self.tokens[i].entity
            if tag is not None and tag.role is EntityRole.BEGIN:
                j = i + 1
                while j < len(self.tokens):
                    nxt = self.tokens[j].entity
                    if nxt is None or nxt.role is not EntityRole.INSIDE or nxt.type is not tag.type:
                        break
                    j += 1
                runs.append((i, j, tag.type))
                i = j
            else:
                i += 1
        return runs


def _check_entity_runs(tokens: tuple[Token, ...]) -> None:
    prev: Optional[EntityTag] = None
    for i, tok in enumerate(tokens):
        tag = tok.entity
        if tag is not None and tag.role is EntityRole.INSIDE:
            if prev is None or prev.type is not tag.type:
                raise IntegrityError(f"entity run at token {i} has no begin marker")
        prev = tag


@dataclass(frozen=True)
class LabelDef:
    """A label key with its display name and theme color (hex RGB)."""

    key: str
    display: str
    color: str

    def __post_init__(self):
        if not (self.color.startswith("#") and len(self.color) == 7):
            raise IntegrityError(f"label color must be #rrggbb: {self.color!r}")


@dataclass
class LabelSet:
    labels: list[LabelDef] = field(default_factory=list)

    def __post_init__(self):
        keys = [l.key for l in self.labels]
        if len(set(keys)) != len(keys):
            raise IntegrityError("label keys must be unique")
        colors = [l.color for l in self.labels]
        if len(set(colors)) != len(colors):
            raise IntegrityError("label theme colors must be unique")

    def __iter__(self):
        return iter(self.labels)

    def __len__(self):
        return len(self.labels)

    def keys(self) -> list[str]:
        return [l.key for l in self.labels]

    def get(self, key: str) -> LabelDef:
        for l in self.labels:
            if l.key == key:
                return l
        from ..errors import NotFoundError

        raise NotFoundError(f"unknown label {key!r}")

    def __contains__(self, key: str) -> bool:
        return any(l.key == key for l in self.labels)
