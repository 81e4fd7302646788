"""Evidence-driven atom enumeration.

Candidate atoms come only from the positive examples: a stem and a soft
atom for every content lemma (anything not tagged OTHER), a POS atom for
every tag present, and an entity atom for every entity type present. The
order is deterministic: POS atoms in fixed tag order, entity atoms in fixed
type order, then stem and soft atoms by lemma.
"""

from __future__ import annotations

from typing import Sequence

from ..annotation.types import AnnotatedSentence, EntityType, Pos, PATTERN_POS_TAGS
from ..errors import PreconditionError
from ..dsl.ast import EntityAtom, PatternAtom, PosTagAtom, SoftAtom, StemAtom


def enumerate_atoms(positives: Sequence[AnnotatedSentence]) -> list[PatternAtom]:
    if not positives:
        raise PreconditionError("atom enumeration requires at least one positive example")
    tags_seen: set[Pos] = set()
    entity_types: set[EntityType] = set()
    lemmas: set[str] = set()
    for sentence in positives:
        for token in sentence.tokens:
            if token.pos is not Pos.OTHER:
                tags_seen.add(token.pos)
                lemmas.add(token.lemma)
        for _, _, etype in sentence.entity_runs():
            entity_types.add(etype)

    atoms: list[PatternAtom] = []
    atoms.extend(PosTagAtom(t) for t in PATTERN_POS_TAGS if t in tags_seen)
    atoms.extend(EntityAtom(t) for t in EntityType if t in entity_types)
    for lemma in sorted(lemmas):
        atoms.append(StemAtom(lemma))
        atoms.append(SoftAtom(lemma))
    return atoms
