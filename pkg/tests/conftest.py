from __future__ import annotations

import json
import random
import sys
from importlib import resources as importlib_resources
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from teachloop.annotation import (
    AnnotationStore,
    Corpus,
    SynonymLexicon,
    annotate_text,
    default_resources,
    ingest_corpus,
)
from teachloop.annotation.corpus import load_labels
from teachloop.annotation.store import Source
from teachloop.annotation.types import (
    AnnotatedSentence,
    EntityRole,
    EntityTag,
    EntityType,
    Pos,
    Token,
)


def fixture_dir(name: str):
    return importlib_resources.files("teachloop") / "data" / name


def read_fixture(name: str, filename: str) -> str:
    return (fixture_dir(name) / filename).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def resources():
    return default_resources()


@pytest.fixture(scope="session")
def demo_corpus(resources):
    return ingest_corpus(read_fixture("demo", "corpus.jsonl").splitlines(), resources)


@pytest.fixture(scope="session")
def demo_labels():
    return load_labels(read_fixture("demo", "labels.jsonl"))


@pytest.fixture(scope="session")
def demo_lexicon():
    return SynonymLexicon.from_jsonl(read_fixture("demo", "lexicon.jsonl"))


@pytest.fixture(scope="session")
def demo_phrasebook_data():
    return json.loads(read_fixture("demo", "phrasebook.json"))


@pytest.fixture(scope="session")
def demo_annotations():
    return json.loads(read_fixture("demo", "annotations.json"))


@pytest.fixture()
def demo_store(demo_corpus, demo_labels, demo_annotations):
    store = AnnotationStore(demo_corpus.ids(), demo_labels.keys())
    for sid, labels in sorted(demo_annotations.items()):
        store.set_labels(sid, set(labels), Source.HUMAN)
    return store


def make_sentence(spec: str, sid: str = "t") -> AnnotatedSentence:
    """Compact sentence builder: 'text/lemma/POS text/lemma/POS ...'.

    An optional fourth field carries the entity tag, e.g. Houston/houston/PROPN/B-LOCATION.
    """
    tokens = []
    for part in spec.split():
        bits = part.split("/")
        text, lemma, pos = bits[0], bits[1], Pos(bits[2])
        entity = EntityTag.decode(bits[3]) if len(bits) > 3 else None
        tokens.append(Token(text=text, lemma=lemma, pos=pos, entity=entity))
    raw = " ".join(t.text for t in tokens)
    return AnnotatedSentence(id=sid, raw_text=raw, tokens=tuple(tokens))


VOCAB = ["ant", "bee", "cat", "dog", "elk", "fox", "gnu", "hen", "owl", "pig"]
POS_CHOICES = list(Pos)
ENTITY_TYPES = list(EntityType)


def random_sentence(rng: random.Random, max_tokens: int = 8, sid: str = "r") -> AnnotatedSentence:
    n = rng.randint(0, max_tokens)
    tokens = []
    i = 0
    while i < n:
        word = rng.choice(VOCAB)
        pos = rng.choice(POS_CHOICES)
        if rng.random() < 0.15:
            etype = rng.choice(ENTITY_TYPES)
            run_len = min(rng.randint(1, 2), n - i)
            tokens.append(Token(word, word, pos, EntityTag(etype, EntityRole.BEGIN)))
            for _ in range(run_len - 1):
                w2 = rng.choice(VOCAB)
                tokens.append(Token(w2, w2, rng.choice(POS_CHOICES), EntityTag(etype, EntityRole.INSIDE)))
            i += run_len
        else:
            tokens.append(Token(word, word, pos))
            i += 1
    raw = " ".join(t.text for t in tokens)
    return AnnotatedSentence(id=sid, raw_text=raw, tokens=tuple(tokens))


def random_lexicon(rng: random.Random) -> SynonymLexicon:
    heads = rng.sample(VOCAB, rng.randint(1, 4))
    return SynonymLexicon.from_pairs(
        (h, set(rng.sample(VOCAB, rng.randint(0, 3)))) for h in heads
    )


def random_pattern(rng: random.Random, max_atoms: int = 3, max_branches: int = 2):
    from teachloop.dsl.ast import (
        EntityAtom,
        PatternAst,
        PosTagAtom,
        SoftAtom,
        StemAtom,
        WildcardAtom,
    )
    from teachloop.annotation.types import PATTERN_POS_TAGS

    def random_atom():
        kind = rng.randint(0, 4)
        if kind == 0:
            return PosTagAtom(rng.choice(PATTERN_POS_TAGS))
        if kind == 1:
            return StemAtom(rng.choice(VOCAB))
        if kind == 2:
            return SoftAtom(rng.choice(VOCAB))
        if kind == 3:
            return EntityAtom(rng.choice(ENTITY_TYPES))
        return WildcardAtom()

    branches = []
    for _ in range(rng.randint(1, max_branches)):
        while True:
            seq = tuple(random_atom() for _ in range(rng.randint(1, max_atoms)))
            if not all(isinstance(a, WildcardAtom) for a in seq):
                break
        branches.append(seq)
    return PatternAst(tuple(branches))
