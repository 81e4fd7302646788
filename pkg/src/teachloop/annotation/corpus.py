"""Corpus ingestion and the line-delimited record formats.

Corpus file: one JSON record per line with fields `id`, `text` and optional
`tokens` (array of {t, l, p, e?}). Records lacking tokens run through the
fallback annotator; precomputed tokens are preserved verbatim.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional

from ..errors import CorpusFormatError, DuplicateIdError, IntegrityError, NotFoundError
from .tagger import TaggerResources, annotate_text, default_resources
from .types import AnnotatedSentence, EntityTag, LabelDef, LabelSet, Pos, Token


@dataclass
class Corpus:
    sentences: list[AnnotatedSentence] = field(default_factory=list)

    def __post_init__(self):
        self._by_id = {s.id: s for s in self.sentences}
        if len(self._by_id) != len(self.sentences):
            raise DuplicateIdError("corpus contains duplicate sentence ids")

    def __len__(self):
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)

    def ids(self) -> list[str]:
        return [s.id for s in self.sentences]

    def get(self, sentence_id: str) -> AnnotatedSentence:
        try:
            return self._by_id[sentence_id]
        except KeyError:
            raise NotFoundError(f"unknown sentence id {sentence_id!r}") from None

    def __contains__(self, sentence_id: str) -> bool:
        return sentence_id in self._by_id

    def subset(self, ids: Iterable[str]) -> "Corpus":
        return Corpus([self.get(i) for i in ids])


def _token_from_record(rec: dict, line_no: int) -> Token:
    try:
        text = rec["t"]
        lemma = rec["l"]
        pos = Pos(rec["p"])
    except (KeyError, ValueError, TypeError) as exc:
        raise CorpusFormatError(f"bad token record {rec!r}: {exc}", line_no) from None
    entity = None
    if rec.get("e"):
        try:
            entity = EntityTag.decode(rec["e"])
        except IntegrityError as exc:
            raise CorpusFormatError(str(exc), line_no) from None
    try:
        return Token(text=text, lemma=lemma, pos=pos, entity=entity)
    except IntegrityError as exc:
        raise CorpusFormatError(str(exc), line_no) from None


def ingest_corpus(
    lines: Iterable[str],
    resources: Optional[TaggerResources] = None,
) -> Corpus:
    """Parse line-delimited corpus records, annotating records without tokens."""
    resources = resources or default_resources()
    sentences: list[AnnotatedSentence] = []
    seen: set[str] = set()
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusFormatError(f"invalid record: {exc.msg}", line_no) from None
        if not isinstance(rec, dict) or "id" not in rec or "text" not in rec:
            raise CorpusFormatError("record must have id and text fields", line_no)
        sid = str(rec["id"])
        if sid in seen:
            raise DuplicateIdError(f"duplicate sentence id {sid!r} at line {line_no}")
        seen.add(sid)
        if rec.get("tokens"):
            tokens = tuple(_token_from_record(t, line_no) for t in rec["tokens"])
            try:
                sentence = AnnotatedSentence(id=sid, raw_text=rec["text"], tokens=tokens)
            except IntegrityError as exc:
                raise CorpusFormatError(str(exc), line_no) from None
        else:
            sentence = annotate_text(rec["text"], resources, sentence_id=sid)
        sentences.append(sentence)
    return Corpus(sentences)


def sentence_to_record(s: AnnotatedSentence) -> dict:
    return {
        "id": s.id,
        "text": s.raw_text,
        "tokens": [
            {
                "t": t.text,
                "l": t.lemma,
                "p": t.pos.value,
                **({"e": t.entity.encode()} if t.entity else {}),
            }
            for t in s.tokens
        ],
    }


def dump_corpus(corpus: Corpus) -> str:
    return "\n".join(json.dumps(sentence_to_record(s), ensure_ascii=False) for s in corpus) + "\n"


def load_corpus(text: str, resources: Optional[TaggerResources] = None) -> Corpus:
    return ingest_corpus(text.splitlines(), resources)


def load_labels(text: str) -> LabelSet:
    """Labels file: one `{key, display, color}` record per line."""
    labels = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            labels.append(LabelDef(key=rec["key"], display=rec["display"], color=rec["color"]))
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise CorpusFormatError(f"bad label record: {exc}", line_no) from None
    return LabelSet(labels)


def dump_labels(labels: LabelSet) -> str:
    return (
        "\n".join(
            json.dumps({"key": l.key, "display": l.display, "color": l.color}, ensure_ascii=False)
            for l in labels
        )
        + "\n"
    )


def holdout_split(corpus: Corpus, fraction: float, seed: int) -> tuple[Corpus, Corpus]:
    """Deterministic disjoint (train_pool, test_pool) partition of the corpus."""
    if not 0.0 <= fraction < 1.0:
        raise ValueError("holdout fraction must be in [0, 1)")
    ids = sorted(corpus.ids())
    rng = random.Random(seed)
    rng.shuffle(ids)
    n_test = int(len(ids) * fraction)
    test_ids = set(ids[:n_test])
    train = [s for s in corpus if s.id not in test_ids]
    test = [s for s in corpus if s.id in test_ids]
    return Corpus(train), Corpus(test)
