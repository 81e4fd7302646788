"""Deterministic in-process client for hermetic runs.

The mock answers the three client tasks from a phrasebook of seed phrases
per label:

* candidate phrases: the target label's phrases, filtered to the ones the
  payload's pattern actually matches;
* variation: the chosen phrase spliced over the highlighted span of the
  original sentence, with span-adjacent function words adjusted from a
  fixed template table (a be-verb before a phrase that ends in a noun
  becomes "had", so "was delicious" -> "had great service");
* judge: a content-lemma vote against the phrasebook, falling back to the
  original label on ties so the mock never invents a flip.

Everything is a pure function of (payload, phrasebook, seed); two runs with
one seed produce byte-identical transcripts.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from ..annotation.tagger import TaggerResources, annotate_text, default_resources
from ..annotation.types import AnnotatedSentence, Pos
from ..dsl.matcher import MatchConfig, matches
from ..dsl.parser import parse_pattern
from ..annotation.lexicon import SynonymLexicon
from ..errors import ClientError, PreconditionError
from .client import ClientRequest, ClientResponse, Task

# span-adjacent function-word adjustments applied when splicing a phrase
# (prev-token lemma, phrase-final POS) -> replacement for the prev token
_SPLICE_TEMPLATES: dict[tuple[str, Pos], str] = {
    ("be", Pos.NOUN): "had",
    ("be", Pos.PROPN): "had",
}

_HILITE = "**"


def highlight_span(sentence: AnnotatedSentence, start: int, end: int) -> str:
    """Render the sentence with the [start, end) token span marked."""
    words = list(sentence.words)
    marked = words[:start] + [_HILITE] + words[start:end] + [_HILITE] + words[end:]
    return " ".join(marked)


def split_highlight(text: str) -> tuple[list[str], list[str], list[str]]:
    """Invert highlight_span: (before, marked, after) token lists."""
    parts = text.split()
    try:
        first = parts.index(_HILITE)
        second = parts.index(_HILITE, first + 1)
    except ValueError:
        raise ClientError(f"variation payload lacks a highlighted span: {text!r}") from None
    return parts[:first], parts[first + 1 : second], parts[second + 1 :]


@dataclass
class Phrasebook:
    """Seed phrases per label, annotated once at load time."""

    phrases: dict[str, list[AnnotatedSentence]]

    @staticmethod
    def from_dict(data: dict[str, list[str]], resources: TaggerResources | None = None) -> "Phrasebook":
        resources = resources or default_resources()
        annotated: dict[str, list[AnnotatedSentence]] = {}
        for label, texts in data.items():
            if len(texts) < 4:
                raise PreconditionError(f"phrasebook needs >= 4 seed phrases for {label!r}")
            annotated[label] = [
                annotate_text(t, resources, sentence_id=f"pb-{label}-{i}")
                for i, t in enumerate(texts)
            ]
        return Phrasebook(annotated)

    @staticmethod
    def from_json(text: str, resources: TaggerResources | None = None) -> "Phrasebook":
        return Phrasebook.from_dict(json.loads(text), resources)

    def vote_lemmas(self, label: str, lexicon: SynonymLexicon | None = None) -> frozenset[str]:
        """Content lemmas of the label's phrases, expanded through the lexicon."""
        out: set[str] = set()
        for phrase in self.phrases.get(label, []):
            for token in phrase.tokens:
                if token.pos is not Pos.OTHER:
                    out.add(token.lemma)
                    if lexicon is not None:
                        out.update(lexicon.soft_set(token.lemma))
        return frozenset(out)


class MockCompletionClient:
    def __init__(
        self,
        seed: int,
        lexicon: SynonymLexicon,
        phrasebook: Phrasebook,
        resources: TaggerResources | None = None,
        wildcard_cap: int | None = 3,
    ):
        self.seed = seed
        self.rng = random.Random(seed)
        self.lexicon = lexicon
        self.phrasebook = phrasebook
        self.resources = resources or default_resources()
        self.match_config = MatchConfig(wildcard_cap=wildcard_cap, lemmatize=self.resources.lemmatize)
        self._vote_vocab = {
            label: phrasebook.vote_lemmas(label, lexicon)
            for label in sorted(phrasebook.phrases)
        }

    def complete(self, request: ClientRequest) -> ClientResponse:
        if request.task is Task.CANDIDATE_PHRASES:
            return self._candidate_phrases(request.payload)
        if request.task is Task.GENERATE_VARIATION:
            return self._generate_variation(request.payload)
        if request.task is Task.JUDGE_LABEL:
            return self._judge(request.payload)
        raise ClientError(f"unsupported task {request.task}")

    def _candidate_phrases(self, payload: dict) -> ClientResponse:
        pattern = parse_pattern(payload["pattern"])
        target = payload["target_label"]
        keep = []
        for phrase in self.phrasebook.phrases.get(target, []):
            if matches(pattern, phrase, self.lexicon, self.match_config):
                keep.append(phrase.raw_text)
        return ClientResponse(text="[" + ", ".join(keep) + "]")

    def _generate_variation(self, payload: dict) -> ClientResponse:
        before, _, after = split_highlight(payload["original_sentence"])
        phrase = annotate_text(payload["phrase_to_include"], self.resources, "phrase")
        before = list(before)
        if before and phrase.tokens:
            prev_lemma = self.resources.lemmatize(before[-1])
            replacement = _SPLICE_TEMPLATES.get((prev_lemma, phrase.tokens[-1].pos))
            if replacement is not None:
                before[-1] = replacement
        words = before + list(phrase.words) + list(after)
        text = " ".join(words)
        label = self._vote(text, sorted(self.phrasebook.phrases), payload["original_label"])
        return ClientResponse(
            text=text,
            fields={
                "modified_sentence": text,
                "reason": f"rewritten around '{payload['phrase_to_include']}'",
                "label": label,
            },
        )

    def _judge(self, payload: dict) -> ClientResponse:
        label = self._vote(payload["sentence"], payload["labels"], payload.get("original_label", ""))
        return ClientResponse(text=label, fields={"label": label})

    def _vote(self, text: str, labels: list[str], fallback: str) -> str:
        sentence = annotate_text(text, self.resources, "vote")
        content = [t.lemma for t in sentence.tokens if t.pos is not Pos.OTHER]
        scores: list[tuple[int, str]] = []
        for label in labels:
            vocab = self._vote_vocab.get(label, frozenset())
            scores.append((sum(1 for lemma in content if lemma in vocab), label))
        if not scores:
            return fallback
        best = max(s for s, _ in scores)
        winners = [label for s, label in scores if s == best]
        if best == 0 or len(winners) > 1:
            return fallback or winners[0]
        return winners[0]
