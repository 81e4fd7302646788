"""Counterfactual generation at the model's decision boundary.

For a labeled sentence d the pipeline looks up the best matching rule of
its label, asks the client for phrases about each target label that still
satisfy that rule, splices them into variations, and keeps a variation only
if it (a) still matches the carried-over rule, checked by the local matcher
and never trusted from the client, and (b) is judged to carry the target
label rather than the original one. Every kept record is therefore, by
construction, a sentence the current rule set misclassifies.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Sequence

from ..annotation.lexicon import SynonymLexicon
from ..annotation.tagger import TaggerResources, annotate_text
from ..annotation.types import AnnotatedSentence
from ..diffing import EditScript, RenderSpan, render_spans, word_diff
from ..dsl.ast import PatternAst, SoftAtom
from ..dsl.matcher import MatchConfig, MatchSpan, match_sentence, matches
from ..errors import ClientError, NoMatchingRuleError, PreconditionError
from ..synthesis.linear import LabelModel
from .client import ClientRequest, ClientResponse, CompletionClient, Task
from .mock import highlight_span

logger = logging.getLogger(__name__)


class Status(str, Enum):
    PROPOSED = "proposed"
    ACCEPTED = "accepted"
    REJECTED = "rejected"
    RELABELED = "relabeled"


@dataclass(frozen=True)
class CandidatePhrase:
    text: str
    target_label: str
    satisfies_pattern: bool


@dataclass(frozen=True)
class CounterfactualRecord:
    id: str
    original_id: str
    original_label: str
    target_label: str
    text: str
    sentence: AnnotatedSentence
    included_phrase: CandidatePhrase
    pattern: str  # canonical form of the carried-over rule
    matched_span: MatchSpan
    edit_script: EditScript
    status: Status = Status.PROPOSED

    def with_status(self, status: Status) -> "CounterfactualRecord":
        return replace(self, status=status)


@dataclass(frozen=True)
class GenerationSettings:
    phrase_budget: int = 2      # variations attempted per (sentence, target)
    retry_budget: int = 2       # client retries before giving up on a call
    per_target_cap: int = 1     # records kept per (sentence, target)


def _call(client: CompletionClient, request: ClientRequest, retries: int) -> ClientResponse:
    last: Optional[Exception] = None
    for _ in range(retries + 1):
        try:
            return client.complete(request)
        except ClientError as exc:
            last = exc
    raise ClientError(f"client failed after {retries} retries: {last}")


def get_symbolic_pattern(
    d: AnnotatedSentence,
    original_label: str,
    models: Sequence[LabelModel],
    lexicon: SynonymLexicon,
    config: MatchConfig = MatchConfig(),
) -> tuple[PatternAst, MatchSpan]:
    """Highest-F1 rule of the label that matches d, with its first span."""
    model = next((m for m in models if m.label == original_label), None)
    if model is None or not model.patterns:
        raise NoMatchingRuleError(f"no trained rules for label {original_label!r}")
    ranked = sorted(model.patterns, key=lambda sp: (-sp.f1, len(sp.canonical), sp.canonical))
    for scored in ranked:
        spans = match_sentence(scored.ast, d, lexicon, config)
        if spans:
            return scored.ast, spans[0]
    raise NoMatchingRuleError(
        f"no rule of label {original_label!r} matches sentence {d.id!r}"
    )


def _softmatch_payload(pattern: PatternAst, lexicon: SynonymLexicon, lemmatize) -> dict[str, list[str]]:
    out: dict[str, list[str]] = {}
    for seq in pattern.branches:
        for atom in seq:
            if isinstance(atom, SoftAtom) and atom.word not in out:
                out[atom.word] = sorted(lexicon.soft_set(atom.word, lemmatize))
    return out


def generate_candidate_phrases(
    d: AnnotatedSentence,
    pattern: PatternAst,
    span: MatchSpan,
    original_label: str,
    target_label: str,
    client: CompletionClient,
    lexicon: SynonymLexicon,
    resources: TaggerResources,
    match_config: MatchConfig = MatchConfig(),
    settings: GenerationSettings = GenerationSettings(),
) -> list[CandidatePhrase]:
    """Ask the client for phrases, keep only the locally verified ones."""
    if target_label == original_label:
        raise PreconditionError("target label must differ from the original label")
    payload = {
        "sentence": d.raw_text,
        "phrase_to_modify": " ".join(d.words[span.start : span.end]),
        "pattern": pattern.canonical(),
        "current_label": original_label,
        "softmatch": _softmatch_payload(pattern, lexicon, match_config.lemmatize),
        "target_label": target_label,
    }
    try:
        response = _call(client, ClientRequest(Task.CANDIDATE_PHRASES, payload), settings.retry_budget)
    except ClientError as exc:
        logger.warning("candidate phrases failed for %s -> %s: %s", d.id, target_label, exc)
        return []
    phrases: list[CandidatePhrase] = []
    seen: set[str] = set()
    for raw in response.text.strip().strip("[]").split(","):
        text = raw.strip().strip("'\"")
        if not text or text.lower() in seen:
            continue
        seen.add(text.lower())
        annotated = annotate_text(text, resources, sentence_id=f"cand-{d.id}")
        ok = matches(pattern, annotated, lexicon, match_config)
        if ok:
            phrases.append(CandidatePhrase(text=text, target_label=target_label, satisfies_pattern=True))
    return phrases


def generate_variations(
    d: AnnotatedSentence,
    span: MatchSpan,
    phrases: Sequence[CandidatePhrase],
    original_label: str,
    target_label: str,
    client: CompletionClient,
    settings: GenerationSettings = GenerationSettings(),
) -> list[tuple[str, CandidatePhrase]]:
    """Rewrite d around each phrase (up to the budget); phrase must survive verbatim."""
    if not phrases:
        raise PreconditionError("generate_variations requires candidate phrases")
    highlighted = highlight_span(d, span.start, span.end)
    results: list[tuple[str, CandidatePhrase]] = []
    for phrase in phrases[: settings.phrase_budget]:
        payload = {
            "original_sentence": highlighted,
            "original_label": original_label,
            "target_label": target_label,
            "candidate_phrases": [p.text for p in phrases],
            "phrase_to_include": phrase.text,
        }
        text: Optional[str] = None
        for _ in range(2):  # retry once if the phrase is not used verbatim
            try:
                response = _call(client, ClientRequest(Task.GENERATE_VARIATION, payload), settings.retry_budget)
            except ClientError as exc:
                logger.warning("variation failed for %s -> %s: %s", d.id, target_label, exc)
                break
            candidate = response.fields.get("modified_sentence", "").strip()
            if candidate and _contains_verbatim(candidate, phrase.text):
                text = candidate
                break
        if text is not None:
            results.append((text, phrase))
    return results


def _contains_verbatim(text: str, phrase: str) -> bool:
    """Token-normalized containment: the phrase's words appear contiguously."""
    hay = [w.lower() for w in text.split()]
    needle = [w.lower() for w in phrase.split()]
    if not needle:
        return False
    return any(hay[i : i + len(needle)] == needle for i in range(len(hay) - len(needle) + 1))


def judge_label(
    text: str,
    labels: Sequence[str],
    original_label: str,
    client: CompletionClient,
    settings: GenerationSettings = GenerationSettings(),
) -> str:
    payload = {"sentence": text, "labels": list(labels), "original_label": original_label}
    response = _call(client, ClientRequest(Task.JUDGE_LABEL, payload), settings.retry_budget)
    return response.fields.get("label", response.text.strip())


def generate_counterfactuals(
    sentences: Sequence[AnnotatedSentence],
    original_label: str,
    targets: Sequence[str],
    models: Sequence[LabelModel],
    client: CompletionClient,
    lexicon: SynonymLexicon,
    resources: TaggerResources,
    label_keys: Sequence[str],
    match_config: MatchConfig = MatchConfig(),
    settings: GenerationSettings = GenerationSettings(),
) -> list[CounterfactualRecord]:
    """Label-flipping variants that still match the original label's rule.

    Per-item failures reduce the batch, never abort it.
    """
    if not targets:
        raise PreconditionError("at least one target label required")
    records: list[CounterfactualRecord] = []
    for d in sentences:
        try:
            pattern, span = get_symbolic_pattern(d, original_label, models, lexicon, match_config)
        except NoMatchingRuleError as exc:
            logger.info("skipping %s: %s", d.id, exc)
            continue
        for target in targets:
            if target == original_label:
                continue
            phrases = generate_candidate_phrases(
                d, pattern, span, original_label, target, client, lexicon,
                resources, match_config, settings,
            )
            if not phrases:
                continue
            kept = 0
            for text, phrase in generate_variations(
                d, span, phrases, original_label, target, client, settings
            ):
                if kept >= settings.per_target_cap:
                    break
                cf_id = f"cf-{d.id}-{target}-{kept + 1}"
                cf_sentence = annotate_text(text, resources, sentence_id=cf_id)
                cf_spans = match_sentence(pattern, cf_sentence, lexicon, match_config)
                if not cf_spans:
                    continue  # rule did not carry over
                try:
                    verdict = judge_label(text, label_keys, original_label, client, settings)
                except ClientError as exc:
                    logger.warning("judge failed for %s: %s", cf_id, exc)
                    continue
                if verdict != target or verdict == original_label:
                    continue  # label did not flip to the target
                records.append(
                    CounterfactualRecord(
                        id=cf_id,
                        original_id=d.id,
                        original_label=original_label,
                        target_label=target,
                        text=text,
                        sentence=cf_sentence,
                        included_phrase=phrase,
                        pattern=pattern.canonical(),
                        matched_span=cf_spans[0],
                        edit_script=word_diff(d.words, cf_sentence.words),
                        status=Status.PROPOSED,
                    )
                )
                kept += 1
    return records


def render_counterfactual(record: CounterfactualRecord, theme_color: str) -> list[RenderSpan]:
    """Display spans for a record: gray kept, black inserted, theme-colored
    rule match. The color is the original label's, so the reader sees why
    the current rules still claim this sentence."""
    return render_spans(
        record.edit_script,
        (record.matched_span.start, record.matched_span.end),
        theme_color,
    )


def validate_record(
    record: CounterfactualRecord,
    client: CompletionClient,
    lexicon: SynonymLexicon,
    label_keys: Sequence[str],
    match_config: MatchConfig = MatchConfig(),
) -> list[str]:
    """Independent recheck of the generation postconditions.

    Returns a list of violations (empty means sound). Uses the parser and
    matcher from scratch rather than anything cached on the record.
    """
    from ..dsl.parser import parse_pattern

    problems = []
    pattern = parse_pattern(record.pattern)
    if not matches(pattern, record.sentence, lexicon, match_config):
        problems.append("counterfactual no longer matches the carried-over rule")
    verdict = judge_label(record.text, label_keys, record.original_label, client)
    if verdict != record.target_label:
        problems.append(f"judge says {verdict!r}, record targets {record.target_label!r}")
    if record.target_label == record.original_label:
        problems.append("target label equals original label")
    if not _contains_verbatim(record.text, record.included_phrase.text):
        problems.append("included phrase does not occur verbatim")
    if record.edit_script.counterfactual() != list(record.sentence.words):
        problems.append("edit script does not reproduce the counterfactual tokens")
    return problems
