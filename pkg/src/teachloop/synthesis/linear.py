"""Per-label linear models over pattern-match features.

Each label gets an independent one-vs-rest logistic model whose features
are the binary match indicators of its learned patterns. Training is plain
seeded SGD with a fixed epoch count and learning rate, so the same snapshot
and seed always produce the same weights. A sentence is assigned the label
when the squashed score crosses the threshold; with no informative features
the bias alone predicts the majority class.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from ..annotation.corpus import Corpus
from ..annotation.lexicon import SynonymLexicon
from ..annotation.store import AnnotationStore
from ..annotation.types import AnnotatedSentence
from ..dsl.matcher import MatchConfig, matches
from ..errors import PreconditionError
from ..metrics import MetricsReport
from .search import ScoredPattern, SynthesisConfig


def _sigmoid(z: float) -> float:
    z = max(-35.0, min(35.0, z))
    return 1.0 / (1.0 + math.exp(-z))


@dataclass
class LabelModel:
    label: str
    patterns: list[ScoredPattern]
    weights: list[float]
    bias: float
    threshold: float = 0.5

    def __post_init__(self):
        if len(self.patterns) != len(self.weights):
            raise PreconditionError("one weight per pattern required")
        # keep display order stable: best rule first
        order = sorted(
            range(len(self.patterns)),
            key=lambda i: (-self.patterns[i].f1, self.patterns[i].canonical),
        )
        self.patterns = [self.patterns[i] for i in order]
        self.weights = [self.weights[i] for i in order]

    def features(
        self, sentence: AnnotatedSentence, lexicon: SynonymLexicon, config: MatchConfig
    ) -> list[int]:
        return [1 if matches(sp.ast, sentence, lexicon, config) else 0 for sp in self.patterns]

    def score(self, features: Sequence[int]) -> float:
        z = self.bias + sum(w * x for w, x in zip(self.weights, features))
        return _sigmoid(z)

    def decide(
        self, sentence: AnnotatedSentence, lexicon: SynonymLexicon, config: MatchConfig
    ) -> tuple[bool, float]:
        s = self.score(self.features(sentence, lexicon, config))
        return (s >= self.threshold, s)


def train_label_model(
    label: str,
    patterns: list[ScoredPattern],
    store: AnnotationStore,
    corpus: Corpus,
    lexicon: SynonymLexicon,
    config: SynthesisConfig = SynthesisConfig(),
    lemmatize=None,
) -> LabelModel:
    if not patterns:
        raise PreconditionError("cannot train a model with no patterns")
    match_cfg = config.match_config(lemmatize)
    rows: list[tuple[list[int], int]] = []
    for sid in store.labeled_ids():
        if sid not in corpus:
            continue
        sentence = corpus.get(sid)
        x = [1 if matches(sp.ast, sentence, lexicon, match_cfg) else 0 for sp in patterns]
        y = 1 if label in store.get(sid).labels else 0
        rows.append((x, y))

    weights = [0.0] * len(patterns)
    bias = 0.0
    rng = random.Random(config.seed)
    indices = list(range(len(rows)))
    for _ in range(config.epochs):
        rng.shuffle(indices)
        for i in indices:
            x, y = rows[i]
            z = bias + sum(w * xi for w, xi in zip(weights, x))
            g = y - _sigmoid(z)
            for j, xi in enumerate(x):
                if xi:
                    weights[j] += config.learning_rate * g
            bias += config.learning_rate * g
    return LabelModel(label=label, patterns=list(patterns), weights=weights, bias=bias)


def predict(
    models: Sequence[LabelModel],
    sentence: AnnotatedSentence,
    lexicon: SynonymLexicon,
    config: MatchConfig = MatchConfig(),
) -> list[tuple[str, float]]:
    """Independent one-vs-rest decisions; may assign several labels or none."""
    out = []
    for model in models:
        hit, score = model.decide(sentence, lexicon, config)
        if hit:
            out.append((model.label, score))
    return out


def evaluate_models(
    models: Sequence[LabelModel],
    test_pool: Sequence[AnnotatedSentence],
    reference: dict[str, set[str]],
    label_keys: Sequence[str],
    lexicon: SynonymLexicon,
    config: MatchConfig = MatchConfig(),
) -> MetricsReport:
    """Micro and per-label scores of the models against reference labels."""
    if not test_pool:
        raise PreconditionError("cannot evaluate on an empty test pool")
    missing = [s.id for s in test_pool if s.id not in reference]
    if missing:
        raise PreconditionError(f"reference labels missing for {missing[:3]}")
    predicted = {
        s.id: {label for label, _ in predict(models, s, lexicon, config)} for s in test_pool
    }
    return MetricsReport.from_assignments(
        predicted, {s.id: set(reference[s.id]) for s in test_pool}, label_keys
    )
