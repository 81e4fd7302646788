"""Teaching session: state, orchestration and crash-safe persistence.

A session is one file pair on disk: `session.json` holding the complete
state (corpus, annotations, models, counterfactual queue, metrics history)
and `oplog.jsonl`, an append-only log of every mutating operation with its
arguments. Serialization is canonical (sorted keys, fixed layout), so
save -> load -> save is byte-identical and replaying the log from the
create entry reproduces the state file exactly. Nothing here reads the
clock or any other ambient state; with the mock client a session is a pure
function of its inputs and seed.

Single-writer discipline: mutating methods take the session lock; readers
work on snapshots identified by revision.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..annotation.corpus import (
    Corpus,
    holdout_split,
    load_corpus,
    load_labels,
    sentence_to_record,
)
from ..annotation.lexicon import SynonymLexicon
from ..annotation.store import AnnotationStore, Source
from ..annotation.tagger import TaggerResources, default_resources
from ..annotation.types import AnnotatedSentence, EntityTag, LabelSet, Pos, Token
from ..counterfactual.client import CompletionClient, TranscriptRecorder
from ..counterfactual.generate import (
    CandidatePhrase,
    CounterfactualRecord,
    GenerationSettings,
    Status,
    generate_counterfactuals,
)
from ..counterfactual.mock import MockCompletionClient, Phrasebook
from ..diffing import EditScript, Op, Run
from ..dsl.matcher import MatchConfig, MatchSpan, match_sentence
from ..dsl.parser import parse_pattern
from ..errors import NotFoundError, PreconditionError
from ..metrics import MetricsReport
from ..synthesis.linear import LabelModel, predict, train_label_model, evaluate_models
from ..synthesis.search import ScoredPattern, SynthesisConfig, synthesize_patterns


@dataclass
class SessionInputs:
    """Everything needed to build a session, resolved to plain data."""

    corpus_text: str
    labels_text: str
    lexicon_text: str
    phrasebook: dict[str, list[str]] = field(default_factory=dict)
    oracle: dict[str, list[str]] = field(default_factory=dict)
    annotations: dict[str, list[str]] = field(default_factory=dict)
    config: SynthesisConfig = field(default_factory=SynthesisConfig)
    dual_metrics: bool = True
    client_spec: dict = field(default_factory=lambda: {"kind": "mock"})

    def fingerprint(self) -> str:
        blob = json.dumps(
            [
                self.corpus_text,
                self.labels_text,
                self.lexicon_text,
                self.phrasebook,
                self.oracle,
                self.annotations,
                _config_to_json(self.config),
                self.dual_metrics,
                self.client_spec,
            ],
            sort_keys=True,
        ).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


def _config_to_json(config: SynthesisConfig) -> dict:
    return {
        "max_sequence_len": config.max_sequence_len,
        "max_branches": config.max_branches,
        "max_wildcards_per_seq": config.max_wildcards_per_seq,
        "beam_width": config.beam_width,
        "wildcard_cap": config.wildcard_cap,
        "epochs": config.epochs,
        "learning_rate": config.learning_rate,
        "seed": config.seed,
        "max_patterns": config.max_patterns,
        "holdout_fraction": config.holdout_fraction,
        "retrain_every": config.retrain_every,
    }


def _config_from_json(data: dict) -> SynthesisConfig:
    return SynthesisConfig(**data)


class TeachingSession:
    def __init__(self, inputs: SessionInputs, session_id: Optional[str] = None):
        self.resources: TaggerResources = default_resources()
        corpus = load_corpus(inputs.corpus_text, self.resources)
        if len(corpus) == 0:
            raise PreconditionError("corpus is empty")
        self.labels: LabelSet = load_labels(inputs.labels_text)
        if len(self.labels) == 0:
            raise PreconditionError("label set is empty")
        self.lexicon = SynonymLexicon.from_jsonl(inputs.lexicon_text)
        self.config = inputs.config
        self.dual_metrics = inputs.dual_metrics
        self.client_spec = dict(inputs.client_spec)
        self.phrasebook_data = {k: list(v) for k, v in inputs.phrasebook.items()}
        self.oracle = {k: sorted(v) for k, v in inputs.oracle.items()}

        self.session_id = session_id or f"session-{inputs.config.seed}-{inputs.fingerprint()}"
        self.train_pool, self.test_pool = holdout_split(
            corpus, inputs.config.holdout_fraction, inputs.config.seed
        )
        self.corpus = corpus
        self.store = AnnotationStore(corpus.ids(), self.labels.keys())
        self.cf_sentences: dict[str, AnnotatedSentence] = {}
        self.models: dict[str, LabelModel] = {}
        self.queue: list[CounterfactualRecord] = []
        self.metrics_history: list[dict] = []
        self.human_since_retrain = 0
        # seed annotations apply silently: they are part of the create op,
        # so they never advance the auto-retrain counter
        for sid, labs in sorted(inputs.annotations.items()):
            if sid in self.test_pool:
                continue
            self.store.set_labels(sid, set(labs), Source.HUMAN)
        self.oplog: list[dict] = [
            {"seq": 0, "op": "create", "args": _inputs_to_json(inputs)}
        ]
        self._client: Optional[CompletionClient] = None
        self._lock = threading.RLock()

    # ------------------------------------------------------------------ util

    @property
    def revision(self) -> int:
        return self.store.revision

    def match_config(self) -> MatchConfig:
        return self.config.match_config(self.resources.lemmatize)

    def client(self) -> CompletionClient:
        if self._client is None:
            kind = self.client_spec.get("kind", "mock")
            if kind == "mock":
                self._client = MockCompletionClient(
                    seed=self.client_spec.get("seed", self.config.seed),
                    lexicon=self.lexicon,
                    phrasebook=Phrasebook.from_dict(self.phrasebook_data, self.resources),
                    resources=self.resources,
                    wildcard_cap=self.config.wildcard_cap,
                )
            elif kind == "remote":
                from ..counterfactual.client import RemoteCompletionClient

                self._client = RemoteCompletionClient(
                    endpoint=self.client_spec.get("endpoint", ""),
                    model=self.client_spec.get("model", "gpt-4o"),
                )
            else:
                raise PreconditionError(f"unknown client kind {kind!r}")
        return self._client

    def attach_recorder(self) -> TranscriptRecorder:
        recorder = TranscriptRecorder(self.client())
        self._client = recorder
        return recorder

    def training_corpus(self) -> Corpus:
        return Corpus(list(self.train_pool.sentences) + list(self.cf_sentences.values()))

    def _log(self, op: str, args: dict) -> None:
        self.oplog.append({"seq": len(self.oplog), "op": op, "args": args})

    # ------------------------------------------------------------- operations

    def submit_labels(
        self, sentence_id: str, labels: set[str], source: Source = Source.HUMAN
    ) -> tuple[int, bool]:
        """Store labels; auto-retrain after every N human annotations."""
        with self._lock:
            if sentence_id in self.test_pool:
                raise PreconditionError(
                    f"sentence {sentence_id!r} is held out and cannot be labeled"
                )
            revision = self.store.set_labels(sentence_id, labels, source)
            self._log(
                "submit_labels",
                {"sentence_id": sentence_id, "labels": sorted(labels), "source": source.value},
            )
            retrained = False
            if source is Source.HUMAN:
                self.human_since_retrain += 1
                if self.human_since_retrain >= self.config.retrain_every:
                    self._retrain_locked(log_op=False)
                    retrained = True
            return revision, retrained

    def retrain(self) -> dict:
        with self._lock:
            return self._retrain_locked(log_op=True)

    def _retrain_locked(self, log_op: bool) -> dict:
        corpus = self.training_corpus()
        models, patterns, notes = self._train_from_entries(self.store.snapshot(), corpus)
        self.models = models
        with_report = self._evaluate(models)
        without_report = None
        cf_entries = self.store.entries_from_sources({Source.COUNTERFACTUAL_ACCEPTED})
        if self.dual_metrics and cf_entries:
            base_entries = self.store.entries_from_sources({Source.HUMAN, Source.ORACLE})
            base_models, _, _ = self._train_from_entries(base_entries, corpus)
            without_report = self._evaluate(base_models)
        entry = {
            "revision": self.store.revision,
            "patterns": patterns,
            "notes": notes,
            "with_counterfactuals": _report_to_json(with_report),
            "without_counterfactuals": _report_to_json(without_report) if without_report else None,
        }
        self.metrics_history.append(entry)
        self.human_since_retrain = 0
        if log_op:
            self._log("retrain", {})
        else:
            self._log("auto_retrain", {})
        return entry

    def _train_from_entries(self, entries: dict, corpus: Corpus):
        models: dict[str, LabelModel] = {}
        patterns: dict[str, list[str]] = {}
        notes: list[str] = []
        snapshot_store = AnnotationStore(corpus.ids(), self.labels.keys())
        for sid, e in sorted(entries.items()):
            if sid in corpus:
                snapshot_store.set_labels(sid, set(e.labels), e.source)
        for key in self.labels.keys():
            positives = snapshot_store.sentences_by_label(key)
            if not positives:
                notes.append(f"label {key!r} skipped: no positive examples")
                continue
            scored = synthesize_patterns(
                key, snapshot_store, corpus, self.lexicon, self.config,
                lemmatize=self.resources.lemmatize,
            )
            if not scored:
                notes.append(f"label {key!r} skipped: no pattern above zero F1")
                continue
            models[key] = train_label_model(
                key, scored, snapshot_store, corpus, self.lexicon, self.config,
                lemmatize=self.resources.lemmatize,
            )
            patterns[key] = [sp.canonical for sp in models[key].patterns]
        return models, patterns, notes

    def _evaluate(self, models: dict[str, LabelModel]) -> MetricsReport:
        testable = [s for s in self.test_pool if s.id in self.oracle]
        if not testable or not models:
            report = MetricsReport(evaluated=False)
            report.notes.append(
                "holdout evaluation skipped: " +
                ("no oracle labels for the test pool" if not testable else "no trained models")
            )
            return report
        return evaluate_models(
            list(models.values()),
            testable,
            {sid: set(self.oracle.get(sid, [])) for sid in (s.id for s in testable)},
            self.labels.keys(),
            self.lexicon,
            self.match_config(),
        )

    def suggestions(self, pattern_filter: Optional[str] = None) -> list[dict]:
        """Unlabeled train-pool sentences with predicted labels and match spans."""
        pattern = parse_pattern(pattern_filter) if pattern_filter else None
        match_cfg = self.match_config()
        out = []
        models = list(self.models.values())
        for sid in self.store.unlabeled():
            if sid not in self.train_pool:
                continue
            sentence = self.train_pool.get(sid)
            spans = []
            if pattern is not None:
                spans = match_sentence(pattern, sentence, self.lexicon, match_cfg)
                if not spans:
                    continue
            suggested = predict(models, sentence, self.lexicon, match_cfg)
            out.append(
                {
                    "sentence": sentence,
                    "suggested": suggested,
                    "spans": spans,
                }
            )
        return out

    def request_counterfactuals(self, sentence_id: str) -> list[CounterfactualRecord]:
        """Generate (or return already-queued) counterfactuals for a sentence."""
        with self._lock:
            existing = [r for r in self.queue if r.original_id == sentence_id]
            if existing:
                return existing
            entry = self.store.get(sentence_id)
            if entry is None or not entry.labels:
                raise PreconditionError(
                    f"sentence {sentence_id!r} must be labeled before requesting counterfactuals"
                )
            sentence = self.train_pool.get(sentence_id)
            records: list[CounterfactualRecord] = []
            for original_label in sorted(entry.labels):
                targets = [k for k in self.labels.keys() if k != original_label]
                records.extend(
                    generate_counterfactuals(
                        [sentence],
                        original_label,
                        targets,
                        list(self.models.values()),
                        self.client(),
                        self.lexicon,
                        self.resources,
                        self.labels.keys(),
                        self.match_config(),
                        GenerationSettings(),
                    )
                )
            # a text already in the corpus or queue adds no new information
            # and would skew the class priors, so duplicates are dropped
            seen = {_normalized(s.raw_text) for s in self.train_pool}
            seen.update(_normalized(r.text) for r in self.queue)
            kept = []
            for record in records:
                key = _normalized(record.text)
                if key in seen:
                    continue
                seen.add(key)
                kept.append(record)
            records = kept
            self.queue.extend(records)
            self._log("request_counterfactuals", {"sentence_id": sentence_id})
            return records

    def resolve_counterfactual(
        self, cf_id: str, decision: str, labels: Optional[set[str]] = None
    ) -> int:
        """decision: accept | reject | relabel (relabel carries explicit labels)."""
        with self._lock:
            index = next((i for i, r in enumerate(self.queue) if r.id == cf_id), None)
            if index is None:
                raise NotFoundError(f"unknown counterfactual {cf_id!r}")
            record = self.queue[index]
            if record.status is not Status.PROPOSED:
                raise PreconditionError(f"counterfactual {cf_id!r} already resolved")
            if decision == "accept":
                new_labels = {record.target_label}
                new_status = Status.ACCEPTED
            elif decision == "reject":
                new_labels = None
                new_status = Status.REJECTED
            elif decision == "relabel":
                if labels is None:
                    raise PreconditionError("relabel requires labels")
                new_labels = set(labels)
                new_status = Status.RELABELED
            else:
                raise PreconditionError(f"unknown decision {decision!r}")
            revision = self.store.revision
            if new_labels is not None:
                self.cf_sentences[record.id] = record.sentence
                self.store.register_sentence(record.id)
                revision = self.store.set_labels(
                    record.id, new_labels, Source.COUNTERFACTUAL_ACCEPTED
                )
            self.queue[index] = record.with_status(new_status)
            self._log(
                "resolve_counterfactual",
                {"cf_id": cf_id, "decision": decision,
                 "labels": sorted(labels) if labels else None},
            )
            return revision

    # ------------------------------------------------------------ persistence

    def state_json(self) -> dict:
        return {
            "session_id": self.session_id,
            "config": _config_to_json(self.config),
            "dual_metrics": self.dual_metrics,
            "client": self.client_spec,
            "labels": [
                {"key": l.key, "display": l.display, "color": l.color} for l in self.labels
            ],
            "corpus": [sentence_to_record(s) for s in self.corpus],
            "lexicon": {h: sorted(m) for h, m in self.lexicon.entries.items()},
            "phrasebook": self.phrasebook_data,
            "oracle": self.oracle,
            "train_ids": self.train_pool.ids(),
            "test_ids": self.test_pool.ids(),
            "revision": self.store.revision,
            "human_since_retrain": self.human_since_retrain,
            "annotations": {
                sid: {
                    "labels": sorted(e.labels),
                    "source": e.source.value,
                    "revision": e.revision,
                }
                for sid, e in sorted(self.store.snapshot().items())
            },
            "cf_sentences": {
                cid: sentence_to_record(s) for cid, s in sorted(self.cf_sentences.items())
            },
            "models": {
                key: _model_to_json(model) for key, model in sorted(self.models.items())
            },
            "queue": [_record_to_json(r) for r in self.queue],
            "metrics_history": self.metrics_history,
        }

    def save(self, directory: str | Path) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        state = json.dumps(self.state_json(), ensure_ascii=False, sort_keys=True, indent=2)
        (directory / "session.json").write_text(state + "\n", encoding="utf-8")
        log = "\n".join(json.dumps(e, ensure_ascii=False, sort_keys=True) for e in self.oplog)
        (directory / "oplog.jsonl").write_text(log + "\n", encoding="utf-8")

    @staticmethod
    def load(directory: str | Path) -> "TeachingSession":
        directory = Path(directory)
        state = json.loads((directory / "session.json").read_text(encoding="utf-8"))
        oplog_text = (directory / "oplog.jsonl").read_text(encoding="utf-8")
        session = _session_from_state(state)
        session.oplog = [json.loads(line) for line in oplog_text.splitlines() if line.strip()]
        return session

    @staticmethod
    def replay(directory: str | Path) -> "TeachingSession":
        """Rebuild a session by re-running its operation log from scratch."""
        directory = Path(directory)
        oplog_text = (directory / "oplog.jsonl").read_text(encoding="utf-8")
        entries = [json.loads(line) for line in oplog_text.splitlines() if line.strip()]
        if not entries or entries[0]["op"] != "create":
            raise PreconditionError("operation log must start with a create entry")
        session = TeachingSession(_inputs_from_json(entries[0]["args"]))
        for entry in entries[1:]:
            op, args = entry["op"], entry["args"]
            if op == "submit_labels":
                session.submit_labels(
                    args["sentence_id"], set(args["labels"]), Source(args["source"])
                )
            elif op == "retrain":
                session.retrain()
            elif op == "auto_retrain":
                pass  # re-fired by the triggering submit_labels
            elif op == "request_counterfactuals":
                session.request_counterfactuals(args["sentence_id"])
            elif op == "resolve_counterfactual":
                session.resolve_counterfactual(
                    args["cf_id"], args["decision"],
                    set(args["labels"]) if args.get("labels") else None,
                )
            else:
                raise PreconditionError(f"unknown op {op!r} in log")
        return session


# ------------------------------------------------------------- serialization


def _normalized(text: str) -> str:
    return " ".join(text.lower().split())


def _inputs_to_json(inputs: SessionInputs) -> dict:
    return {
        "corpus_text": inputs.corpus_text,
        "labels_text": inputs.labels_text,
        "lexicon_text": inputs.lexicon_text,
        "phrasebook": inputs.phrasebook,
        "oracle": inputs.oracle,
        "annotations": inputs.annotations,
        "config": _config_to_json(inputs.config),
        "dual_metrics": inputs.dual_metrics,
        "client_spec": inputs.client_spec,
    }


def _inputs_from_json(data: dict) -> SessionInputs:
    return SessionInputs(
        corpus_text=data["corpus_text"],
        labels_text=data["labels_text"],
        lexicon_text=data["lexicon_text"],
        phrasebook=data.get("phrasebook", {}),
        oracle=data.get("oracle", {}),
        annotations=data.get("annotations", {}),
        config=_config_from_json(data["config"]),
        dual_metrics=data.get("dual_metrics", True),
        client_spec=data.get("client_spec", {"kind": "mock"}),
    )


def _model_to_json(model: LabelModel) -> dict:
    return {
        "label": model.label,
        "patterns": [
            {
                "pattern": sp.canonical,
                "precision": sp.precision,
                "recall": sp.recall,
                "f1": sp.f1,
                "support": sp.support,
            }
            for sp in model.patterns
        ],
        "weights": model.weights,
        "bias": model.bias,
        "threshold": model.threshold,
    }


def _model_from_json(data: dict) -> LabelModel:
    patterns = [
        ScoredPattern(
            ast=parse_pattern(p["pattern"]),
            precision=p["precision"],
            recall=p["recall"],
            f1=p["f1"],
            support=p["support"],
        )
        for p in data["patterns"]
    ]
    return LabelModel(
        label=data["label"],
        patterns=patterns,
        weights=list(data["weights"]),
        bias=data["bias"],
        threshold=data["threshold"],
    )


def _span_to_json(span: MatchSpan) -> dict:
    return {
        "sentence_id": span.sentence_id,
        "start": span.start,
        "end": span.end,
        "branch": span.branch,
        "atom_spans": [list(t) for t in span.atom_spans],
    }


def _span_from_json(data: dict) -> MatchSpan:
    return MatchSpan(
        sentence_id=data["sentence_id"],
        start=data["start"],
        end=data["end"],
        branch=data["branch"],
        atom_spans=tuple(tuple(t) for t in data["atom_spans"]),
    )


def _script_to_json(script: EditScript) -> list[dict]:
    return [{"op": r.op.value, "tokens": list(r.tokens)} for r in script.runs]


def _script_from_json(data: list[dict]) -> EditScript:
    return EditScript(tuple(Run(Op(r["op"]), tuple(r["tokens"])) for r in data))


def _record_to_json(record: CounterfactualRecord) -> dict:
    return {
        "id": record.id,
        "original_id": record.original_id,
        "original_label": record.original_label,
        "target_label": record.target_label,
        "text": record.text,
        "sentence": sentence_to_record(record.sentence),
        "included_phrase": {
            "text": record.included_phrase.text,
            "target_label": record.included_phrase.target_label,
            "satisfies_pattern": record.included_phrase.satisfies_pattern,
        },
        "pattern": record.pattern,
        "matched_span": _span_to_json(record.matched_span),
        "edit_script": _script_to_json(record.edit_script),
        "status": record.status.value,
    }


def _sentence_from_record(rec: dict) -> AnnotatedSentence:
    tokens = tuple(
        Token(
            text=t["t"],
            lemma=t["l"],
            pos=Pos(t["p"]),
            entity=EntityTag.decode(t["e"]) if t.get("e") else None,
        )
        for t in rec["tokens"]
    )
    return AnnotatedSentence(id=rec["id"], raw_text=rec["text"], tokens=tokens)


def _record_from_json(data: dict) -> CounterfactualRecord:
    return CounterfactualRecord(
        id=data["id"],
        original_id=data["original_id"],
        original_label=data["original_label"],
        target_label=data["target_label"],
        text=data["text"],
        sentence=_sentence_from_record(data["sentence"]),
        included_phrase=CandidatePhrase(
            text=data["included_phrase"]["text"],
            target_label=data["included_phrase"]["target_label"],
            satisfies_pattern=data["included_phrase"]["satisfies_pattern"],
        ),
        pattern=data["pattern"],
        matched_span=_span_from_json(data["matched_span"]),
        edit_script=_script_from_json(data["edit_script"]),
        status=Status(data["status"]),
    )


def _report_to_json(report: MetricsReport) -> dict:
    return {
        "per_label": {
            key: {
                "tp": m.tp, "fp": m.fp, "fn": m.fn,
                "precision": m.precision, "recall": m.recall, "f1": m.f1,
            }
            for key, m in sorted(report.per_label.items())
        },
        "micro": {
            "tp": report.micro.tp, "fp": report.micro.fp, "fn": report.micro.fn,
            "precision": report.micro.precision, "recall": report.micro.recall,
            "f1": report.micro.f1,
        },
        "kappa": report.kappa,
        "evaluated": report.evaluated,
        "notes": report.notes,
    }


def _session_from_state(state: dict) -> TeachingSession:
    inputs = SessionInputs(
        corpus_text="\n".join(json.dumps(r, ensure_ascii=False) for r in state["corpus"]) + "\n",
        labels_text="\n".join(
            json.dumps(l, ensure_ascii=False) for l in state["labels"]
        )
        + "\n",
        lexicon_text="\n".join(
            json.dumps({"head": h, "members": m}, ensure_ascii=False)
            for h, m in sorted(state["lexicon"].items())
        )
        + "\n",
        phrasebook=state.get("phrasebook", {}),
        oracle=state.get("oracle", {}),
        config=_config_from_json(state["config"]),
        dual_metrics=state.get("dual_metrics", True),
        client_spec=state.get("client", {"kind": "mock"}),
    )
    session = TeachingSession(inputs, session_id=state["session_id"])
    # restore pools exactly as persisted (they are derived, but pinning them
    # keeps load() independent of any future split-function change)
    session.train_pool = session.corpus.subset(state["train_ids"])
    session.test_pool = session.corpus.subset(state["test_ids"])
    session.store = AnnotationStore(session.corpus.ids(), session.labels.keys())
    session.cf_sentences = {
        cid: _sentence_from_record(rec) for cid, rec in state.get("cf_sentences", {}).items()
    }
    for cid in session.cf_sentences:
        session.store.register_sentence(cid)
    from ..annotation.store import Entry

    session.store.restore(
        {
            sid: Entry(
                labels=frozenset(entry["labels"]),
                source=Source(entry["source"]),
                revision=entry["revision"],
            )
            for sid, entry in state["annotations"].items()
        },
        state["revision"],
    )
    session.models = {
        key: _model_from_json(m) for key, m in state.get("models", {}).items()
    }
    session.queue = [_record_from_json(r) for r in state.get("queue", [])]
    session.metrics_history = list(state.get("metrics_history", []))
    session.human_since_retrain = state.get("human_since_retrain", 0)
    return session
