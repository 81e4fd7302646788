"""FastAPI service wrapping the core package.

One process owns the sessions; mutating routes funnel through the session
lock. The CLI is a thin client of this app (in-process via ASGI transport
or over the network), so anything the CLI can do, the API can do.
"""

from __future__ import annotations

import json
import os
from importlib import resources as importlib_resources
from pathlib import Path
from typing import Optional

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from ..annotation.corpus import ingest_corpus, load_labels, sentence_to_record
from ..annotation.lexicon import SynonymLexicon
from ..annotation.store import Source
from ..annotation.tagger import annotate_text, default_resources
from ..counterfactual.generate import CounterfactualRecord, render_counterfactual
from ..diffing import word_diff
from ..dsl.matcher import MatchConfig, match_sentence
from ..dsl.parser import parse_pattern
from ..errors import (
    ClientError,
    CorpusFormatError,
    DuplicateIdError,
    NotFoundError,
    PatternSyntaxError,
    PreconditionError,
    StaleRevisionError,
    TeachloopError,
)
from ..metrics import cohen_kappa, fleiss_kappa
from ..synthesis.linear import evaluate_models, train_label_model
from ..synthesis.search import SynthesisConfig, synthesize_patterns
from .session import SessionInputs, TeachingSession, _report_to_json
from .simulate import SimulationScript, run_simulation
from . import schemas as S


def fixture_defaults(name: str) -> dict:
    """Bundled per-fixture knobs (synthesis config and simulation budget)."""
    base = importlib_resources.files("teachloop") / "data" / name
    config_path = base / "config.json"
    if config_path.is_file():
        return json.loads(config_path.read_text(encoding="utf-8"))
    return {}


def load_fixture_inputs(name: str, config: SynthesisConfig, client: dict, dual_metrics: bool = True) -> SessionInputs:
    base = importlib_resources.files("teachloop") / "data" / name
    if not base.is_dir():
        raise PreconditionError(f"unknown fixture {name!r}")
    oracle = {}
    oracle_path = base / "oracle.jsonl"
    if oracle_path.is_file():
        for line in oracle_path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                rec = json.loads(line)
                oracle[rec["id"]] = rec["labels"]
    phrasebook = json.loads((base / "phrasebook.json").read_text(encoding="utf-8"))
    annotations = {}
    annotations_path = base / "annotations.json"
    if annotations_path.is_file():
        annotations = json.loads(annotations_path.read_text(encoding="utf-8"))
    return SessionInputs(
        corpus_text=(base / "corpus.jsonl").read_text(encoding="utf-8"),
        labels_text=(base / "labels.jsonl").read_text(encoding="utf-8"),
        lexicon_text=(base / "lexicon.jsonl").read_text(encoding="utf-8"),
        phrasebook=phrasebook,
        oracle=oracle,
        annotations=annotations,
        config=config,
        dual_metrics=dual_metrics,
        client_spec=client,
    )


def _config_from_model(m: S.ConfigModel) -> SynthesisConfig:
    return SynthesisConfig(**m.model_dump())


def _inputs_from_request(req: S.CreateSessionRequest) -> SessionInputs:
    config = _config_from_model(req.config)
    if req.fixture:
        inputs = load_fixture_inputs(req.fixture, config, req.client, req.dual_metrics)
        return inputs

    def read(path: Optional[str], text: Optional[str], what: str) -> str:
        if text is not None:
            return text
        if path:
            return Path(path).read_text(encoding="utf-8")
        raise PreconditionError(f"missing {what}: provide a path or inline text")

    oracle = dict(req.oracle or {})
    if req.oracle_path:
        for line in Path(req.oracle_path).read_text(encoding="utf-8").splitlines():
            if line.strip():
                rec = json.loads(line)
                oracle[rec["id"]] = rec["labels"]
    phrasebook = dict(req.phrasebook or {})
    if req.phrasebook_path:
        phrasebook = json.loads(Path(req.phrasebook_path).read_text(encoding="utf-8"))
    return SessionInputs(
        corpus_text=read(req.corpus_path, req.corpus_text, "corpus"),
        labels_text=read(req.labels_path, req.labels_text, "labels"),
        lexicon_text=read(req.lexicon_path, req.lexicon_text, "lexicon"),
        phrasebook=phrasebook,
        oracle=oracle,
        config=config,
        dual_metrics=req.dual_metrics,
        client_spec=req.client,
    )


def _sentence_model(sentence) -> S.SentenceModel:
    return S.SentenceModel(**sentence_to_record(sentence))


def _span_model(span) -> S.MatchSpanModel:
    return S.MatchSpanModel(
        sentence_id=span.sentence_id,
        start=span.start,
        end=span.end,
        branch=span.branch,
        atom_spans=[list(t) for t in span.atom_spans],
    )


def _record_model(record: CounterfactualRecord, session: TeachingSession) -> S.CounterfactualModel:
    color = session.labels.get(record.original_label).color
    spans = render_counterfactual(record, color)
    return S.CounterfactualModel(
        id=record.id,
        original_id=record.original_id,
        original_label=record.original_label,
        target_label=record.target_label,
        text=record.text,
        sentence=_sentence_model(record.sentence),
        included_phrase=record.included_phrase.text,
        pattern=record.pattern,
        matched_span=_span_model(record.matched_span),
        edit_script=[S.EditRunModel(op=r.op.value, tokens=list(r.tokens)) for r in record.edit_script.runs],
        render_spans=[
            S.RenderSpanModel(start=s.start, end=s.end, style=s.style.value, color=s.color)
            for s in spans
        ],
        status=record.status.value,
    )


def _summary(session: TeachingSession) -> S.SessionSummary:
    return S.SessionSummary(
        session_id=session.session_id,
        revision=session.revision,
        labels=[S.LabelModelOut(key=l.key, display=l.display, color=l.color) for l in session.labels],
        corpus_size=len(session.corpus),
        train_size=len(session.train_pool),
        test_size=len(session.test_pool),
        labeled=len(session.store.labeled_ids()),
        queue_size=len(session.queue),
        retrains=len(session.metrics_history),
    )


def create_app(sessions_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="teachloop", version="0.1.0")
    registry: dict[str, TeachingSession] = {}
    state_dir = Path(sessions_dir or os.environ.get("TEACHLOOP_SESSIONS_DIR", ".teachloop-sessions"))

    def persist(session: TeachingSession) -> None:
        session.save(state_dir / session.session_id)

    def get_session(session_id: str) -> TeachingSession:
        if session_id in registry:
            return registry[session_id]
        on_disk = state_dir / session_id / "session.json"
        if on_disk.is_file():
            session = TeachingSession.load(state_dir / session_id)
            registry[session.session_id] = session
            return session
        raise NotFoundError(f"unknown session {session_id!r}")

    @app.exception_handler(TeachloopError)
    async def domain_error(_, exc: TeachloopError):
        status = (
            404 if isinstance(exc, NotFoundError)
            else 409 if isinstance(exc, StaleRevisionError)
            else 422 if isinstance(
                exc, (PatternSyntaxError, PreconditionError, CorpusFormatError, DuplicateIdError)
            )
            else 502 if isinstance(exc, ClientError)
            else 500
        )
        return JSONResponse(status_code=status, content={"error": type(exc).__name__, "detail": str(exc)})

    def check_revision(session: TeachingSession, expected: Optional[int]) -> None:
        if expected is not None and expected != session.revision:
            raise StaleRevisionError(
                f"expected revision {expected}, session is at {session.revision}"
            )

    # ------------------------------------------------------------- sessions

    @app.post("/api/sessions", response_model=S.SessionSummary)
    def create_session(req: S.CreateSessionRequest):
        session = TeachingSession(_inputs_from_request(req))
        registry[session.session_id] = session
        persist(session)
        return _summary(session)

    @app.get("/api/sessions", response_model=list[S.SessionSummary])
    def list_sessions():
        known = dict(registry)
        if state_dir.is_dir():
            for child in sorted(state_dir.iterdir()):
                if child.name not in known and (child / "session.json").is_file():
                    known[child.name] = get_session(child.name)
        return [_summary(s) for _, s in sorted(known.items())]

    @app.get("/api/sessions/{session_id}", response_model=S.SessionSummary)
    def session_summary(session_id: str):
        return _summary(get_session(session_id))

    @app.get("/api/sessions/{session_id}/data", response_model=S.DataPage)
    def session_data(
        session_id: str,
        page: int = 0,
        page_size: int = 25,
        pattern: Optional[str] = None,
        label: Optional[str] = None,
        status: Optional[str] = None,
    ):
        session = get_session(session_id)
        ast = parse_pattern(pattern) if pattern else None
        match_cfg = session.match_config()
        models = list(session.models.values())
        from ..synthesis.linear import predict

        rows: list[S.DataRow] = []
        for sentence in session.corpus:
            held_out = sentence.id in session.test_pool
            entry = session.store.get(sentence.id)
            if status == "labeled" and entry is None:
                continue
            if status == "unlabeled" and entry is not None:
                continue
            if label and (entry is None or label not in entry.labels):
                continue
            spans = []
            if ast is not None:
                spans = match_sentence(ast, sentence, session.lexicon, match_cfg)
                if not spans:
                    continue
            suggested = []
            if entry is None and not held_out and models:
                suggested = predict(models, sentence, session.lexicon, match_cfg)
            rows.append(
                S.DataRow(
                    sentence=_sentence_model(sentence),
                    labels=sorted(entry.labels) if entry else [],
                    source=entry.source.value if entry else None,
                    suggested=suggested,
                    spans=[_span_model(sp) for sp in spans],
                    held_out=held_out,
                )
            )
        total = len(rows)
        start = page * page_size
        return S.DataPage(rows=rows[start : start + page_size], page=page, page_size=page_size, total=total)

    @app.post("/api/sessions/{session_id}/labels", response_model=S.SubmitLabelsResponse)
    def submit_labels(session_id: str, req: S.SubmitLabelsRequest):
        session = get_session(session_id)
        check_revision(session, req.expected_revision)
        revision, retrained = session.submit_labels(
            req.sentence_id, set(req.labels), Source(req.source)
        )
        persist(session)
        return S.SubmitLabelsResponse(revision=revision, retrained=retrained)

    @app.post("/api/sessions/{session_id}/retrain", response_model=S.RetrainResponse)
    def retrain(session_id: str):
        session = get_session(session_id)
        entry = session.retrain()
        persist(session)
        return S.RetrainResponse(
            revision=entry["revision"],
            patterns=entry["patterns"],
            notes=entry["notes"],
            with_counterfactuals=S.MetricsReportModel(**entry["with_counterfactuals"]),
            without_counterfactuals=(
                S.MetricsReportModel(**entry["without_counterfactuals"])
                if entry["without_counterfactuals"]
                else None
            ),
        )

    @app.get("/api/sessions/{session_id}/patterns", response_model=dict[str, list[S.ScoredPatternModel]])
    def patterns(session_id: str):
        session = get_session(session_id)
        out: dict[str, list[S.ScoredPatternModel]] = {}
        for key, model in sorted(session.models.items()):
            out[key] = [
                S.ScoredPatternModel(
                    pattern=sp.canonical,
                    precision=sp.precision,
                    recall=sp.recall,
                    f1=sp.f1,
                    support=sp.support,
                    weight=model.weights[i],
                )
                for i, sp in enumerate(model.patterns)
            ]
        return out

    @app.post("/api/sessions/{session_id}/counterfactuals", response_model=list[S.CounterfactualModel])
    def request_counterfactuals(session_id: str, body: dict):
        session = get_session(session_id)
        sentence_id = body.get("sentence_id")
        if not sentence_id:
            raise PreconditionError("sentence_id required")
        records = session.request_counterfactuals(sentence_id)
        persist(session)
        return [_record_model(r, session) for r in records]

    @app.get("/api/sessions/{session_id}/counterfactuals", response_model=list[S.CounterfactualModel])
    def queue(session_id: str, status: Optional[str] = None):
        session = get_session(session_id)
        records = session.queue
        if status:
            records = [r for r in records if r.status.value == status]
        return [_record_model(r, session) for r in records]

    @app.post("/api/sessions/{session_id}/counterfactuals/{cf_id}/resolve", response_model=S.SubmitLabelsResponse)
    def resolve(session_id: str, cf_id: str, req: S.ResolveRequest):
        session = get_session(session_id)
        check_revision(session, req.expected_revision)
        revision = session.resolve_counterfactual(
            cf_id, req.decision, set(req.labels) if req.labels is not None else None
        )
        persist(session)
        return S.SubmitLabelsResponse(revision=revision, retrained=False)

    @app.get("/api/sessions/{session_id}/metrics")
    def metrics(session_id: str):
        return get_session(session_id).metrics_history

    # ------------------------------------------------------------ simulation

    @app.post("/api/simulate", response_model=S.SimulateResponse)
    def simulate(req: S.SimulateRequest):
        config = _config_from_model(req.config)
        rounds, budget = req.rounds, req.budget
        if req.fixture:
            defaults = fixture_defaults(req.fixture)
            if req.config == S.ConfigModel():
                merged = req.config.model_dump()
                merged.update({k: v for k, v in defaults.items() if k in merged})
                config = SynthesisConfig(**merged)
            if req.budget == S.SimulateRequest.model_fields["budget"].default:
                budget = defaults.get("budget", budget)
            if req.rounds == S.SimulateRequest.model_fields["rounds"].default:
                rounds = defaults.get("rounds", rounds)
            inputs = load_fixture_inputs(req.fixture, config, {"kind": "mock"})
        else:
            if not (req.corpus_text and req.labels_text and req.lexicon_text and req.oracle):
                raise PreconditionError("simulation needs corpus, labels, lexicon and oracle")
            inputs = SessionInputs(
                corpus_text=req.corpus_text,
                labels_text=req.labels_text,
                lexicon_text=req.lexicon_text,
                phrasebook=req.phrasebook or {},
                oracle=req.oracle,
                config=config,
            )
        reports = []
        wins = 0
        for seed in req.seeds:
            report = run_simulation(inputs, SimulationScript(
                rounds=rounds, budget=budget, condition=req.condition, seed=seed
            ))
            reports.append(report.to_json())
            if req.condition == "both":
                wins += (
                    report.conditions["with_cf"].final_micro_f1
                    >= report.conditions["without_cf"].final_micro_f1
                )
        return S.SimulateResponse(reports=reports, wins=wins, seeds=len(req.seeds))

    # ------------------------------------------------------------ tools

    @app.post("/api/tools/parse", response_model=S.ParseResponse)
    def tool_parse(req: S.ParseRequest):
        ast = parse_pattern(req.pattern)
        return S.ParseResponse(canonical=ast.canonical(), branches=len(ast.branches), atoms=ast.atom_count)

    @app.post("/api/tools/ingest", response_model=S.IngestResponse)
    def tool_ingest(req: S.IngestRequest):
        corpus = ingest_corpus(req.corpus_text.splitlines())
        return S.IngestResponse(
            sentences=[_sentence_model(s) for s in corpus], count=len(corpus)
        )

    @app.post("/api/tools/match", response_model=S.MatchResponse)
    def tool_match(req: S.MatchRequest):
        ast = parse_pattern(req.pattern)
        lexicon = SynonymLexicon.from_jsonl(req.lexicon_text) if req.lexicon_text else SynonymLexicon()
        resources = default_resources()
        config = MatchConfig(wildcard_cap=req.wildcard_cap, lemmatize=resources.lemmatize)
        if req.corpus_text:
            sentences = list(ingest_corpus(req.corpus_text.splitlines(), resources))
        elif req.sentences:
            sentences = [
                annotate_text(s.text, resources, s.id) if not s.tokens else
                next(iter(ingest_corpus([json.dumps(s.model_dump(exclude_none=True))], resources)))
                for s in req.sentences
            ]
        else:
            raise PreconditionError("provide corpus_text or sentences")
        out = []
        for sentence in sentences:
            spans = match_sentence(ast, sentence, lexicon, config)
            if spans:
                out.append(
                    S.SuggestionModel(
                        sentence=_sentence_model(sentence),
                        suggested=[],
                        spans=[_span_model(sp) for sp in spans],
                    )
                )
        return S.MatchResponse(matches=out)

    @app.post("/api/tools/diff", response_model=S.DiffResponse)
    def tool_diff(req: S.DiffRequest):
        from ..annotation.tagger import tokenize

        script = word_diff(tokenize(req.a), tokenize(req.b))
        return S.DiffResponse(
            runs=[S.EditRunModel(op=r.op.value, tokens=list(r.tokens)) for r in script.runs],
            cost=script.cost,
        )

    @app.post("/api/tools/synthesize", response_model=S.SynthResponse)
    def tool_synthesize(req: S.SynthRequest):
        resources = default_resources()
        corpus = ingest_corpus(req.corpus_text.splitlines(), resources)
        labels = load_labels(req.labels_text)
        lexicon = SynonymLexicon.from_jsonl(req.lexicon_text)
        config = _config_from_model(req.config)
        from ..annotation.store import AnnotationStore

        store = AnnotationStore(corpus.ids(), labels.keys())
        for sid, labs in sorted(req.annotations.items()):
            store.set_labels(sid, set(labs), Source.HUMAN)
        out: dict[str, list[S.ScoredPatternModel]] = {}
        for key in labels.keys():
            if not store.sentences_by_label(key):
                out[key] = []
                continue
            scored = synthesize_patterns(key, store, corpus, lexicon, config, lemmatize=resources.lemmatize)
            out[key] = [
                S.ScoredPatternModel(
                    pattern=sp.canonical, precision=sp.precision, recall=sp.recall,
                    f1=sp.f1, support=sp.support,
                )
                for sp in scored
            ]
        return S.SynthResponse(patterns=out)

    @app.post("/api/tools/evaluate", response_model=S.MetricsReportModel)
    def tool_evaluate(req: S.EvaluateRequest):
        resources = default_resources()
        corpus = ingest_corpus(req.corpus_text.splitlines(), resources)
        labels = load_labels(req.labels_text)
        lexicon = SynonymLexicon.from_jsonl(req.lexicon_text)
        config = _config_from_model(req.config)
        from ..annotation.store import AnnotationStore

        store = AnnotationStore(corpus.ids(), labels.keys())
        for sid, labs in sorted(req.annotations.items()):
            store.set_labels(sid, set(labs), Source.HUMAN)
        models = []
        for key in labels.keys():
            if not store.sentences_by_label(key):
                continue
            scored = synthesize_patterns(key, store, corpus, lexicon, config, lemmatize=resources.lemmatize)
            if scored:
                models.append(
                    train_label_model(key, scored, store, corpus, lexicon, config, lemmatize=resources.lemmatize)
                )
        test_pool = [corpus.get(sid) for sid in sorted(req.oracle) if sid in corpus]
        report = evaluate_models(
            models, test_pool, {k: set(v) for k, v in req.oracle.items()},
            labels.keys(), lexicon, config.match_config(resources.lemmatize),
        )
        return S.MetricsReportModel(**_report_to_json(report))

    @app.post("/api/tools/agreement", response_model=S.AgreementResponse)
    def tool_agreement(req: S.AgreementRequest):
        out = S.AgreementResponse()
        if req.pairs is not None:
            out.cohen_kappa = cohen_kappa([tuple(p) for p in req.pairs])
        if req.matrix is not None:
            out.fleiss_kappa = fleiss_kappa(req.matrix)
        return out

    # serve the built frontend when present
    frontend_dist = Path(__file__).resolve().parents[3] / "frontend" / "dist"
    if frontend_dist.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(frontend_dist), html=True), name="ui")

    return app
