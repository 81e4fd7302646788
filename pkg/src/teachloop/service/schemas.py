"""Pydantic request/response models for the wire API."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field


class TokenModel(BaseModel):
    t: str
    l: str
    p: str
    e: Optional[str] = None


class SentenceModel(BaseModel):
    id: str
    text: str
    tokens: list[TokenModel] = Field(default_factory=list)


class LabelModelOut(BaseModel):
    key: str
    display: str
    color: str


class ConfigModel(BaseModel):
    max_sequence_len: int = 3
    max_branches: int = 3
    max_wildcards_per_seq: int = 1
    beam_width: int = 50
    wildcard_cap: int = 3
    epochs: int = 50
    learning_rate: float = 0.1
    seed: int = 0
    max_patterns: int = 5
    holdout_fraction: float = 0.2
    retrain_every: int = 10


class CreateSessionRequest(BaseModel):
    corpus_path: Optional[str] = None
    labels_path: Optional[str] = None
    lexicon_path: Optional[str] = None
    phrasebook_path: Optional[str] = None
    oracle_path: Optional[str] = None
    corpus_text: Optional[str] = None
    labels_text: Optional[str] = None
    lexicon_text: Optional[str] = None
    phrasebook: Optional[dict[str, list[str]]] = None
    oracle: Optional[dict[str, list[str]]] = None
    config: ConfigModel = Field(default_factory=ConfigModel)
    client: dict = Field(default_factory=lambda: {"kind": "mock"})
    dual_metrics: bool = True
    fixture: Optional[str] = None  # "demo" | "sim": load the bundled fixture


class SessionSummary(BaseModel):
    session_id: str
    revision: int
    labels: list[LabelModelOut]
    corpus_size: int
    train_size: int
    test_size: int
    labeled: int
    queue_size: int
    retrains: int


class MatchSpanModel(BaseModel):
    sentence_id: str
    start: int
    end: int
    branch: int
    atom_spans: list[list[int]]


class ScoredPatternModel(BaseModel):
    pattern: str
    precision: float
    recall: float
    f1: float
    support: int
    weight: Optional[float] = None


class SuggestionModel(BaseModel):
    sentence: SentenceModel
    suggested: list[tuple[str, float]]
    spans: list[MatchSpanModel]


class DataRow(BaseModel):
    sentence: SentenceModel
    labels: list[str] = Field(default_factory=list)
    source: Optional[str] = None
    suggested: list[tuple[str, float]] = Field(default_factory=list)
    spans: list[MatchSpanModel] = Field(default_factory=list)
    held_out: bool = False


class DataPage(BaseModel):
    rows: list[DataRow]
    page: int
    page_size: int
    total: int


class SubmitLabelsRequest(BaseModel):
    sentence_id: str
    labels: list[str]
    source: str = "human"
    expected_revision: Optional[int] = None


class SubmitLabelsResponse(BaseModel):
    revision: int
    retrained: bool


class RenderSpanModel(BaseModel):
    start: int
    end: int
    style: str
    color: Optional[str] = None


class EditRunModel(BaseModel):
    op: str
    tokens: list[str]


class CounterfactualModel(BaseModel):
    id: str
    original_id: str
    original_label: str
    target_label: str
    text: str
    sentence: SentenceModel
    included_phrase: str
    pattern: str
    matched_span: MatchSpanModel
    edit_script: list[EditRunModel]
    render_spans: list[RenderSpanModel]
    status: str


class ResolveRequest(BaseModel):
    decision: str  # accept | reject | relabel
    labels: Optional[list[str]] = None
    expected_revision: Optional[int] = None


class LabelMetricsModel(BaseModel):
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float


class MetricsReportModel(BaseModel):
    per_label: dict[str, LabelMetricsModel] = Field(default_factory=dict)
    micro: LabelMetricsModel = LabelMetricsModel(tp=0, fp=0, fn=0, precision=0, recall=0, f1=0)
    kappa: Optional[float] = None
    evaluated: bool = True
    notes: list[str] = Field(default_factory=list)


class RetrainResponse(BaseModel):
    revision: int
    patterns: dict[str, list[str]]
    notes: list[str]
    with_counterfactuals: MetricsReportModel
    without_counterfactuals: Optional[MetricsReportModel] = None


class SimulateRequest(BaseModel):
    rounds: int = 5
    budget: int = 8
    condition: str = "both"
    seeds: list[int] = Field(default_factory=lambda: [0])
    corpus_text: Optional[str] = None
    labels_text: Optional[str] = None
    lexicon_text: Optional[str] = None
    phrasebook: Optional[dict[str, list[str]]] = None
    oracle: Optional[dict[str, list[str]]] = None
    config: ConfigModel = Field(default_factory=ConfigModel)
    fixture: Optional[str] = "sim"


class SimulateResponse(BaseModel):
    reports: list[dict]
    wins: int
    seeds: int


# ------------------------------- stateless tools


class ParseRequest(BaseModel):
    pattern: str


class ParseResponse(BaseModel):
    canonical: str
    branches: int
    atoms: int


class MatchRequest(BaseModel):
    pattern: str
    corpus_text: Optional[str] = None
    sentences: Optional[list[SentenceModel]] = None
    lexicon_text: Optional[str] = None
    wildcard_cap: Optional[int] = None


class MatchResponse(BaseModel):
    matches: list[SuggestionModel]


class DiffRequest(BaseModel):
    a: str
    b: str


class DiffResponse(BaseModel):
    runs: list[EditRunModel]
    cost: int


class IngestRequest(BaseModel):
    corpus_text: str


class IngestResponse(BaseModel):
    sentences: list[SentenceModel]
    count: int


class SynthRequest(BaseModel):
    corpus_text: str
    labels_text: str
    lexicon_text: str
    annotations: dict[str, list[str]]
    config: ConfigModel = Field(default_factory=ConfigModel)


class SynthResponse(BaseModel):
    patterns: dict[str, list[ScoredPatternModel]]


class EvaluateRequest(BaseModel):
    corpus_text: str
    labels_text: str
    lexicon_text: str
    annotations: dict[str, list[str]]
    oracle: dict[str, list[str]]
    config: ConfigModel = Field(default_factory=ConfigModel)


class AgreementRequest(BaseModel):
    pairs: Optional[list[tuple[str, str]]] = None
    matrix: Optional[list[list[int]]] = None


class AgreementResponse(BaseModel):
    cohen_kappa: Optional[float] = None
    fleiss_kappa: Optional[float] = None
