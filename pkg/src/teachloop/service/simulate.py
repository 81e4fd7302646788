"""Scripted annotation loops for the with/without-counterfactual comparison.

A scripted annotator labels `budget` train-pool sentences per round using
the oracle label map, picking the sentences the current models are least
sure about (smallest margin to the decision threshold, ties by id). In the
with-counterfactual condition it also requests counterfactuals for every
sentence it just labeled and accepts each queued record at its target
label, trusting the generation-time judge the same way a cooperative
annotator would. After each round the session retrains and the held-out
pool is scored; round 0 records the cold-start metrics.

The scripted annotator's selection order is an artifact of this harness;
interactive users choose freely.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..annotation.store import Source
from ..counterfactual.generate import Status
from ..errors import PreconditionError
from .session import SessionInputs, TeachingSession


@dataclass(frozen=True)
class SimulationScript:
    rounds: int = 5
    budget: int = 10
    condition: str = "both"  # without_cf | with_cf | both
    seed: int = 0

    def __post_init__(self):
        if self.rounds <= 0 or self.budget <= 0:
            raise PreconditionError("rounds and budget must be positive")
        if self.condition not in ("without_cf", "with_cf", "both"):
            raise PreconditionError(f"unknown condition {self.condition!r}")


@dataclass
class ConditionReport:
    condition: str
    rounds: list[dict] = field(default_factory=list)

    @property
    def final_micro_f1(self) -> float:
        return self.rounds[-1]["micro_f1"] if self.rounds else 0.0


@dataclass
class SimulationReport:
    seed: int
    conditions: dict[str, ConditionReport] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "conditions": {
                name: {"rounds": rep.rounds, "final_micro_f1": rep.final_micro_f1}
                for name, rep in sorted(self.conditions.items())
            },
        }


def _margin_order(session: TeachingSession) -> list[str]:
    """Unlabeled train-pool ids, least-confident first, ties by id."""
    match_cfg = session.match_config()
    models = list(session.models.values())
    scored = []
    for sid in session.store.unlabeled():
        if sid not in session.train_pool:
            continue
        if models:
            sentence = session.train_pool.get(sid)
            margins = []
            for model in models:
                _, score = model.decide(sentence, session.lexicon, match_cfg)
                margins.append(abs(score - model.threshold))
            margin = min(margins)
        else:
            margin = 1.0
        scored.append((margin, sid))
    scored.sort()
    return [sid for _, sid in scored]


def _run_condition(
    inputs: SessionInputs, script: SimulationScript, with_cf: bool
) -> ConditionReport:
    session = TeachingSession(inputs)
    if not session.oracle:
        raise PreconditionError("simulation requires an oracle label map")
    missing = [s.id for s in session.train_pool if s.id not in session.oracle]
    if missing:
        raise PreconditionError(f"oracle does not cover {missing[:3]}")
    name = "with_cf" if with_cf else "without_cf"
    report = ConditionReport(condition=name)
    cold = session._evaluate(session.models)
    report.rounds.append({"round": 0, "labeled": 0, "accepted_cf": 0,
                          "micro_f1": cold.micro.f1 if cold.evaluated else 0.0})
    for round_no in range(1, script.rounds + 1):
        picked = _margin_order(session)[: script.budget]
        for sid in picked:
            session.submit_labels(sid, set(session.oracle[sid]), Source.ORACLE)
        accepted = 0
        if with_cf and session.models:
            # counterfactuals follow the annotator's attention: each batch
            # belongs to a sentence labeled this round, as in the tool flow
            for sid in picked:
                if not session.oracle.get(sid):
                    continue
                for record in session.request_counterfactuals(sid):
                    if record.status is Status.PROPOSED:
                        session.resolve_counterfactual(record.id, "accept")
                        accepted += 1
        entry = session.retrain()
        micro = entry["with_counterfactuals"]["micro"]
        report.rounds.append(
            {
                "round": round_no,
                "labeled": len(picked),
                "accepted_cf": accepted,
                "micro_f1": micro["f1"],
                "micro_precision": micro["precision"],
                "micro_recall": micro["recall"],
            }
        )
    return report


def run_simulation(inputs: SessionInputs, script: SimulationScript) -> SimulationReport:
    """Run the scripted loop under one or both conditions with one seed."""
    inputs = replace_seed(inputs, script.seed)
    report = SimulationReport(seed=script.seed)
    if script.condition in ("without_cf", "both"):
        report.conditions["without_cf"] = _run_condition(inputs, script, with_cf=False)
    if script.condition in ("with_cf", "both"):
        report.conditions["with_cf"] = _run_condition(inputs, script, with_cf=True)
    return report


def replace_seed(inputs: SessionInputs, seed: int) -> SessionInputs:
    config = replace(inputs.config, seed=seed)
    return SessionInputs(
        corpus_text=inputs.corpus_text,
        labels_text=inputs.labels_text,
        lexicon_text=inputs.lexicon_text,
        phrasebook=inputs.phrasebook,
        oracle=inputs.oracle,
        config=config,
        dual_metrics=False,  # the cross-condition comparison is the report
        client_spec=inputs.client_spec,
    )
