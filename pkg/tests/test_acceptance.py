"""Acceptance suite: each test is one release criterion at its stated
tolerance and prints one PASS/FAIL line. Run with `pytest -s` to see the
lines inline."""

import json
import random
import time
from contextlib import contextmanager

import pytest

from conftest import random_lexicon, random_pattern, random_sentence, read_fixture
from oracles import oracle_diff_cost, oracle_matches
from teachloop.annotation import SynonymLexicon, annotate_text, default_resources
from teachloop.annotation.corpus import load_labels, ingest_corpus
from teachloop.annotation.store import AnnotationStore, Source
from teachloop.counterfactual import (
    MockCompletionClient,
    Phrasebook,
    TranscriptRecorder,
    generate_counterfactuals,
    validate_record,
)
from teachloop.diffing import word_diff
from teachloop.dsl import matches, parse_pattern, print_pattern
from teachloop.metrics import ConfusionCounts, cohen_kappa, fleiss_kappa, precision_recall_f1
from teachloop.service import SessionInputs, SimulationScript, TeachingSession, run_simulation
from teachloop.synthesis import SynthesisConfig, synthesize_patterns, train_label_model


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"\nACCEPTANCE {name}: FAIL")
        raise
    print(f"\nACCEPTANCE {name}: PASS")


def test_matcher_oracle_equivalence_10k():
    with criterion("matcher-oracle-equivalence"):
        rng = random.Random(2024)
        started = time.monotonic()
        disagreements = 0
        for _ in range(10_000):
            sentence = random_sentence(rng, max_tokens=8)
            lexicon = random_lexicon(rng)
            pattern = random_pattern(rng, max_atoms=3, max_branches=2)
            got = matches(pattern, sentence, lexicon)
            want = oracle_matches(pattern, sentence, lexicon)
            disagreements += got != want
        elapsed = time.monotonic() - started
        assert disagreements == 0
        assert elapsed < 60.0, f"took {elapsed:.1f}s"


def test_parser_round_trip_quoted_patterns():
    quoted = [
        "(delicious)|(good)",
        "(friendly)+*+NOUN",
        "[sense] | (frightened)",
        "(little) | (dread)",
        "(great)+(place)",
        "(atmosphere)|(area)",
        "(cozy)|[dining]",
        "PROPN|(mourn)",
        "(frighten)|(stand)",
        "(small)",
        "(sister)",
        "$PERSON",
        "(price)+*",
    ]
    with criterion("parser-round-trip-13"):
        passed = 0
        for text in quoted:
            ast = parse_pattern(text)
            canonical = print_pattern(ast)
            assert " " not in canonical
            assert parse_pattern(canonical) == ast
            passed += 1
        assert passed == 13


def test_diff_minimality_and_worked_example():
    with criterion("diff-minimality"):
        rng = random.Random(3111)
        vocab = list("abcdefgh")
        for _ in range(1_000):
            a = [rng.choice(vocab) for _ in range(rng.randint(0, 15))]
            b = [rng.choice(vocab) for _ in range(rng.randint(0, 15))]
            assert word_diff(a, b).cost == oracle_diff_cost(a, b)
        script = word_diff(
            ["Breakfast", "was", "delicious"], ["Breakfast", "was", "pretty", "cheap"]
        )
        assert [(r.op.value, list(r.tokens)) for r in script.runs] == [
            ("keep", ["Breakfast", "was"]),
            ("delete", ["delicious"]),
            ("insert", ["pretty", "cheap"]),
        ]


def test_counterfactual_soundness_under_mock():
    with criterion("counterfactual-soundness"):
        resources = default_resources()
        corpus = ingest_corpus(read_fixture("demo", "corpus.jsonl").splitlines(), resources)
        labels = load_labels(read_fixture("demo", "labels.jsonl"))
        lexicon = SynonymLexicon.from_jsonl(read_fixture("demo", "lexicon.jsonl"))
        phrasebook = json.loads(read_fixture("demo", "phrasebook.json"))
        annotations = json.loads(read_fixture("demo", "annotations.json"))
        store = AnnotationStore(corpus.ids(), labels.keys())
        for sid, labs in sorted(annotations.items()):
            store.set_labels(sid, set(labs), Source.HUMAN)
        config = SynthesisConfig(seed=11)
        models = []
        for key in labels.keys():
            scored = synthesize_patterns(key, store, corpus, lexicon, config,
                                         lemmatize=resources.lemmatize)
            models.append(train_label_model(key, scored, store, corpus, lexicon, config,
                                            lemmatize=resources.lemmatize))
        match_cfg = config.match_config(resources.lemmatize)
        sentences = [corpus.get(sid) for sid in sorted(annotations) if "products" in annotations[sid]]

        def run():
            client = MockCompletionClient(
                seed=11, lexicon=lexicon,
                phrasebook=Phrasebook.from_dict(phrasebook, resources), resources=resources,
            )
            recorder = TranscriptRecorder(client)
            records = generate_counterfactuals(
                sentences, "products", ["price", "service", "environment"],
                models, recorder, lexicon, resources, labels.keys(), match_cfg,
            )
            return records, recorder.dump(), client

        records, transcript_one, client = run()
        assert records, "fixture produced no counterfactuals"
        for record in records:
            problems = validate_record(record, client, lexicon, labels.keys(), match_cfg)
            assert problems == [], f"{record.id}: {problems}"
        assert any(r.text == "Breakfast was pretty cheap" for r in records)
        _, transcript_two, _ = run()
        assert transcript_one.encode() == transcript_two.encode()


def test_simulation_direction_ten_seeds():
    with criterion("simulation-direction"):
        started = time.monotonic()
        oracle = {}
        for line in read_fixture("sim", "oracle.jsonl").splitlines():
            if line.strip():
                rec = json.loads(line)
                oracle[rec["id"]] = rec["labels"]
        bundled = json.loads(read_fixture("sim", "config.json"))
        inputs = SessionInputs(
            corpus_text=read_fixture("sim", "corpus.jsonl"),
            labels_text=read_fixture("sim", "labels.jsonl"),
            lexicon_text=read_fixture("sim", "lexicon.jsonl"),
            phrasebook=json.loads(read_fixture("sim", "phrasebook.json")),
            oracle=oracle,
            config=SynthesisConfig(
                beam_width=bundled["beam_width"],
                holdout_fraction=bundled["holdout_fraction"],
            ),
        )
        corpus_size = len(read_fixture("sim", "corpus.jsonl").splitlines())
        assert corpus_size == 160
        wins = 0
        for seed in range(10):
            report = run_simulation(
                inputs,
                SimulationScript(rounds=bundled["rounds"], budget=bundled["budget"], seed=seed),
            )
            with_cf = report.conditions["with_cf"].final_micro_f1
            without_cf = report.conditions["without_cf"].final_micro_f1
            wins += with_cf >= without_cf
        elapsed = time.monotonic() - started
        assert wins >= 7, f"with_cf won only {wins}/10 seeds"
        assert elapsed < 300.0, f"took {elapsed:.0f}s"


def test_metrics_pinned_fixtures():
    with criterion("metrics-fixtures"):
        # precision/recall/F1
        assert precision_recall_f1(ConfusionCounts(3, 1, 2)) == pytest.approx(
            (0.75, 0.6, 2 / 3), abs=1e-9
        )
        assert precision_recall_f1(ConfusionCounts(0, 0, 0)) == (0.0, 0.0, 0.0)
        assert precision_recall_f1(ConfusionCounts(7, 0, 0)) == (1.0, 1.0, 1.0)
        # Cohen's kappa
        assert cohen_kappa([("a", "a")] * 9 + [("b", "b")]) == pytest.approx(1.0, abs=1e-9)
        assert cohen_kappa(
            [("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")]
        ) == pytest.approx(0.0, abs=1e-9)
        twenty = [("a", "a")] * 10 + [("a", "b")] * 2 + [("b", "a")] * 3 + [("b", "b")] * 5
        assert cohen_kappa(twenty) == pytest.approx(22 / 47, abs=1e-9)
        # Fleiss' kappa
        assert fleiss_kappa([[3, 0], [3, 0], [0, 3]]) == pytest.approx(1.0, abs=1e-9)
        assert fleiss_kappa(
            [[3, 0, 0], [0, 3, 0], [1, 1, 1], [2, 1, 0], [0, 2, 1]]
        ) == pytest.approx(31 / 136, abs=1e-9)
        assert fleiss_kappa([[1, 1], [1, 1]]) == pytest.approx(-1.0, abs=1e-9)


def test_persistence_byte_identity_100_sequences(tmp_path):
    with criterion("persistence-byte-identity"):
        rng = random.Random(777)
        base_inputs = dict(
            corpus_text=read_fixture("demo", "corpus.jsonl"),
            labels_text=read_fixture("demo", "labels.jsonl"),
            lexicon_text=read_fixture("demo", "lexicon.jsonl"),
            phrasebook=json.loads(read_fixture("demo", "phrasebook.json")),
        )
        for trial in range(100):
            session = TeachingSession(
                SessionInputs(
                    **base_inputs,
                    config=SynthesisConfig(seed=trial, retrain_every=6, holdout_fraction=0.0),
                )
            )
            for _ in range(rng.randint(1, 7)):
                roll = rng.random()
                if roll < 0.55:
                    sid = rng.choice(session.train_pool.ids())
                    labels = set(rng.sample(session.labels.keys(), rng.randint(0, 2)))
                    session.submit_labels(sid, labels, Source.HUMAN)
                elif roll < 0.75:
                    session.retrain()
                elif roll < 0.9 and session.models:
                    labeled = [
                        s for s in session.store.labeled_ids()
                        if s in session.train_pool and session.store.get(s).labels
                    ]
                    if labeled:
                        session.request_counterfactuals(rng.choice(labeled))
                else:
                    from teachloop.counterfactual.generate import Status

                    proposed = [r for r in session.queue if r.status is Status.PROPOSED]
                    if proposed:
                        session.resolve_counterfactual(
                            rng.choice(proposed).id, rng.choice(["accept", "reject"])
                        )
            d1 = tmp_path / f"{trial}-a"
            d2 = tmp_path / f"{trial}-b"
            session.save(d1)
            TeachingSession.load(d1).save(d2)
            assert (d1 / "session.json").read_bytes() == (d2 / "session.json").read_bytes()
            assert (d1 / "oplog.jsonl").read_bytes() == (d2 / "oplog.jsonl").read_bytes()
