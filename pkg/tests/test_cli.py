import json

import pytest
from click.testing import CliRunner

from conftest import fixture_dir
from teachloop.cli import main


@pytest.fixture()
def runner(tmp_path, monkeypatch):
    monkeypatch.setenv("TEACHLOOP_SESSIONS_DIR", str(tmp_path / "sessions"))
    return CliRunner()


def demo_path(name):
    return str(fixture_dir("demo") / name)


def test_diff_two_row_rendering(runner):
    result = runner.invoke(
        main, ["diff", "--a", "Breakfast was delicious", "--b", "Breakfast was pretty cheap"]
    )
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert lines[0].startswith("a: Breakfast was delicious")
    assert "pretty" in lines[1] and "cheap" in lines[1]
    assert lines[2] == "cost: 3"


def test_diff_json_mode(runner):
    result = runner.invoke(
        main, ["diff", "--a", "x y", "--b", "x z", "--json"]
    )
    body = json.loads(result.output)
    assert body["cost"] == 2


def test_match_lists_demo_sentence(runner):
    result = runner.invoke(
        main,
        [
            "match", "--pattern", "(delicious)|(good)",
            "--corpus", demo_path("corpus.jsonl"),
            "--lexicon", demo_path("lexicon.jsonl"),
        ],
    )
    assert result.exit_code == 0, result.output
    assert "y01: Breakfast was [delicious]" in result.output


def test_match_bad_pattern_fails_with_synopsis(runner):
    result = runner.invoke(
        main, ["match", "--pattern", "VERB+", "--corpus", demo_path("corpus.jsonl")]
    )
    assert result.exit_code != 0
    assert "PatternSyntaxError" in result.output


def test_ingest_round_trip(runner, tmp_path):
    out = tmp_path / "annotated.jsonl"
    result = runner.invoke(
        main, ["ingest", "--corpus", demo_path("corpus.jsonl"), "--out", str(out)]
    )
    assert result.exit_code == 0, result.output
    rows = [json.loads(line) for line in out.read_text().splitlines()]
    assert len(rows) == 12
    assert all(row["tokens"] for row in rows)


def test_synth_learns_rule(runner, tmp_path):
    annotations = tmp_path / "ann.json"
    annotations.write_text(json.dumps(json.loads(
        (fixture_dir("demo") / "annotations.json").read_text()
    )))
    result = runner.invoke(
        main,
        [
            "synth",
            "--corpus", demo_path("corpus.jsonl"),
            "--labels", demo_path("labels.jsonl"),
            "--lexicon", demo_path("lexicon.jsonl"),
            "--annotations", str(annotations),
            "--seed", "11",
        ],
    )
    assert result.exit_code == 0, result.output
    assert "(delicious)|(good)" in result.output


def test_cf_reproduces_demo_batch(runner):
    result = runner.invoke(
        main, ["cf", "--fixture", "demo", "--sentence", "y01", "--seed", "11"]
    )
    assert result.exit_code == 0, result.output
    assert "Breakfast was pretty cheap" in result.output
    assert "3 counterfactual(s)" in result.output


def test_eval_outputs_micro_scores(runner, tmp_path):
    annotations = {"y01": ["products"], "y02": ["products"], "y03": ["price"],
                   "y04": ["price"], "y05": ["price"], "y06": ["price"]}
    oracle = {"y11": ["products"], "y12": ["price"]}
    ann_path = tmp_path / "ann.json"
    oracle_path = tmp_path / "oracle.json"
    ann_path.write_text(json.dumps(annotations))
    oracle_path.write_text(json.dumps(oracle))
    result = runner.invoke(
        main,
        [
            "eval",
            "--corpus", demo_path("corpus.jsonl"),
            "--labels", demo_path("labels.jsonl"),
            "--lexicon", demo_path("lexicon.jsonl"),
            "--annotations", str(ann_path),
            "--oracle", str(oracle_path),
        ],
    )
    assert result.exit_code == 0, result.output
    assert "micro:" in result.output


def test_simulate_prints_table(runner):
    result = runner.invoke(
        main, ["simulate", "--seeds", "1", "--rounds", "2"]
    )
    assert result.exit_code == 0, result.output
    assert "with_cf" in result.output
    assert "with_cf >= without_cf on" in result.output


def test_cli_and_api_agree(runner):
    # thin-adapter property: the CLI result equals the direct API payload
    from fastapi.testclient import TestClient
    from teachloop.service.app import create_app

    api = TestClient(create_app())
    direct = api.post(
        "/api/tools/diff", json={"a": "a b c", "b": "a x c"}
    ).json()
    via_cli = runner.invoke(main, ["diff", "--a", "a b c", "--b", "a x c", "--json"])
    assert json.loads(via_cli.output) == direct
