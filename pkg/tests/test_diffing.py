import random

import pytest

from oracles import oracle_diff_cost
from teachloop.diffing import Op, Style, render_spans, word_diff
from teachloop.errors import IntegrityError


def runs_of(script):
    return [(r.op.value, list(r.tokens)) for r in script.runs]


def test_worked_example_exact_runs():
    script = word_diff(
        ["Breakfast", "was", "delicious"],
        ["Breakfast", "was", "pretty", "cheap"],
    )
    assert runs_of(script) == [
        ("keep", ["Breakfast", "was"]),
        ("delete", ["delicious"]),
        ("insert", ["pretty", "cheap"]),
    ]
    assert script.cost == 3


def test_identical_sequences_single_keep():
    script = word_diff(["a", "b", "c"], ["a", "b", "c"])
    assert runs_of(script) == [("keep", ["a", "b", "c"])]
    assert script.cost == 0


def test_disjoint_sequences_cost_is_sum():
    script = word_diff(["a", "b"], ["x", "y", "z"])
    assert script.cost == 5
    assert runs_of(script) == [("delete", ["a", "b"]), ("insert", ["x", "y", "z"])]


def test_empty_inputs():
    assert word_diff([], []).runs == ()
    assert runs_of(word_diff(["a"], [])) == [("delete", ["a"])]
    assert runs_of(word_diff([], ["b"])) == [("insert", ["b"])]


def test_case_sensitive_surface_comparison():
    script = word_diff(["Breakfast"], ["breakfast"])
    assert script.cost == 2


def test_reconstruction_both_sides():
    rng = random.Random(23)
    vocab = list("abcdefgh")
    for _ in range(1000):
        a = [rng.choice(vocab) for _ in range(rng.randint(0, 15))]
        b = [rng.choice(vocab) for _ in range(rng.randint(0, 15))]
        script = word_diff(a, b)
        assert script.original() == a
        assert script.counterfactual() == b


def test_cost_matches_dp_oracle():
    rng = random.Random(29)
    vocab = list("abcdefgh")
    for _ in range(1000):
        a = [rng.choice(vocab) for _ in range(rng.randint(0, 15))]
        b = [rng.choice(vocab) for _ in range(rng.randint(0, 15))]
        script = word_diff(a, b)
        assert script.cost == oracle_diff_cost(a, b), (a, b)


def test_cost_symmetry():
    rng = random.Random(31)
    vocab = list("abcd")
    for _ in range(300):
        a = [rng.choice(vocab) for _ in range(rng.randint(0, 10))]
        b = [rng.choice(vocab) for _ in range(rng.randint(0, 10))]
        assert word_diff(a, b).cost == word_diff(b, a).cost


def test_longest_keep_run_is_preserved():
    # the anchored alignment keeps the longest shared slice in one run even
    # when other maximal subsequences exist
    a = ["x", "k1", "k2", "k3", "y"]
    b = ["k1", "z", "k1", "k2", "k3"]
    script = word_diff(a, b)
    keep_runs = [r for r in script.runs if r.op is Op.KEEP]
    assert max(len(r.tokens) for r in keep_runs) == 3


def test_render_spans_base_tiling():
    script = word_diff(["a", "b", "c"], ["a", "x", "c", "y"])
    spans = render_spans(script, None, None)
    base = [s for s in spans if s.style is not Style.RULE]
    covered = []
    for span in base:
        covered.extend(range(span.start, span.end))
    assert covered == [0, 1, 2, 3]


def test_render_gray_black_for_worked_example():
    script = word_diff(
        ["Breakfast", "was", "delicious"], ["Breakfast", "was", "pretty", "cheap"]
    )
    spans = render_spans(script, (3, 4), "#d97706")
    styles = [(s.start, s.end, s.style.value, s.color) for s in spans]
    assert (0, 2, "kept_gray", None) in styles
    assert (2, 4, "changed_black", None) in styles
    assert (3, 4, "rule_theme", "#d97706") in styles


def test_render_theme_overlay_on_kept_text():
    script = word_diff(["a", "b"], ["a", "b"])
    spans = render_spans(script, (0, 1), "#123456")
    assert [(s.style.value, s.start, s.end) for s in spans] == [
        ("kept_gray", 0, 2),
        ("rule_theme", 0, 1),
    ]


def test_render_no_change_all_gray():
    script = word_diff(["a", "b"], ["a", "b"])
    spans = render_spans(script, None, None)
    assert [(s.style.value, s.start, s.end) for s in spans] == [("kept_gray", 0, 2)]


def test_render_rejects_out_of_range_span():
    script = word_diff(["a"], ["a"])
    with pytest.raises(IntegrityError):
        render_spans(script, (0, 5), "#fff000")
