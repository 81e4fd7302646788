import random

import pytest

from teachloop.errors import PreconditionError
from teachloop.metrics import (
    ConfusionCounts,
    MetricsReport,
    cohen_kappa,
    fleiss_kappa,
    precision_recall_f1,
)


def test_prf_hand_fixture():
    p, r, f1 = precision_recall_f1(ConfusionCounts(tp=3, fp=1, fn=2))
    assert p == pytest.approx(0.75, abs=1e-9)
    assert r == pytest.approx(0.6, abs=1e-9)
    # harmonic mean: 2 * (3/4) * (3/5) / (3/4 + 3/5) = 2/3
    assert f1 == pytest.approx(2 / 3, abs=1e-9)


def test_prf_zero_convention():
    assert precision_recall_f1(ConfusionCounts(0, 0, 0)) == (0.0, 0.0, 0.0)


def test_prf_perfect():
    assert precision_recall_f1(ConfusionCounts(5, 0, 0)) == (1.0, 1.0, 1.0)


def test_prf_rejects_negative_counts():
    with pytest.raises(PreconditionError):
        ConfusionCounts(tp=-1, fp=0, fn=0)


def test_cohen_identical_raters():
    assert cohen_kappa([("a", "a")] * 7 + [("b", "b")] * 3) == pytest.approx(1.0, abs=1e-9)


def test_cohen_chance_agreement_zero():
    # both marginals uniform over two classes, observed agreement exactly 1/2
    pairs = [("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")]
    assert cohen_kappa(pairs) == pytest.approx(0.0, abs=1e-9)


def test_cohen_twenty_pair_fixture():
    # 10 (a,a), 2 (a,b), 3 (b,a), 5 (b,b):
    #   p_o = 15/20 = 3/4
    #   marginals: left a=12 b=8; right a=13 b=7
    #   p_e = (12*13 + 8*7) / 400 = 212/400 = 53/100
    #   kappa = (75/100 - 53/100) / (47/100) = 22/47
    pairs = [("a", "a")] * 10 + [("a", "b")] * 2 + [("b", "a")] * 3 + [("b", "b")] * 5
    assert cohen_kappa(pairs) == pytest.approx(22 / 47, abs=1e-9)


def test_cohen_requires_pairs():
    with pytest.raises(PreconditionError):
        cohen_kappa([])


def test_cohen_permutation_invariance():
    rng = random.Random(37)
    pairs = [(rng.choice("abc"), rng.choice("abc")) for _ in range(60)]
    value = cohen_kappa(pairs)
    for _ in range(10):
        rng.shuffle(pairs)
        assert cohen_kappa(pairs) == pytest.approx(value, abs=1e-12)


def test_fleiss_unanimous_is_one():
    matrix = [[3, 0], [3, 0], [0, 3]]
    assert fleiss_kappa(matrix) == pytest.approx(1.0, abs=1e-9)


def test_fleiss_single_category_defined_as_one():
    assert fleiss_kappa([[3, 0], [3, 0]]) == pytest.approx(1.0, abs=1e-9)


def test_fleiss_five_item_three_rater_fixture():
    # rows [3,0,0],[0,3,0],[1,1,1],[2,1,0],[0,2,1]:
    #   P_i = 1, 1, 0, 1/3, 1/3 -> P_bar = 8/15
    #   p_j = 6/15, 7/15, 2/15 -> P_e = 89/225
    #   kappa = (120/225 - 89/225) / (136/225) = 31/136
    matrix = [[3, 0, 0], [0, 3, 0], [1, 1, 1], [2, 1, 0], [0, 2, 1]]
    assert fleiss_kappa(matrix) == pytest.approx(31 / 136, abs=1e-9)


def test_fleiss_negative_for_systematic_disagreement():
    # two raters always split: P_bar = 0, P_e = 1/2, kappa = -1
    matrix = [[1, 1], [1, 1]]
    assert fleiss_kappa(matrix) == pytest.approx(-1.0, abs=1e-9)


def test_fleiss_rejects_ragged_rows():
    with pytest.raises(PreconditionError):
        fleiss_kappa([[2, 1], [1, 1]])


def test_fleiss_requires_two_raters_and_items():
    with pytest.raises(PreconditionError):
        fleiss_kappa([[3, 0]])
    with pytest.raises(PreconditionError):
        fleiss_kappa([[1, 0], [0, 1]])


def test_kappa_bounds_random_inputs():
    rng = random.Random(41)
    for _ in range(200):
        pairs = [(rng.choice("ab"), rng.choice("ab")) for _ in range(rng.randint(2, 30))]
        try:
            value = cohen_kappa(pairs)
        except PreconditionError:
            continue
        assert -1.0 - 1e-12 <= value <= 1.0 + 1e-12
        if value == pytest.approx(1.0, abs=1e-12):
            assert all(a == b for a, b in pairs)


def test_micro_f1_matches_pair_recomputation():
    rng = random.Random(43)
    labels = ["p", "q", "r"]
    items = [f"i{i}" for i in range(25)]
    predicted = {i: {l for l in labels if rng.random() < 0.4} for i in items}
    reference = {i: {l for l in labels if rng.random() < 0.4} for i in items}
    report = MetricsReport.from_assignments(predicted, reference, labels)
    # recompute from raw (item, label) assignment pairs
    pred_pairs = {(i, l) for i, ls in predicted.items() for l in ls}
    ref_pairs = {(i, l) for i, ls in reference.items() for l in ls}
    tp = len(pred_pairs & ref_pairs)
    fp = len(pred_pairs - ref_pairs)
    fn = len(ref_pairs - pred_pairs)
    assert report.micro.tp == tp and report.micro.fp == fp and report.micro.fn == fn
    p, r, f1 = precision_recall_f1(ConfusionCounts(tp, fp, fn))
    assert report.micro.f1 == pytest.approx(f1, abs=1e-12)


def test_from_assignments_rejects_empty_reference():
    with pytest.raises(PreconditionError):
        MetricsReport.from_assignments({}, {}, ["a"])


def test_from_assignments_perfect_predictions():
    assignments = {"i1": {"a"}, "i2": {"b"}, "i3": {"a", "b"}, "i4": set()}
    report = MetricsReport.from_assignments(assignments, assignments, ["a", "b"])
    assert (report.micro.precision, report.micro.recall, report.micro.f1) == (1.0, 1.0, 1.0)
