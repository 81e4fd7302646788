import random

import pytest

from teachloop.annotation import SynonymLexicon, soft_match_set
from teachloop.errors import CorpusFormatError, PreconditionError


def test_softmatch_price_fixture(demo_lexicon):
    # the price entry plus reflexivity, nothing else
    assert soft_match_set("price", demo_lexicon) == {
        "price", "purchase", "pricey", "cheap", "cost", "pricing",
    }


def test_unknown_word_reflexive_singleton(demo_lexicon):
    assert soft_match_set("zyxx", demo_lexicon) == {"zyxx"}


def test_case_normalization(demo_lexicon):
    assert soft_match_set("Pricing", demo_lexicon) == soft_match_set("pricing", demo_lexicon)


def test_empty_word_rejected(demo_lexicon):
    with pytest.raises(PreconditionError):
        soft_match_set("", demo_lexicon)


def test_reflexivity_for_all_words():
    rng = random.Random(5)
    vocab = ["a1", "b2", "c3", "d4", "e5"]
    for _ in range(50):
        heads = rng.sample(vocab, rng.randint(1, 3))
        lex = SynonymLexicon.from_pairs(
            (h, set(rng.sample(vocab, rng.randint(0, 3)))) for h in heads
        )
        for w in vocab + ["unseen"]:
            assert w in soft_match_set(w, lex)


def test_member_closure_without_head_entry():
    lex = SynonymLexicon.from_pairs([("delicious", ["tasty", "scrumptious"])])
    # members without their own entry inherit the group
    assert soft_match_set("scrumptious", lex) == {"delicious", "tasty", "scrumptious"}


def test_head_entries_stay_authoritative():
    lex = SynonymLexicon.from_pairs(
        [("good", ["great", "cheap"]), ("cheap", ["affordable"])]
    )
    # "cheap" has its own entry; membership in the good group must not leak in
    assert soft_match_set("cheap", lex) == {"cheap", "affordable"}
    assert "cheap" in soft_match_set("good", lex)
    assert "great" not in soft_match_set("cheap", lex)


def test_jsonl_round_trip(demo_lexicon):
    text = demo_lexicon.to_jsonl()
    again = SynonymLexicon.from_jsonl(text)
    assert again.entries == demo_lexicon.entries


def test_bad_lexicon_line_reports_line_number():
    with pytest.raises(CorpusFormatError) as err:
        SynonymLexicon.from_jsonl('{"head": "a", "members": []}\nnot json\n')
    assert "line 2" in str(err.value)
