import random

import pytest

from conftest import random_pattern
from teachloop.dsl import parse_pattern, print_pattern
from teachloop.dsl.ast import PosTagAtom, SoftAtom, StemAtom, WildcardAtom
from teachloop.annotation.types import Pos
from teachloop.errors import PatternSyntaxError, PreconditionError

QUOTED_PATTERNS = [
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


@pytest.mark.parametrize("text", QUOTED_PATTERNS)
def test_quoted_patterns_round_trip(text):
    ast = parse_pattern(text)
    canonical = print_pattern(ast)
    assert " " not in canonical
    again = parse_pattern(canonical)
    assert again == ast
    assert print_pattern(again) == canonical


def test_sequence_with_wildcard_and_pos():
    ast = parse_pattern("(friendly)+*+NOUN")
    assert ast.branches == (
        (SoftAtom("friendly"), WildcardAtom(), PosTagAtom(Pos.NOUN)),
    )


def test_alternation_of_single_atoms_with_spaces():
    ast = parse_pattern("[sense] | (frightened)")
    assert ast.branches == ((StemAtom("sense"),), (SoftAtom("frightened"),))


def test_print_canonical_form():
    ast = parse_pattern(" (delicious) | (good) ")
    assert print_pattern(ast) == "(delicious)|(good)"
    assert print_pattern(parse_pattern("[have]")) == "[have]"


@pytest.mark.parametrize(
    "bad,fragment",
    [
        ("VERB+", "trailing operator"),
        ("VERB|", "trailing operator"),
        ("+VERB", "expected an atom"),
        ("(weep)++NOUN", "expected an atom"),
        ("(price", "unbalanced"),
        ("[sense", "unbalanced"),
        ("()", "empty atom"),
        ("[]", "empty atom"),
        ("BLORP", "unknown POS tag"),
        ("$WAT", "unknown entity type"),
        ("*", "only of wildcards"),
        ("*+*", "only of wildcards"),
        ("(a b)", "whitespace"),
    ],
)
def test_syntax_errors(bad, fragment):
    with pytest.raises(PatternSyntaxError) as err:
        parse_pattern(bad)
    assert fragment in str(err.value)


def test_syntax_error_carries_column():
    with pytest.raises(PatternSyntaxError) as err:
        parse_pattern("VERB+BLORP")
    assert err.value.column == 5


def test_empty_pattern_rejected():
    with pytest.raises(PreconditionError):
        parse_pattern("")
    with pytest.raises(PreconditionError):
        parse_pattern("   ")


def test_random_ast_round_trip():
    rng = random.Random(42)
    for _ in range(1000):
        ast = random_pattern(rng)
        text = print_pattern(ast)
        assert parse_pattern(text) == ast


def test_parse_print_parse_fixpoint():
    rng = random.Random(43)
    for _ in range(300):
        ast = random_pattern(rng)
        once = parse_pattern(print_pattern(ast))
        twice = parse_pattern(print_pattern(once))
        assert once == twice


def test_pattern_words_lowercased():
    assert print_pattern(parse_pattern("(Delicious)")) == "(delicious)"
    assert print_pattern(parse_pattern("[Sense]")) == "[sense]"
