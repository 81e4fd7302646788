"""Independent reference implementations used to check the real ones.

Deliberately brute force: the matcher oracle tries every sub-span and every
wildcard split by recursion; the diff oracle computes the insert/delete
distance from the classic LCS recurrence; the synthesis oracle enumerates
the whole sequence space. None of them share code with the implementations
they check.
"""

from __future__ import annotations

from itertools import product

from teachloop.annotation.lexicon import SynonymLexicon
from teachloop.annotation.types import AnnotatedSentence
from teachloop.dsl.ast import (
    EntityAtom,
    PatternAst,
    PosTagAtom,
    SoftAtom,
    StemAtom,
    WildcardAtom,
)


def oracle_consumes(atom, sentence, start, end, lexicon, lemmatize, entity_runs) -> bool:
    """Can this atom consume exactly tokens[start:end]?"""
    if isinstance(atom, WildcardAtom):
        return end >= start
    if end - start < 1:
        return False
    if isinstance(atom, PosTagAtom):
        return end - start == 1 and sentence.tokens[start].pos is atom.tag
    if isinstance(atom, StemAtom):
        want = (lemmatize or str.lower)(atom.word).lower()
        return end - start == 1 and sentence.tokens[start].lemma == want
    if isinstance(atom, SoftAtom):
        members = lexicon.soft_set(atom.word, lemmatize)
        return end - start == 1 and sentence.tokens[start].lemma in members
    if isinstance(atom, EntityAtom):
        return (start, end, atom.type) in entity_runs
    raise TypeError(atom)


def oracle_seq_matches_exactly(seq, sentence, start, end, lexicon, lemmatize, entity_runs, cap) -> bool:
    """Does the sequence consume exactly [start, end)? Tries every split."""
    if not seq:
        return start == end
    atom = seq[0]
    limit = min(end, start + cap) if isinstance(atom, WildcardAtom) else end
    for mid in range(start, limit + 1):
        if isinstance(atom, WildcardAtom) and mid - start > cap:
            break
        if oracle_consumes(atom, sentence, start, mid, lexicon, lemmatize, entity_runs):
            if oracle_seq_matches_exactly(seq[1:], sentence, mid, end, lexicon, lemmatize, entity_runs, cap):
                return True
    return False


def oracle_spans(ast: PatternAst, sentence: AnnotatedSentence, lexicon: SynonymLexicon,
                 lemmatize=None, wildcard_cap=None) -> set[tuple[int, int]]:
    """Every (start, end) sub-span some branch consumes exactly; end > start."""
    n = len(sentence.tokens)
    cap = n if wildcard_cap is None else min(wildcard_cap, n)
    entity_runs = set(sentence.entity_runs())
    found = set()
    for start in range(n + 1):
        for end in range(start + 1, n + 1):
            for seq in ast.branches:
                if oracle_seq_matches_exactly(
                    list(seq), sentence, start, end, lexicon, lemmatize, entity_runs, cap
                ):
                    found.add((start, end))
                    break
    return found


def oracle_matches(ast, sentence, lexicon, lemmatize=None, wildcard_cap=None) -> bool:
    return bool(oracle_spans(ast, sentence, lexicon, lemmatize, wildcard_cap))


def oracle_lcs(a, b) -> int:
    """Classic bottom-up LCS length."""
    n, m = len(a), len(b)
    table = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            if a[i - 1] == b[j - 1]:
                table[i][j] = table[i - 1][j - 1] + 1
            else:
                table[i][j] = max(table[i - 1][j], table[i][j - 1])
    return table[n][m]


def oracle_diff_cost(a, b) -> int:
    """Minimal insert+delete distance."""
    return len(a) + len(b) - 2 * oracle_lcs(a, b)


def oracle_best_sequence_f1(atoms, positives, negatives, lexicon, lemmatize,
                            max_len, max_wildcards, cap) -> float:
    """Exhaustive search over sequences reachable by the beam grammar."""
    from teachloop.dsl.matcher import MatchConfig, matches

    config = MatchConfig(wildcard_cap=cap, lemmatize=lemmatize)
    pool = list(atoms) + [WildcardAtom()]
    best = 0.0
    for length in range(1, max_len + 1):
        for combo in product(pool, repeat=length):
            if isinstance(combo[0], WildcardAtom):
                continue  # beam sequences never start with a wildcard
            if sum(isinstance(a, WildcardAtom) for a in combo) > max_wildcards:
                continue
            if all(isinstance(a, WildcardAtom) for a in combo):
                continue
            ast = PatternAst((tuple(combo),))
            tp = sum(1 for s in positives if matches(ast, s, lexicon, config))
            fp = sum(1 for s in negatives if matches(ast, s, lexicon, config))
            fn = len(positives) - tp
            p = tp / (tp + fp) if tp + fp else 0.0
            r = tp / (tp + fn) if tp + fn else 0.0
            f1 = 2 * p * r / (p + r) if p + r else 0.0
            best = max(best, f1)
    return best
