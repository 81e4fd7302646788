"""Pattern matcher over annotated token sequences.

Atom semantics: a POS atom consumes one token with that tag; `[w]` consumes
one token whose lemma equals the lemma of w; `(w)` consumes one token whose
lemma is in w's synonym set; `$TYPE` consumes one maximal contiguous entity
run of that type (so a two-token location is consumed whole); `*` consumes
zero to `wildcard_cap` tokens. A sequence matches a contiguous token span;
an alternation matches where any branch does. Lemma comparison is
case-insensitive throughout.

`match_sentence` returns every distinct matching (start, end) span, ordered
leftmost-first and, within a start, longest-extension-first, so the head of
the list is the natural "phrase to modify". Spans that are identical except
for how wildcards split the tokens are collapsed to a single canonical
split: the earliest branch that matches, with wildcards kept as small as
the non-wildcard atoms allow.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from ..annotation.lexicon import SynonymLexicon
from ..annotation.types import AnnotatedSentence
from ..errors import IntegrityError
from .ast import EntityAtom, PatternAst, PatternAtom, PosTagAtom, SoftAtom, StemAtom, WildcardAtom


@dataclass(frozen=True)
class MatchConfig:
    """Matching knobs. wildcard_cap=None means unbounded within the sentence."""

    wildcard_cap: Optional[int] = None
    lemmatize: Optional[Callable[[str], str]] = None

    def cap(self, sentence_len: int) -> int:
        return sentence_len if self.wildcard_cap is None else min(self.wildcard_cap, sentence_len)


@dataclass(frozen=True)
class MatchSpan:
    """A matched token range plus the per-atom tiling of the matched branch."""

    sentence_id: str
    start: int
    end: int
    branch: int
    # (atom_index, sub_start, sub_end); wildcard sub-spans may be empty
    atom_spans: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        pos = self.start
        for _, s, e in self.atom_spans:
            if s != pos or e < s:
                raise IntegrityError("atom sub-spans must tile the matched range")
            pos = e
        if pos != self.end:
            raise IntegrityError("atom sub-spans must tile the matched range")


def _atom_ends(
    atom: PatternAtom,
    sentence: AnnotatedSentence,
    pos: int,
    lexicon: SynonymLexicon,
    config: MatchConfig,
    entity_begin: dict[int, tuple[int, object]],
) -> list[int]:
    """All end positions this atom can reach when starting at token `pos`."""
    n = len(sentence.tokens)
    if isinstance(atom, WildcardAtom):
        return list(range(pos, min(pos + config.cap(n), n) + 1))
    if pos >= n:
        return []
    token = sentence.tokens[pos]
    if isinstance(atom, PosTagAtom):
        return [pos + 1] if token.pos is atom.tag else []
    if isinstance(atom, StemAtom):
        want = (config.lemmatize or str.lower)(atom.word).lower()
        return [pos + 1] if token.lemma == want else []
    if isinstance(atom, SoftAtom):
        members = lexicon.soft_set(atom.word, config.lemmatize)
        return [pos + 1] if token.lemma in members else []
    if isinstance(atom, EntityAtom):
        run = entity_begin.get(pos)
        if run is not None and run[1] is atom.type:
            return [run[0]]
        return []
    raise TypeError(f"unknown atom {atom!r}")


def match_sentence(
    ast: PatternAst,
    sentence: AnnotatedSentence,
    lexicon: SynonymLexicon,
    config: MatchConfig = MatchConfig(),
) -> list[MatchSpan]:
    n = len(sentence.tokens)
    entity_begin = {s: (e, t) for s, e, t in sentence.entity_runs()}

    # (start, end) -> chosen (branch, splits, quality key)
    found: dict[tuple[int, int], tuple[int, tuple[int, ...], tuple]] = {}

    for branch_idx, seq in enumerate(ast.branches):
        for start in range(n + 1):
            # DFS over atoms collecting every boundary assignment
            stack: list[tuple[int, int, tuple[int, ...]]] = [(0, start, (start,))]
            while stack:
                atom_idx, pos, bounds = stack.pop()
                if atom_idx == len(seq):
                    end = pos
                    if end == start:
                        continue  # zero-width matches are meaningless here
                    key = (start, end)
                    quality = _split_quality(seq, bounds)
                    prev = found.get(key)
                    # earliest branch wins; within a branch prefer the split
                    # with the longest non-wildcard sub-spans
                    cand = (branch_idx, bounds, quality)
                    if prev is None or (branch_idx, _neg(quality)) < (prev[0], _neg(prev[2])):
                        found[key] = cand
                    continue
                for end_pos in _atom_ends(seq[atom_idx], sentence, pos, lexicon, config, entity_begin):
                    stack.append((atom_idx + 1, end_pos, bounds + (end_pos,)))

    spans = []
    for (start, end) in sorted(found, key=lambda k: (k[0], -k[1])):
        branch_idx, bounds, _ = found[(start, end)]
        atom_spans = tuple(
            (i, bounds[i], bounds[i + 1]) for i in range(len(bounds) - 1)
        )
        spans.append(
            MatchSpan(
                sentence_id=sentence.id,
                start=start,
                end=end,
                branch=branch_idx,
                atom_spans=atom_spans,
            )
        )
    return spans


def _split_quality(seq: tuple[PatternAtom, ...], bounds: tuple[int, ...]) -> tuple:
    lengths = tuple(
        0 if isinstance(seq[i], WildcardAtom) else bounds[i + 1] - bounds[i]
        for i in range(len(bounds) - 1)
    )
    return (sum(lengths), lengths)


def _neg(quality: tuple) -> tuple:
    total, lengths = quality
    return (-total, tuple(-x for x in lengths))


def matches(
    ast: PatternAst,
    sentence: AnnotatedSentence,
    lexicon: SynonymLexicon,
    config: MatchConfig = MatchConfig(),
) -> bool:
    """True iff the pattern matches anywhere in the sentence."""
    return bool(match_sentence(ast, sentence, lexicon, config))
