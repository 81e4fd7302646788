"""Bottom-up beam search over pattern sequences, then greedy alternations.

Level 1 scores every evidence atom as a one-atom sequence; each later level
extends beam survivors with one more atom or a wildcard. Sequences are
scored by F1 against the label's positive and negative examples. After the
sequence search, branches are added greedily to the best sequence while
they raise F1 and recover at least one new positive.

Scoring uses a reachability index rather than the full matcher: for every
candidate and sentence we keep the bitmask of token positions where some
match of the candidate prefix can end, starting anywhere. Extending a
candidate by an atom only needs the parent's mask, which makes beam scoring
linear in sentence length. The booleans it produces are exactly the
matcher's, and every returned pattern is rescored with the real matcher, so
stored scores never depend on this shortcut.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..annotation.corpus import Corpus
from ..annotation.lexicon import SynonymLexicon
from ..annotation.store import AnnotationStore
from ..annotation.types import AnnotatedSentence
from ..dsl.ast import PatternAst, PatternAtom, WildcardAtom
from ..dsl.matcher import MatchConfig, matches
from ..errors import PreconditionError
from .atoms import enumerate_atoms


@dataclass(frozen=True)
class SynthesisConfig:
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

    def __post_init__(self):
        for name in ("max_sequence_len", "max_branches", "beam_width", "wildcard_cap", "epochs", "max_patterns", "retrain_every"):
            if getattr(self, name) <= 0:
                raise PreconditionError(f"{name} must be positive")

    def match_config(self, lemmatize=None) -> MatchConfig:
        return MatchConfig(wildcard_cap=self.wildcard_cap, lemmatize=lemmatize)


@dataclass(frozen=True)
class ScoredPattern:
    ast: PatternAst
    precision: float
    recall: float
    f1: float
    support: int

    @property
    def canonical(self) -> str:
        return self.ast.canonical()


class _SentenceIndex:
    """Per-sentence atom-to-end-positions tables for reachability scoring."""

    def __init__(self, sentence: AnnotatedSentence, lexicon: SynonymLexicon, config: MatchConfig):
        self.n = len(sentence.tokens)
        self.full_mask = (1 << (self.n + 1)) - 1
        self.sentence = sentence
        self.lexicon = lexicon
        self.config = config
        self.entity_begin = {s: (e, t) for s, e, t in sentence.entity_runs()}
        self._atom_cache: dict[PatternAtom, list[int]] = {}

    def atom_ends(self, atom: PatternAtom) -> list[int]:
        """ends[pos] = end position reachable by consuming atom at pos, or -1."""
        cached = self._atom_cache.get(atom)
        if cached is not None:
            return cached
        from ..dsl.matcher import _atom_ends

        ends = []
        for pos in range(self.n):
            reached = _atom_ends(atom, self.sentence, pos, self.lexicon, self.config, self.entity_begin)
            ends.append(reached[0] if reached else -1)
        self._atom_cache[atom] = ends
        return ends

    def initial_mask(self, atom: PatternAtom) -> int:
        mask = 0
        for end in self.atom_ends(atom):
            if end >= 0:
                mask |= 1 << end
        return mask

    def extend_mask(self, mask: int, atom: PatternAtom) -> int:
        if isinstance(atom, WildcardAtom):
            cap = self.config.cap(self.n)
            out = mask
            for _ in range(cap):
                mask <<= 1
                out |= mask
            return out & self.full_mask
        ends = self.atom_ends(atom)
        out = 0
        pos = 0
        while mask:
            if mask & 1 and pos < self.n and ends[pos] >= 0:
                out |= 1 << ends[pos]
            mask >>= 1
            pos += 1
        return out


@dataclass
class _Candidate:
    atoms: tuple[PatternAtom, ...]
    masks: list[int]            # per-sentence reachable end positions
    matched: int                # bitmask over sentence indices
    wildcards: int
    f1: float = 0.0
    canonical: str = field(default="")


def _f1_from_matched(matched: int, pos_bits: int, neg_bits: int, n_pos: int) -> tuple[float, float, float, int]:
    tp = (matched & pos_bits).bit_count()
    fp = (matched & neg_bits).bit_count()
    fn = n_pos - tp
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f1, tp


def _labeled_sentences(store: AnnotationStore, corpus: Corpus) -> list[tuple[AnnotatedSentence, frozenset[str]]]:
    out = []
    for sid in store.labeled_ids():
        if sid in corpus:
            out.append((corpus.get(sid), store.get(sid).labels))
    return out


def synthesize_patterns(
    label: str,
    store: AnnotationStore,
    corpus: Corpus,
    lexicon: SynonymLexicon,
    config: SynthesisConfig = SynthesisConfig(),
    lemmatize=None,
) -> list[ScoredPattern]:
    """Learn the label's rule set from the annotation snapshot."""
    labeled = _labeled_sentences(store, corpus)
    positives = [s for s, labels in labeled if label in labels]
    negatives = [s for s, labels in labeled if label not in labels and labels]
    if not positives:
        raise PreconditionError(f"label {label!r} has no positive examples")

    match_cfg = config.match_config(lemmatize)
    universe = positives + negatives
    pos_bits = (1 << len(positives)) - 1
    neg_bits = ((1 << len(universe)) - 1) ^ pos_bits
    n_pos = len(positives)
    indexes = [_SentenceIndex(s, lexicon, match_cfg) for s in universe]

    atoms = enumerate_atoms(positives)

    def build_level1(atom: PatternAtom) -> _Candidate:
        masks = [idx.initial_mask(atom) for idx in indexes]
        matched = _matched_bits(masks)
        return _Candidate((atom,), masks, matched, wildcards=0)

    def extend(cand: _Candidate, atom: PatternAtom) -> _Candidate:
        masks = [idx.extend_mask(m, atom) for idx, m in zip(indexes, cand.masks)]
        matched = _matched_bits(masks)
        return _Candidate(
            cand.atoms + (atom,),
            masks,
            matched,
            wildcards=cand.wildcards + isinstance(atom, WildcardAtom),
        )

    def score(cand: _Candidate) -> _Candidate:
        _, _, f1, _ = _f1_from_matched(cand.matched, pos_bits, neg_bits, n_pos)
        cand.f1 = f1
        cand.canonical = "+".join(a.canonical() for a in cand.atoms)
        return cand

    def beam_key(cand: _Candidate) -> tuple:
        return (-cand.f1, len(cand.atoms), cand.canonical)

    def observational_dedup(cands: list[_Candidate]) -> list[_Candidate]:
        # candidates with identical per-sentence masks extend identically;
        # keep one representative so near-synonym atoms don't flood the beam
        best: dict[tuple, _Candidate] = {}
        for cand in cands:
            key = tuple(cand.masks)
            kept = best.get(key)
            if kept is None or beam_key(cand) < beam_key(kept):
                best[key] = cand
        return sorted(best.values(), key=beam_key)

    pool: dict[str, _Candidate] = {}
    beam = observational_dedup([score(build_level1(a)) for a in atoms])[: config.beam_width]
    for cand in beam:
        pool.setdefault(cand.canonical, cand)

    for _ in range(1, config.max_sequence_len):
        extensions: dict[str, _Candidate] = {}
        for cand in beam:
            options: list[PatternAtom] = list(atoms)
            if cand.wildcards < config.max_wildcards_per_seq:
                options.append(WildcardAtom())
            for atom in options:
                ext = score(extend(cand, atom))
                if ext.canonical not in extensions:
                    extensions[ext.canonical] = ext
        beam = observational_dedup(list(extensions.values()))[: config.beam_width]
        for cand in beam:
            pool.setdefault(cand.canonical, cand)

    sequences = sorted(pool.values(), key=beam_key)
    if not sequences or sequences[0].f1 <= 0.0:
        return []

    # candidate asts with their fast-path scores and matched-sentence sets
    candidates: dict[str, tuple[float, int, PatternAst, int]] = {}
    for seed in range(min(len(sequences), config.beam_width)):
        grown = _grow_alternation(sequences, seed, pos_bits, neg_bits, n_pos, config)
        if grown is not None:
            ast, f1, matched = grown
            candidates.setdefault(ast.canonical(), (f1, ast.atom_count, ast, matched))
    for cand in sequences:
        if cand.f1 <= 0.0:
            continue
        ast = PatternAst((cand.atoms,))
        candidates.setdefault(ast.canonical(), (cand.f1, len(cand.atoms), ast, cand.matched))

    # keep extensionally distinct rules: near-duplicate variants of one rule
    # would hand the downstream linear model a single collinear feature
    ranked = sorted(candidates.items(), key=lambda kv: (-kv[1][0], kv[1][1], kv[0]))
    chosen: list[PatternAst] = []
    seen_extents: set[int] = set()
    for _, (f1, _, ast, matched) in ranked:
        if matched in seen_extents:
            continue
        seen_extents.add(matched)
        chosen.append(ast)
        if len(chosen) >= config.max_patterns:
            break

    rescored = [_rescore(ast, positives, negatives, lexicon, match_cfg) for ast in chosen]
    rescored = [sp for sp in rescored if sp.f1 > 0.0]
    rescored.sort(key=lambda sp: (-sp.f1, sp.ast.atom_count, sp.canonical))
    return rescored


def _matched_bits(masks: list[int]) -> int:
    matched = 0
    for i, m in enumerate(masks):
        if m:
            matched |= 1 << i
    return matched


def _grow_alternation(
    sequences: list[_Candidate],
    seed: int,
    pos_bits: int,
    neg_bits: int,
    n_pos: int,
    config: SynthesisConfig,
) -> Optional[tuple[PatternAst, float, int]]:
    """Greedy branch growth: each added branch must raise F1 and recall."""
    base = sequences[seed]
    branches = [base]
    matched = base.matched
    cur_f1 = base.f1
    cur_tp = (matched & pos_bits).bit_count()
    while len(branches) < config.max_branches:
        best: Optional[tuple[tuple, _Candidate, int, float]] = None
        taken = {b.canonical for b in branches}
        for cand in sequences:
            if cand.canonical in taken:
                continue
            new_matched = matched | cand.matched
            new_tp = (new_matched & pos_bits).bit_count()
            if new_tp <= cur_tp:
                continue
            _, _, new_f1, _ = _f1_from_matched(new_matched, pos_bits, neg_bits, n_pos)
            if new_f1 <= cur_f1:
                continue
            key = (-new_f1, len(cand.atoms), cand.canonical)
            if best is None or key < best[0]:
                best = (key, cand, new_matched, new_f1)
        if best is None:
            break
        _, cand, matched, cur_f1 = best
        cur_tp = (matched & pos_bits).bit_count()
        branches.append(cand)
    if len(branches) < 2:
        return None
    # synthesized alternations get a normalized branch order so semantic
    # duplicates grown from different seeds collapse to one pattern
    ordered = sorted((b.atoms for b in branches), key=lambda atoms: "+".join(a.canonical() for a in atoms))
    return PatternAst(tuple(ordered)), cur_f1, matched


def _rescore(
    ast: PatternAst,
    positives: Sequence[AnnotatedSentence],
    negatives: Sequence[AnnotatedSentence],
    lexicon: SynonymLexicon,
    match_cfg: MatchConfig,
) -> ScoredPattern:
    """Recompute stored scores with the real matcher (rule faithfulness)."""
    tp = sum(1 for s in positives if matches(ast, s, lexicon, match_cfg))
    fp = sum(1 for s in negatives if matches(ast, s, lexicon, match_cfg))
    fn = len(positives) - tp
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return ScoredPattern(ast=ast, precision=p, recall=r, f1=f1, support=tp)
