"""Deterministic fallback annotator.

Token annotations are part of the corpus input format; this tagger exists so
the pipeline runs hermetically when records ship without precomputed tokens.
It is a lexicon + suffix-rule machine, not a statistical tagger: unknown
words degrade to identity lemmas and the OTHER tag, never to an error.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from typing import Optional

from ..errors import PreconditionError
from .types import AnnotatedSentence, EntityRole, EntityTag, EntityType, Pos, Token

_PUNCT = set(string.punctuation)


def tokenize(raw: str) -> list[str]:
    """Whitespace split, then peel leading/trailing punctuation into own tokens."""
    out: list[str] = []
    for chunk in raw.split():
        lead: list[str] = []
        trail: list[str] = []
        while chunk and chunk[0] in _PUNCT and len(chunk) > 1:
            lead.append(chunk[0])
            chunk = chunk[1:]
        while chunk and chunk[-1] in _PUNCT and len(chunk) > 1:
            trail.append(chunk[-1])
            chunk = chunk[:-1]
        out.extend(lead)
        if chunk:
            out.append(chunk)
        out.extend(reversed(trail))
    return out


@dataclass
class TaggerResources:
    """POS lexicon, lemma tables and entity gazetteer for the fallback tagger."""

    pos_lexicon: dict[str, Pos] = field(default_factory=dict)
    lemma_exceptions: dict[str, str] = field(default_factory=dict)
    # ordered (suffix, replacement, min_stem_len)
    suffix_rules: list[tuple[str, str, int]] = field(default_factory=list)
    # gazetteer phrases are stored pre-tokenized and lowercased
    gazetteer: list[tuple[tuple[str, ...], EntityType]] = field(default_factory=list)

    def lemmatize(self, word: str) -> str:
        w = word.lower()
        if not w:
            return w
        if w in self.lemma_exceptions:
            return self.lemma_exceptions[w]
        for suffix, repl, min_stem in self.suffix_rules:
            if not w.endswith(suffix) or len(w) - len(suffix) < min_stem:
                continue
            # bare plural-s must not fire on -ss/-us/-is words (glass, delicious)
            if suffix == "s" and w.endswith(("ss", "us", "is")):
                continue
            stem = w[: -len(suffix)] + repl
            # undo consonant doubling (running -> run)
            if len(stem) >= 3 and stem[-1] == stem[-2] and stem[-1] not in "aeiouls":
                stem = stem[:-1]
            # restore a dropped final e when that form is a known word
            elif stem + "e" in self.pos_lexicon:
                stem = stem + "e"
            return stem if stem else w
        return w

    def tag_pos(self, word: str, index: int) -> Pos:
        w = word.lower()
        if w in self.pos_lexicon:
            return self.pos_lexicon[w]
        if w.replace(",", "").replace(".", "").isdigit():
            return Pos.NUM
        for suffix, pos in _POS_SUFFIXES:
            if w.endswith(suffix) and len(w) > len(suffix) + 1:
                return pos
        if index > 0 and word[:1].isupper():
            return Pos.PROPN
        return Pos.OTHER


_POS_SUFFIXES: list[tuple[str, Pos]] = [
    ("ly", Pos.ADV),
    ("ous", Pos.ADJ),
    ("ful", Pos.ADJ),
    ("ive", Pos.ADJ),
    ("able", Pos.ADJ),
    ("ible", Pos.ADJ),
    ("ish", Pos.ADJ),
    ("tion", Pos.NOUN),
    ("ment", Pos.NOUN),
    ("ness", Pos.NOUN),
    ("ity", Pos.NOUN),
    ("ize", Pos.VERB),
    ("ise", Pos.VERB),
    ("ate", Pos.VERB),
    ("ify", Pos.VERB),
    ("ing", Pos.VERB),
    ("ed", Pos.VERB),
]


def annotate_text(raw: str, resources: TaggerResources, sentence_id: str = "") -> AnnotatedSentence:
    """Tokenize and annotate raw text. Total on nonempty printable input."""
    if not raw or not raw.strip():
        raise PreconditionError("cannot annotate empty text")
    words = tokenize(raw)
    entities = _scan_entities(words, resources)
    tokens = []
    for i, word in enumerate(words):
        if all(c in _PUNCT for c in word):
            lemma, pos = word, Pos.OTHER
        else:
            lemma = resources.lemmatize(word)
            pos = resources.tag_pos(word, i)
        tokens.append(Token(text=word, lemma=lemma, pos=pos, entity=entities[i]))
    return AnnotatedSentence(id=sentence_id, raw_text=raw, tokens=tuple(tokens))


def _scan_entities(
    words: list[str], resources: TaggerResources
) -> list[Optional[EntityTag]]:
    """Longest-match gazetteer scan over lowercased surface forms."""
    lowered = [w.lower() for w in words]
    tags: list[Optional[EntityTag]] = [None] * len(words)
    by_len = sorted(resources.gazetteer, key=lambda e: len(e[0]), reverse=True)
    i = 0
    while i < len(words):
        hit = None
        for phrase, etype in by_len:
            n = len(phrase)
            if n and tuple(lowered[i : i + n]) == phrase:
                hit = (n, etype)
                break
        if hit is None:
            i += 1
            continue
        n, etype = hit
        tags[i] = EntityTag(etype, EntityRole.BEGIN)
        for j in range(i + 1, i + n):
            tags[j] = EntityTag(etype, EntityRole.INSIDE)
        i += n
    return tags


def default_resources() -> TaggerResources:
    """Resources covering the shipped fixtures; callers may load richer ones."""
    pos = {}
    for tag, words in _DEFAULT_POS.items():
        for w in words:
            pos[w] = tag
    return TaggerResources(
        pos_lexicon=pos,
        lemma_exceptions=dict(_DEFAULT_LEMMA_EXCEPTIONS),
        suffix_rules=list(_DEFAULT_SUFFIX_RULES),
        gazetteer=[(tuple(p.split()), t) for p, t in _DEFAULT_GAZETTEER],
    )


_DEFAULT_SUFFIX_RULES: list[tuple[str, str, int]] = [
    ("iest", "y", 2),
    ("ies", "y", 2),
    ("sses", "ss", 2),
    ("ches", "ch", 2),
    ("shes", "sh", 2),
    ("xes", "x", 2),
    ("zes", "z", 2),
    ("ing", "", 3),
    ("ed", "", 3),
    ("s", "", 3),
]

_DEFAULT_LEMMA_EXCEPTIONS = {
    "was": "be",
    "were": "be",
    "is": "be",
    "are": "be",
    "am": "be",
    "been": "be",
    "being": "be",
    "has": "have",
    "had": "have",
    "having": "have",
    "did": "do",
    "does": "do",
    "done": "do",
    "went": "go",
    "gone": "go",
    "felt": "feel",
    "wept": "weep",
    "began": "begin",
    "begun": "begin",
    "sang": "sing",
    "better": "good",
    "best": "good",
    "overpriced": "overpriced",
    "dining": "dining",
    "charming": "charming",
    "welcoming": "welcoming",
    "cramped": "cramped",
    "seating": "seating",
    "lighting": "lighting",
    "relaxed": "relaxed",
    "serving": "serving",
    "worse": "bad",
    "worst": "bad",
    "men": "man",
    "women": "woman",
    "children": "child",
    "people": "person",
    "feet": "foot",
    "this": "this",
    "these": "this",
    "those": "that",
}

_DEFAULT_POS: dict[Pos, list[str]] = {
    Pos.AUX: ["was", "were", "is", "are", "am", "be", "been", "being", "will", "would", "can", "could", "should"],
    Pos.VERB: [
        "shop", "shopped", "loved", "love", "like", "liked", "felt", "feel", "seemed", "seem",
        "had", "have", "has", "went", "go", "came", "come", "cost", "charge", "charged",
        "served", "serve", "ordered", "order", "tasted", "taste", "recommend", "wait", "waited",
        "ate", "eat", "tried", "try", "paid", "pay", "weep", "wept", "began", "begin", "sat", "sit",
        "gave", "give", "ignored", "ignore", "checked", "check", "laugh", "laughed", "sang", "sing", "wept",
    ],
    Pos.NOUN: [
        "breakfast", "lunch", "dinner", "brunch", "bread", "price", "prices", "quality",
        "service", "staff", "waiter", "waitress", "server", "hostess", "crew", "food",
        "room", "patio", "garden", "atmosphere", "decor", "flowers", "flower", "table",
        "tables", "place", "places", "spot", "menu", "meal", "meals", "dish", "dishes",
        "wings", "tacos", "burgers", "bagels", "pancakes", "pastries", "noodles", "steaks",
        "coffee", "tea", "deal", "cost", "money", "dollars", "bill", "check", "value",
        "portions", "portion", "view", "music", "lighting", "seating", "vibe", "ambiance",
        "area", "dining", "child", "sister", "mother", "sense", "dread", "buffet", "combo",
        "night", "portion", "garden", "dollar", "decor", "serving", "party", "crowd", "bargain", "steal",
        "special", "desserts", "dessert", "soup", "salad", "drinks", "pizza", "experience",
    ],
    Pos.ADJ: [
        "delicious", "tasty", "flavorful", "yummy", "fresh", "bland", "stale", "crispy",
        "good", "great", "nice", "fine", "decent", "amazing", "wonderful",
        "cheap", "pricey", "expensive", "overpriced", "affordable", "reasonable", "costly",
        "friendly", "rude", "attentive", "helpful", "slow", "quick", "polite", "kind",
        "cozy", "noisy", "charming", "cramped", "lovely", "warm", "loud", "clean", "dirty",
        "happy", "sad", "fearful", "frightened", "little", "small", "high", "low", "other",
        "steep", "intimate", "snug", "crispy", "unfriendly", "curt", "welcoming", "dismissive",
        "reasonable", "inexpensive", "scrumptious", "yummy", "beautiful", "pleasant",
        "watery", "careless", "dingy", "quiet", "worth", "relaxed", "outrageous", "terrible",
        "real", "absolute",
        "many", "better", "best", "worse", "worst", "pretty", "generous", "tiny", "big",
    ],
    Pos.ADV: ["too", "very", "quite", "pretty", "well", "really", "fairly", "extremely", "rather", "so",
             "far", "way", "often", "never", "always"],
    Pos.NUM: ["one", "two", "three", "ten", "twenty", "hundred"],
    Pos.PRON: ["i", "we", "you", "they", "he", "she", "it", "our", "my", "their", "her", "his", "us"],
}
# "pretty" appears as both ADJ and ADV in the tables above; the dict build keeps
# the last assignment, so it tags as ADV ("pretty cheap").

_DEFAULT_GAZETTEER: list[tuple[str, EntityType]] = [
    ("houston", EntityType.LOCATION),
    ("houston , tx", EntityType.LOCATION),
    ("california", EntityType.LOCATION),
    ("new york", EntityType.LOCATION),
    ("austin", EntityType.LOCATION),
    ("yelp", EntityType.ORG),
    ("openai", EntityType.ORG),
    ("monday", EntityType.DATE),
    ("sunday", EntityType.DATE),
    ("january", EntityType.DATE),
    ("june", EntityType.DATE),
    ("alice", EntityType.PERSON),
    ("bob", EntityType.PERSON),
    ("maria", EntityType.PERSON),
]
