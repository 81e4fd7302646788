"""Synonym lexicon backing the soft-match pattern atom.

The lexicon is a static data file (one `{head, members}` record per line);
sets are keyed by lowercase headword and are always reflexive. Lookups of
absent headwords fall back to the singleton of the word itself, so soft
matching degrades to exact lemma matching rather than failing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from ..errors import CorpusFormatError, PreconditionError


@dataclass
class SynonymLexicon:
    entries: dict[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        groups = {}
        for head, members in self.entries.items():
            h = head.lower()
            groups[h] = frozenset(m.lower() for m in members) | {h}
        # member closure: words without a head entry of their own map to the
        # union of the groups listing them, so soft matching works from any
        # member. Head entries stay exactly as defined.
        fixed: dict[str, set[str]] = {}
        for group in groups.values():
            for word in group:
                fixed.setdefault(word, set()).update(group)
        for head, group in groups.items():
            fixed[head] = set(group)
        self.entries = {w: frozenset(s) for w, s in fixed.items()}

    def soft_set(self, word: str, lemmatize: Optional[Callable[[str], str]] = None) -> frozenset[str]:
        key = (lemmatize or str.lower)(word).lower()
        return self.entries.get(key, frozenset({key}))

    @staticmethod
    def from_pairs(pairs: Iterable[tuple[str, Iterable[str]]]) -> "SynonymLexicon":
        return SynonymLexicon({h: frozenset(m) for h, m in pairs})

    @staticmethod
    def from_jsonl(text: str) -> "SynonymLexicon":
        entries = {}
        for line_no, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                head = rec["head"]
                members = rec["members"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise CorpusFormatError(f"bad lexicon record: {exc}", line_no) from None
            if head.lower() in entries:
                raise CorpusFormatError(f"duplicate lexicon head {head!r}", line_no)
            entries[head.lower()] = frozenset(m.lower() for m in members)
        return SynonymLexicon(entries)

    def to_jsonl(self) -> str:
        lines = []
        for head in sorted(self.entries):
            members = sorted(self.entries[head])
            lines.append(json.dumps({"head": head, "members": members}, ensure_ascii=False))
        return "\n".join(lines) + "\n"


def soft_match_set(
    word: str,
    lexicon: SynonymLexicon,
    lemmatize: Optional[Callable[[str], str]] = None,
) -> frozenset[str]:
    """Synonym set for a word; always contains the (lemmatized) word itself."""
    if not word:
        raise PreconditionError("soft_match_set requires a nonempty word")
    return lexicon.soft_set(word, lemmatize)
