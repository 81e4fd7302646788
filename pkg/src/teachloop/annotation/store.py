"""Multi-label annotation store.

A sentence may carry zero, one or several labels; an entry with an empty
label set means "reviewed, none apply" and still counts as labeled. Every
mutation bumps a strictly increasing revision counter, and readers work on
snapshots so a concurrent writer never changes what they see.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum

from ..errors import NotFoundError


class Source(str, Enum):
    HUMAN = "human"
    COUNTERFACTUAL_ACCEPTED = "counterfactual_accepted"
    ORACLE = "oracle"


@dataclass(frozen=True)
class Entry:
    labels: frozenset[str]
    source: Source
    revision: int


class AnnotationStore:
    def __init__(self, sentence_ids: list[str], label_keys: list[str]):
        self._ids = set(sentence_ids)
        self._labels = set(label_keys)
        self._entries: dict[str, Entry] = {}
        self._revision = 0
        self._lock = threading.Lock()

    @property
    def revision(self) -> int:
        return self._revision

    def register_sentence(self, sentence_id: str) -> None:
        """Admit a new id (counterfactual texts get entries of their own)."""
        with self._lock:
            self._ids.add(sentence_id)

    def set_labels(self, sentence_id: str, labels: set[str], source: Source) -> int:
        if sentence_id not in self._ids:
            raise NotFoundError(f"unknown sentence id {sentence_id!r}")
        unknown = set(labels) - self._labels
        if unknown:
            raise NotFoundError(f"unknown labels {sorted(unknown)}")
        with self._lock:
            self._revision += 1
            self._entries[sentence_id] = Entry(frozenset(labels), source, self._revision)
            return self._revision

    def remove(self, sentence_id: str) -> int:
        if sentence_id not in self._entries:
            raise NotFoundError(f"sentence {sentence_id!r} has no annotation")
        with self._lock:
            self._revision += 1
            del self._entries[sentence_id]
            return self._revision

    def get(self, sentence_id: str) -> Entry | None:
        return self._entries.get(sentence_id)

    def labeled_ids(self) -> list[str]:
        return sorted(self._entries)

    def sentences_by_label(self, label: str) -> list[str]:
        if label not in self._labels:
            raise NotFoundError(f"unknown label {label!r}")
        return sorted(sid for sid, e in self._entries.items() if label in e.labels)

    def unlabeled(self) -> list[str]:
        return sorted(self._ids - set(self._entries))

    def snapshot(self) -> dict[str, Entry]:
        with self._lock:
            return dict(self._entries)

    def restore(self, entries: dict[str, Entry], revision: int) -> None:
        """Adopt persisted entries verbatim (load path only)."""
        if entries and revision < max(e.revision for e in entries.values()):
            raise NotFoundError("store revision below an entry revision")
        with self._lock:
            self._entries = dict(entries)
            self._revision = revision

    def entries_from_sources(self, sources: set[Source]) -> dict[str, Entry]:
        return {sid: e for sid, e in self._entries.items() if e.source in sources}
