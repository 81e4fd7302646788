"""Pluggable chat-completion client.

Three tasks flow through one interface: proposing candidate phrases,
rewriting a sentence around a phrase, and judging which label a sentence
carries. Implementations must be deterministic for a fixed (payload, seed)
in the mock case; remote backends record request/response transcripts so a
run can be replayed and re-verified offline.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Protocol

from ..errors import ClientError


class Task(str, Enum):
    CANDIDATE_PHRASES = "candidate_phrases"
    GENERATE_VARIATION = "generate_variation"
    JUDGE_LABEL = "judge_label"


@dataclass(frozen=True)
class ClientRequest:
    task: Task
    payload: dict

    def to_json(self) -> dict:
        return {"task": self.task.value, "payload": self.payload}


@dataclass(frozen=True)
class ClientResponse:
    text: str = ""
    fields: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"text": self.text, "fields": self.fields}


class CompletionClient(Protocol):
    def complete(self, request: ClientRequest) -> ClientResponse: ...


class TranscriptRecorder:
    """Wraps any client and keeps the request/response pairs in call order."""

    def __init__(self, inner: CompletionClient):
        self.inner = inner
        self.entries: list[tuple[ClientRequest, ClientResponse]] = []

    def complete(self, request: ClientRequest) -> ClientResponse:
        response = self.inner.complete(request)
        self.entries.append((request, response))
        return response

    def dump(self) -> str:
        """One request/response pair per line."""
        lines = [
            json.dumps(
                {"request": req.to_json(), "response": resp.to_json()},
                ensure_ascii=False,
                sort_keys=True,
            )
            for req, resp in self.entries
        ]
        return "\n".join(lines) + ("\n" if lines else "")


class ReplayClient:
    """Serves responses from a recorded transcript, in order, verifying requests."""

    def __init__(self, transcript_text: str):
        self.entries = []
        for line in transcript_text.splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            self.entries.append(rec)
        self._cursor = 0

    def complete(self, request: ClientRequest) -> ClientResponse:
        if self._cursor >= len(self.entries):
            raise ClientError("transcript exhausted")
        entry = self.entries[self._cursor]
        recorded = entry["request"]
        if recorded["task"] != request.task.value or recorded["payload"] != request.payload:
            raise ClientError(
                f"replay mismatch at entry {self._cursor}: expected {recorded['task']}"
            )
        self._cursor += 1
        resp = entry["response"]
        return ClientResponse(text=resp.get("text", ""), fields=resp.get("fields", {}))


_TASK_INSTRUCTIONS = {
    Task.CANDIDATE_PHRASES: (
        "Propose short phrases about the target label that satisfy the given "
        "token pattern (POS tags in capitals; [word] exact stem; (word) any "
        "listed synonym; $TYPE an entity; * any words; + joins, | alternates). "
        "Reply with a comma-separated list in square brackets."
    ),
    Task.GENERATE_VARIATION: (
        "Rewrite the sentence so it expresses the target label instead of the "
        "original one, changing as little as possible and using the given "
        "phrase verbatim. Reply with lines 'modified sentence:', 'reason:' "
        "and 'label:'."
    ),
    Task.JUDGE_LABEL: (
        "Pick the single best label for the sentence from the list. Reply "
        "with the label key only."
    ),
}


@dataclass
class RemoteCompletionClient:
    """OpenAI-compatible chat backend. Endpoint/credentials come from config
    or the TEACHLOOP_CLIENT_* environment overrides."""

    endpoint: str
    model: str = "gpt-4o"
    api_key_env: str = "TEACHLOOP_CLIENT_API_KEY"
    timeout: float = 30.0
    retry_budget: int = 2

    def complete(self, request: ClientRequest) -> ClientResponse:
        import httpx

        endpoint = os.environ.get("TEACHLOOP_CLIENT_ENDPOINT", self.endpoint)
        api_key = os.environ.get(self.api_key_env, "")
        body = {
            "model": self.model,
            "temperature": 0,
            "messages": [
                {"role": "system", "content": _TASK_INSTRUCTIONS[request.task]},
                {
                    "role": "user",
                    "content": "\n".join(
                        f"{k}: {json.dumps(v) if isinstance(v, (dict, list)) else v}"
                        for k, v in request.payload.items()
                    ),
                },
            ],
        }
        last_error: Optional[Exception] = None
        for _ in range(self.retry_budget + 1):
            try:
                resp = httpx.post(
                    f"{endpoint.rstrip('/')}/chat/completions",
                    json=body,
                    headers={"Authorization": f"Bearer {api_key}"},
                    timeout=self.timeout,
                )
                resp.raise_for_status()
                text = resp.json()["choices"][0]["message"]["content"]
                return _parse_remote(request.task, text)
            except Exception as exc:  # noqa: BLE001 - network layer boundary
                last_error = exc
        raise ClientError(f"remote client failed: {last_error}")


def _parse_remote(task: Task, text: str) -> ClientResponse:
    if task is Task.CANDIDATE_PHRASES:
        return ClientResponse(text=text.strip())
    if task is Task.JUDGE_LABEL:
        return ClientResponse(text=text.strip(), fields={"label": text.strip().splitlines()[0].strip()})
    fields = {}
    for line in text.splitlines():
        key, sep, value = line.partition(":")
        if sep:
            fields[key.strip().lower().replace(" ", "_")] = value.strip().strip("'\"")
    return ClientResponse(text=text, fields=fields)
