from .client import (
    ClientRequest,
    ClientResponse,
    CompletionClient,
    Task,
    TranscriptRecorder,
    ReplayClient,
    RemoteCompletionClient,
)
from .mock import MockCompletionClient, Phrasebook
from .generate import (
    CandidatePhrase,
    CounterfactualRecord,
    GenerationSettings,
    Status,
    generate_candidate_phrases,
    generate_counterfactuals,
    generate_variations,
    get_symbolic_pattern,
    render_counterfactual,
    validate_record,
)

__all__ = [
    "ClientRequest",
    "ClientResponse",
    "CompletionClient",
    "Task",
    "TranscriptRecorder",
    "ReplayClient",
    "RemoteCompletionClient",
    "MockCompletionClient",
    "Phrasebook",
    "CandidatePhrase",
    "CounterfactualRecord",
    "GenerationSettings",
    "Status",
    "generate_candidate_phrases",
    "generate_counterfactuals",
    "generate_variations",
    "get_symbolic_pattern",
    "render_counterfactual",
    "validate_record",
]
