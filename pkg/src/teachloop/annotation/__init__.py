from .types import (
    Pos,
    EntityType,
    EntityRole,
    EntityTag,
    Token,
    AnnotatedSentence,
    LabelDef,
    LabelSet,
)
from .tagger import TaggerResources, annotate_text, tokenize, default_resources
from .lexicon import SynonymLexicon, soft_match_set
from .corpus import Corpus, ingest_corpus, load_corpus, dump_corpus, holdout_split
from .store import AnnotationStore, Source

__all__ = [
    "Pos",
    "EntityType",
    "EntityRole",
    "EntityTag",
    "Token",
    "AnnotatedSentence",
    "LabelDef",
    "LabelSet",
    "TaggerResources",
    "annotate_text",
    "tokenize",
    "default_resources",
    "SynonymLexicon",
    "soft_match_set",
    "Corpus",
    "ingest_corpus",
    "load_corpus",
    "dump_corpus",
    "holdout_split",
    "AnnotationStore",
    "Source",
]
