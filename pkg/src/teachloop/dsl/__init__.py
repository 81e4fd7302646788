from .ast import PatternAst, PatternAtom, PosTagAtom, StemAtom, SoftAtom, EntityAtom, WildcardAtom, print_pattern
from .parser import parse_pattern
from .matcher import MatchConfig, MatchSpan, match_sentence, matches

__all__ = [
    "PatternAst",
    "PatternAtom",
    "PosTagAtom",
    "StemAtom",
    "SoftAtom",
    "EntityAtom",
    "WildcardAtom",
    "print_pattern",
    "parse_pattern",
    "MatchConfig",
    "MatchSpan",
    "match_sentence",
    "matches",
]
