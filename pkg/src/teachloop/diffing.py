"""Word-level edit scripts and counterfactual render spans.

The edit script uses only insert and delete operations (a replacement is a
delete followed by an insert) and is always minimal: its cost equals
len(a) + len(b) - 2 * LCS(a, b). Among minimal scripts we keep the longest
contiguous run of unchanged words intact, recursively: pick the longest
common slice that a minimal script can keep (leftmost on ties), then align
what is left on either side the same way. Token comparison is on surface
text, case-sensitive, because rendering is about what the reader sees.

Render spans project the script onto the counterfactual: kept runs are
gray, inserted runs black, and the tokens matched by the carried-over rule
get the original label's theme color layered on top.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .errors import IntegrityError


class Op(str, Enum):
    KEEP = "keep"
    INSERT = "insert"
    DELETE = "delete"


@dataclass(frozen=True)
class Run:
    op: Op
    tokens: tuple[str, ...]


@dataclass(frozen=True)
class EditScript:
    runs: tuple[Run, ...]

    @property
    def cost(self) -> int:
        return sum(len(r.tokens) for r in self.runs if r.op is not Op.KEEP)

    def original(self) -> list[str]:
        return [t for r in self.runs if r.op in (Op.KEEP, Op.DELETE) for t in r.tokens]

    def counterfactual(self) -> list[str]:
        return [t for r in self.runs if r.op in (Op.KEEP, Op.INSERT) for t in r.tokens]


def _lcs_table(a: Sequence[str], b: Sequence[str]) -> list[list[int]]:
    """Suffix LCS lengths: L[i][j] = LCS(a[i:], b[j:])."""
    n, m = len(a), len(b)
    L = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        for j in range(m - 1, -1, -1):
            if a[i] == b[j]:
                L[i][j] = L[i + 1][j + 1] + 1
            else:
                L[i][j] = max(L[i + 1][j], L[i][j + 1])
    return L


def _common_extension(a: Sequence[str], b: Sequence[str]) -> list[list[int]]:
    """R[i][j] = length of the common slice starting at a[i], b[j]."""
    n, m = len(a), len(b)
    R = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        for j in range(m - 1, -1, -1):
            if a[i] == b[j]:
                R[i][j] = R[i + 1][j + 1] + 1
    return R


def _prefix_lcs(a: Sequence[str], b: Sequence[str]) -> list[list[int]]:
    """Prefix LCS lengths: P[i][j] = LCS(a[:i], b[:j])."""
    n, m = len(a), len(b)
    P = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            if a[i - 1] == b[j - 1]:
                P[i][j] = P[i - 1][j - 1] + 1
            else:
                P[i][j] = max(P[i - 1][j], P[i][j - 1])
    return P


def _align(a: list[str], b: list[str], out: list[Run]) -> None:
    S = _lcs_table(a, b)
    total = S[0][0]
    if total == 0:
        if a:
            out.append(Run(Op.DELETE, tuple(a)))
        if b:
            out.append(Run(Op.INSERT, tuple(b)))
        return
    P = _prefix_lcs(a, b)
    R = _common_extension(a, b)
    # longest keepable common slice that still permits a minimal script:
    # LCS(left parts) + k + LCS(right parts) must equal the full LCS
    best: Optional[tuple[int, int, int]] = None  # (k, i, j)
    for i in range(len(a)):
        for j in range(len(b)):
            max_k = R[i][j]
            if max_k == 0:
                continue
            for k in range(max_k, 0, -1):
                if best is not None and k < best[0]:
                    break
                if P[i][j] + k + S[i + k][j + k] == total:
                    cand = (k, i, j)
                    if best is None or (-cand[0], cand[1], cand[2]) < (-best[0], best[1], best[2]):
                        best = cand
                    break
    assert best is not None
    k, i, j = best
    _align(a[:i], b[:j], out)
    out.append(Run(Op.KEEP, tuple(a[i : i + k])))
    _align(a[i + k :], b[j + k :], out)


def word_diff(original: Sequence[str], counterfactual: Sequence[str]) -> EditScript:
    """Minimal insert/delete script from original to counterfactual."""
    runs: list[Run] = []
    _align(list(original), list(counterfactual), runs)
    merged: list[Run] = []
    for run in runs:
        if merged and merged[-1].op is run.op:
            merged[-1] = Run(run.op, merged[-1].tokens + run.tokens)
        else:
            merged.append(run)
    return EditScript(tuple(merged))


class Style(str, Enum):
    KEPT = "kept_gray"
    CHANGED = "changed_black"
    RULE = "rule_theme"


@dataclass(frozen=True)
class RenderSpan:
    """Token range in the counterfactual with its display style."""

    start: int
    end: int
    style: Style
    color: Optional[str] = None


def render_spans(
    script: EditScript,
    matched_range: Optional[tuple[int, int]],
    theme_color: Optional[str],
) -> list[RenderSpan]:
    """Project an edit script onto counterfactual token positions.

    Base spans (gray for kept, black for inserted) tile the counterfactual
    exactly; the rule-matched range is layered on top in the theme color.
    Delete runs exist only in the original's view and are omitted here.
    """
    spans: list[RenderSpan] = []
    pos = 0
    for run in script.runs:
        if run.op is Op.DELETE:
            continue
        style = Style.KEPT if run.op is Op.KEEP else Style.CHANGED
        end = pos + len(run.tokens)
        if spans and spans[-1].style is style and spans[-1].end == pos:
            spans[-1] = RenderSpan(spans[-1].start, end, style)
        else:
            spans.append(RenderSpan(pos, end, style))
        pos = end
    if matched_range is not None:
        m_start, m_end = matched_range
        if not (0 <= m_start <= m_end <= pos):
            raise IntegrityError(
                f"matched span [{m_start}, {m_end}) exceeds counterfactual length {pos}"
            )
        spans.append(RenderSpan(m_start, m_end, Style.RULE, theme_color))
    return spans
