"""Lightweight, legible text analysis: stems, similarity, related tokens.

Everything here is a pure function a reader can verify by hand: rule-based
stemming, normalized edit distance, an anchored conservative-regex match,
and single-linkage grouping of annotation stems. No models, no randomness.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .errors import PatternError, ValidationError
from .porter import porter_stem
from .textmodel import Document

MATCH_MODES = ("stem", "similarity", "regex")

# Constructs shared by every mainstream regex dialect; everything else
# (backreferences, lookaround, inline flags, named groups) is rejected so a
# pattern behaves identically wherever the engine runs.
def _check_pattern(pattern: str) -> None:
    """Reject regex constructs outside the portable subset."""
    in_class = False
    i = 0
    while i < len(pattern):
        ch = pattern[i]
        if ch == "\\":
            if i + 1 >= len(pattern):
                raise PatternError("dangling backslash", i)
            if not in_class and pattern[i + 1] in "123456789":
                raise PatternError("backreferences are not supported", i)
            i += 2
            continue
        if in_class:
            if ch == "]":
                in_class = False
        elif ch == "[":
            in_class = True
        elif ch == "(" and pattern[i + 1 : i + 2] == "?" and pattern[i + 2 : i + 3] != ":":
            raise PatternError(
                "only plain and non-capturing groups are supported", i
            )
        i += 1


def compile_pattern(pattern: str) -> re.Pattern[str]:
    """Compile a pattern, mapping syntax faults to :class:`PatternError`."""
    _check_pattern(pattern)
    try:
        return re.compile(pattern)
    except re.error as exc:
        pos = exc.pos if exc.pos is not None else -1
        raise PatternError(exc.msg, pos) from exc


@dataclass(frozen=True)
class MatchSpec:
    """How to hunt for related tokens: by stem, similarity, or regex."""

    mode: str
    needle: str
    threshold: float | None = None

    def __post_init__(self):
        if self.mode not in MATCH_MODES:
            raise ValidationError(f"unknown match mode {self.mode!r}")
        if self.mode == "similarity":
            if self.threshold is None:
                raise ValidationError("similarity mode requires a threshold")
            if not 0.0 <= self.threshold <= 1.0:
                raise ValidationError("threshold must lie in [0, 1]")
        elif self.threshold is not None:
            raise ValidationError(f"threshold is not used in {self.mode} mode")
        if self.mode == "regex":
            compile_pattern(self.needle)


@dataclass(frozen=True)
class Suggestion:
    """A proposed abstraction: annotation ids linked by similar stems."""

    member_ids: tuple[int, ...]
    proposed_name: str
    score: float


def stem(word: str) -> str:
    """Stem of the lowercased word.

    The stripping rules apply only to purely alphabetic ASCII words; any
    other input (digits, hyphens, apostrophes, non-Latin letters) is
    returned lowercased but otherwise unchanged.
    """
    lowered = word.lower()
    if lowered and all("a" <= ch <= "z" for ch in lowered):
        return porter_stem(lowered)
    return lowered


def levenshtein(a: str, b: str) -> int:
    """Edit distance (insert/delete/substitute) between two strings."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            current.append(
                min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost)
            )
        previous = current
    return previous[-1]


def similarity(a: str, b: str) -> float:
    """Normalized, case-insensitive similarity in [0, 1].

    1 minus the edit distance between the lowercased strings divided by
    the longer lowercased length; two empty strings count as identical.
    """
    la = a.lower()
    lb = b.lower()
    longest = max(len(la), len(lb))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(la, lb) / longest


def find_related(doc: Document, spec: MatchSpec) -> list[int]:
    """Token indices matching the spec, in ascending document order.

    Already-annotated tokens are *not* excluded; display layers subtract
    whatever they consider taken.
    """
    if spec.mode == "stem":
        target = stem(spec.needle)
        return [t.index for t in doc.tokens if stem(t.surface) == target]
    if spec.mode == "similarity":
        assert spec.threshold is not None
        return [
            t.index
            for t in doc.tokens
            if similarity(t.surface, spec.needle) >= spec.threshold
        ]
    pattern = compile_pattern(spec.needle)
    return [t.index for t in doc.tokens if pattern.fullmatch(t.surface)]


def suggest_groups(
    annotations: Sequence[tuple[int, str]], threshold: float
) -> list[Suggestion]:
    """Single-linkage clusters of annotations whose stems are similar.

    Two annotations are linked when the similarity of their stems reaches
    the threshold; clusters are the connected components of that link
    graph. Only clusters of two or more members are reported, ordered by
    smallest member id, each named after its lexicographically smallest
    stem and scored by the minimum pairwise stem similarity inside it.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValidationError("threshold must lie in (0, 1]")
    ids = [ann_id for ann_id, _ in annotations]
    if len(set(ids)) != len(ids):
        raise ValidationError("annotation ids must be unique")

    stems = {ann_id: stem(surface) for ann_id, surface in annotations}
    ordered = sorted(ids)
    parent = {ann_id: ann_id for ann_id in ordered}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    pair_sim: dict[tuple[int, int], float] = {}
    for i, a in enumerate(ordered):
        for b in ordered[i + 1 :]:
            s = similarity(stems[a], stems[b])
            pair_sim[(a, b)] = s
            if s >= threshold:
                parent[find(a)] = find(b)

    clusters: dict[int, list[int]] = {}
    for ann_id in ordered:
        clusters.setdefault(find(ann_id), []).append(ann_id)

    suggestions = []
    for members in clusters.values():
        if len(members) < 2:
            continue
        members = sorted(members)
        score = min(
            pair_sim[(a, b)]
            for i, a in enumerate(members)
            for b in members[i + 1 :]
        )
        suggestions.append(
            Suggestion(
                member_ids=tuple(members),
                proposed_name=min(stems[m] for m in members),
                score=score,
            )
        )
    suggestions.sort(key=lambda s: s.member_ids[0])
    return suggestions
