"""Interpretation states and their human-readable URL fragment codec.

A state is the complete shareable unit of interpretive work: which document
it belongs to, the annotated token spans, their conceptual groups, the
extract-pane ordering, and an optional scroll anchor. The fragment grammar
keeps every annotated word legible in the URL itself:

    fragment   := "#" pair ("&" pair)*
    pair       := "d=" hex16 | "a=" annot ("," annot)* | "g=" group (";" group)*
                | "o=" int ("+" int)* | "f=" int
    annot      := text "@" start [ "-" end ]
    group      := text ":" memberId ("+" memberId)*

Key order on encode is d, a, g, o, f; ``o=`` is omitted when it equals the
identity ordering and ``f=`` when no focus is set. Within text, the
delimiter characters ``# & = , @ : + ; - %`` and all whitespace are
percent-encoded; everything else, including non-ASCII words, stays verbatim.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .errors import (
    DocumentMismatchError,
    FragmentParseError,
    SpanRangeError,
    StaleStateError,
    ValidationError,
)
from .textmodel import Document, token_slice

# The five-color color-blind-safe display palette; annotations cycle
# through it by id.
PALETTE = ("#648FFF", "#785EF0", "#DC267F", "#FE6100", "#FFB000")

_RESERVED = set("#&=,@:+;-%")
_FINGERPRINT_RE = re.compile(r"[0-9a-f]{16}\Z")
_FINGERPRINT_LAX_RE = re.compile(r"[0-9a-fA-F]{16}\Z")
_SPAN_RE = re.compile(r"([0-9]+)(?:-([0-9]+))?\Z")
_INT_RE = re.compile(r"[0-9]+\Z")
_KNOWN_KEYS = ("d", "a", "g", "o", "f")


def palette_color(color_index: int) -> str:
    """Hex triplet for a palette slot (0..4)."""
    if not 0 <= color_index < len(PALETTE):
        raise SpanRangeError(
            f"color index {color_index} out of range 0..{len(PALETTE) - 1}"
        )
    return PALETTE[color_index]


@dataclass(frozen=True)
class Annotation:
    """A contiguous token-span selection (span ends are inclusive)."""

    id: int
    start: int
    end: int
    surface: str
    color_index: int


@dataclass(frozen=True)
class AbstractionGroup:
    """A named conceptual grouping of annotations."""

    name: str
    member_ids: tuple[int, ...]


@dataclass(frozen=True)
class InterpretationState:
    """Everything one shareable URL fragment captures."""

    doc_fingerprint: str
    annotations: tuple[Annotation, ...] = ()
    groups: tuple[AbstractionGroup, ...] = ()
    pane_order: tuple[int, ...] = ()
    focus_token: int | None = None


def empty_state(doc_fingerprint: str) -> InterpretationState:
    return InterpretationState(doc_fingerprint=doc_fingerprint)


# --- percent encoding -------------------------------------------------


def encode_text(text: str) -> str:
    """Percent-encode delimiters, whitespace, and control characters."""
    out = []
    for ch in text:
        if ch in _RESERVED or ch.isspace() or ord(ch) < 0x20 or ord(ch) == 0x7F:
            out.extend(f"%{byte:02X}" for byte in ch.encode("utf-8"))
        else:
            out.append(ch)
    return "".join(out)


def _decode_text(raw: str, offset: int) -> str:
    """Inverse of :func:`encode_text`; ``offset`` anchors error positions."""
    out: list[str] = []
    i = 0
    n = len(raw)
    while i < n:
        ch = raw[i]
        if ch != "%":
            out.append(ch)
            i += 1
            continue
        run_start = i
        buf = bytearray()
        while i < n and raw[i] == "%":
            hex_pair = raw[i + 1 : i + 3]
            if len(hex_pair) < 2 or not all(c in "0123456789abcdefABCDEF" for c in hex_pair):
                raise FragmentParseError("invalid percent escape", offset + i)
            buf.append(int(hex_pair, 16))
            i += 3
        try:
            out.append(buf.decode("utf-8"))
        except UnicodeDecodeError:
            raise FragmentParseError(
                "percent escape is not valid UTF-8", offset + run_start
            ) from None
    return "".join(out)


# --- fragment parsing (syntax only) -----------------------------------


@dataclass(frozen=True)
class ParsedFragment:
    """Syntax-level view of a fragment, before any document checks.

    Annotation ids are implicit: position in the ``annotations`` list.
    Group member ids and the ordering refer to those positions.
    """

    fingerprint: str | None = None
    annotations: tuple[tuple[str, int, int], ...] = ()  # (surface, start, end)
    groups: tuple[tuple[str, tuple[int, ...]], ...] = ()
    order: tuple[int, ...] | None = None
    focus: int | None = None
    unknown_keys: tuple[str, ...] = ()


def _split_tracking(value: str, sep: str, offset: int) -> list[tuple[str, int]]:
    """Split on a delimiter, keeping each piece's absolute offset."""
    pieces = []
    start = 0
    while True:
        idx = value.find(sep, start)
        if idx < 0:
            pieces.append((value[start:], offset + start))
            return pieces
        pieces.append((value[start:idx], offset + start))
        start = idx + 1


def _parse_int(raw: str, offset: int, what: str) -> int:
    if not _INT_RE.fullmatch(raw):
        raise FragmentParseError(f"expected {what}, got {raw!r}", offset)
    return int(raw)


def _parse_annot(raw: str, offset: int) -> tuple[str, int, int]:
    if raw.count("@") != 1:
        raise FragmentParseError(
            "annotation must be text@start or text@start-end", offset
        )
    word_raw, span_raw = raw.split("@")
    span_offset = offset + len(word_raw) + 1
    match = _SPAN_RE.fullmatch(span_raw)
    if not match:
        raise FragmentParseError("invalid token span", span_offset)
    start = int(match.group(1))
    end = int(match.group(2)) if match.group(2) is not None else start
    return _decode_text(word_raw, offset), start, end


def _parse_group(raw: str, offset: int) -> tuple[str, tuple[int, ...]]:
    if raw.count(":") != 1:
        raise FragmentParseError("group must be name:id(+id)*", offset)
    name_raw, members_raw = raw.split(":")
    members_offset = offset + len(name_raw) + 1
    members = tuple(
        _parse_int(piece, pos, "a member id")
        for piece, pos in _split_tracking(members_raw, "+", members_offset)
    )
    return _decode_text(name_raw, offset), members


def parse_fragment(fragment: str) -> ParsedFragment:
    """Parse fragment syntax without consulting any document.

    Keys may appear in any order; unrecognized keys are collected, not
    rejected. Raises :class:`FragmentParseError` with the character
    position of the first fault.
    """
    if fragment in ("", "#"):
        return ParsedFragment()
    if not fragment.startswith("#"):
        raise FragmentParseError("fragment must begin with '#'", 0)

    seen: dict[str, object] = {}
    unknown: list[str] = []
    for pair, pair_offset in _split_tracking(fragment[1:], "&", 1):
        if not pair:
            raise FragmentParseError("empty key=value pair", pair_offset)
        eq = pair.find("=")
        if eq < 0:
            raise FragmentParseError("expected key=value", pair_offset)
        key = pair[:eq]
        value = pair[eq + 1 :]
        value_offset = pair_offset + eq + 1
        if key not in _KNOWN_KEYS:
            unknown.append(key)
            continue
        if key in seen:
            raise FragmentParseError(f"duplicate key {key!r}", pair_offset)
        if key == "d":
            if not _FINGERPRINT_LAX_RE.fullmatch(value):
                raise FragmentParseError(
                    "document fingerprint must be 16 hex chars", value_offset
                )
            seen["d"] = value.lower()
        elif key == "a":
            seen["a"] = tuple(
                _parse_annot(piece, pos)
                for piece, pos in _split_tracking(value, ",", value_offset)
            )
        elif key == "g":
            seen["g"] = tuple(
                _parse_group(piece, pos)
                for piece, pos in _split_tracking(value, ";", value_offset)
            )
        elif key == "o":
            seen["o"] = tuple(
                _parse_int(piece, pos, "an annotation id")
                for piece, pos in _split_tracking(value, "+", value_offset)
            )
        else:
            seen["f"] = _parse_int(value, value_offset, "a token index")

    return ParsedFragment(
        fingerprint=seen.get("d"),  # type: ignore[arg-type]
        annotations=seen.get("a", ()),  # type: ignore[arg-type]
        groups=seen.get("g", ()),  # type: ignore[arg-type]
        order=seen.get("o"),  # type: ignore[arg-type]
        focus=seen.get("f"),  # type: ignore[arg-type]
        unknown_keys=tuple(unknown),
    )


# --- canonical form ----------------------------------------------------


def canonicalize(state: InterpretationState) -> InterpretationState:
    """Renumber annotations in document order and remap references.

    Annotations are sorted by span start and re-assigned consecutive ids;
    group membership and the pane order follow the renumbering. Idempotent
    on already-canonical states.
    """
    anns = state.annotations
    for a in anns:
        if a.start < 0 or a.end < a.start:
            raise ValidationError(
                f"invalid span {a.start}..{a.end} on annotation {a.id}"
            )
    old_ids = [a.id for a in anns]
    if len(set(old_ids)) != len(old_ids):
        raise ValidationError("annotation ids must be unique")

    by_position = sorted(anns, key=lambda a: a.start)
    for prev, cur in zip(by_position, by_position[1:]):
        if cur.start <= prev.end:
            raise ValidationError(
                f"annotation spans {prev.start}..{prev.end} and "
                f"{cur.start}..{cur.end} overlap"
            )
    id_map = {a.id: new_id for new_id, a in enumerate(by_position)}
    new_anns = tuple(
        replace(a, id=new_id, color_index=new_id % len(PALETTE))
        for new_id, a in enumerate(by_position)
    )

    new_groups = []
    claimed: set[int] = set()
    for g in state.groups:
        if not g.member_ids:
            raise ValidationError(f"group {g.name!r} has no members")
        members = []
        for member in g.member_ids:
            if member not in id_map:
                raise ValidationError(
                    f"group {g.name!r} references unknown annotation id {member}"
                )
            members.append(id_map[member])
        if len(set(members)) != len(members):
            raise ValidationError(f"group {g.name!r} lists a member twice")
        overlap = claimed.intersection(members)
        if overlap:
            raise ValidationError(
                f"annotation {min(overlap)} belongs to more than one group"
            )
        claimed.update(members)
        new_groups.append(AbstractionGroup(g.name, tuple(sorted(members))))
    new_groups.sort(key=lambda g: g.member_ids[0])

    # An empty pane order on a non-empty state defaults to document order.
    order = state.pane_order or tuple(a.id for a in by_position)
    if sorted(order) != sorted(old_ids):
        raise ValidationError("pane order must be a permutation of annotation ids")
    new_order = tuple(id_map[i] for i in order)

    focus = state.focus_token
    if focus is not None and (not isinstance(focus, int) or focus < 0):
        raise ValidationError("focus token must be a non-negative token index")

    return InterpretationState(
        doc_fingerprint=state.doc_fingerprint,
        annotations=new_anns,
        groups=tuple(new_groups),
        pane_order=new_order,
        focus_token=focus,
    )


def _check_canonical(state: InterpretationState) -> None:
    if not _FINGERPRINT_RE.fullmatch(state.doc_fingerprint):
        raise ValidationError(
            "document fingerprint must be 16 lowercase hex chars"
        )
    prev_end = -1
    for i, a in enumerate(state.annotations):
        if a.id != i:
            raise ValidationError(
                "annotation ids must be consecutive ordinals in document order"
            )
        if a.start < 0 or a.end < a.start:
            raise ValidationError(f"invalid span {a.start}..{a.end} on annotation {i}")
        if a.start <= prev_end:
            raise ValidationError(
                "annotations must be sorted by span start with disjoint spans"
            )
        if a.color_index != i % len(PALETTE):
            raise ValidationError("annotation color index must equal id mod 5")
        prev_end = a.end
    ids = set(range(len(state.annotations)))
    claimed: set[int] = set()
    previous_min = -1
    for g in state.groups:
        if not g.member_ids:
            raise ValidationError(f"group {g.name!r} has no members")
        if any(m not in ids for m in g.member_ids):
            raise ValidationError(
                f"group {g.name!r} references an unknown annotation id"
            )
        if list(g.member_ids) != sorted(set(g.member_ids)):
            raise ValidationError(
                f"group {g.name!r} members must be ascending and unique"
            )
        if claimed.intersection(g.member_ids):
            raise ValidationError("an annotation may belong to at most one group")
        claimed.update(g.member_ids)
        if g.member_ids[0] <= previous_min:
            raise ValidationError("groups must be sorted by smallest member id")
        previous_min = g.member_ids[0]
    if sorted(state.pane_order) != sorted(ids):
        raise ValidationError("pane order must be a permutation of annotation ids")
    if state.focus_token is not None and (
        not isinstance(state.focus_token, int) or state.focus_token < 0
    ):
        raise ValidationError("focus token must be a non-negative token index")


# --- encode / decode ---------------------------------------------------


def encode(state: InterpretationState) -> str:
    """Serialize a canonical state to its URL fragment.

    Raises :class:`ValidationError` naming the violated invariant when the
    state is invalid or not in canonical form (see :func:`canonicalize`).
    """
    _check_canonical(state)
    parts = [f"d={state.doc_fingerprint}"]
    if state.annotations:
        parts.append(
            "a="
            + ",".join(
                encode_text(a.surface)
                + "@"
                + (str(a.start) if a.end == a.start else f"{a.start}-{a.end}")
                for a in state.annotations
            )
        )
    if state.groups:
        parts.append(
            "g="
            + ";".join(
                encode_text(g.name) + ":" + "+".join(str(m) for m in g.member_ids)
                for g in state.groups
            )
        )
    if state.pane_order != tuple(range(len(state.annotations))):
        parts.append("o=" + "+".join(str(i) for i in state.pane_order))
    if state.focus_token is not None:
        parts.append(f"f={state.focus_token}")
    return "#" + "&".join(parts)


def decode(fragment: str, doc: Document) -> InterpretationState:
    """Parse a fragment against a document and return the canonical state.

    Every recorded annotation word is verified against the document slice
    it names; any drift means the state belongs to a different text.
    """
    parsed = parse_fragment(fragment)
    if parsed.fingerprint is None:
        if fragment in ("", "#"):
            return empty_state(doc.fingerprint)
        raise FragmentParseError("missing document key 'd'", len(fragment))
    if parsed.fingerprint != doc.fingerprint:
        raise DocumentMismatchError(
            f"state was made for document {parsed.fingerprint}, "
            f"this document is {doc.fingerprint}"
        )

    annotations = []
    for i, (surface, start, end) in enumerate(parsed.annotations):
        actual = token_slice(doc, start, end)
        if actual != surface:
            raise StaleStateError(
                f"annotation {i}: recorded text {surface!r} does not match "
                f"document text {actual!r} at tokens {start}..{end}"
            )
        annotations.append(
            Annotation(id=i, start=start, end=end, surface=surface, color_index=i % 5)
        )

    focus = parsed.focus
    if focus is not None and focus >= len(doc.tokens):
        raise SpanRangeError(
            f"focus token {focus} out of range 0..{len(doc.tokens) - 1}"
        )

    state = InterpretationState(
        doc_fingerprint=parsed.fingerprint,
        annotations=tuple(annotations),
        groups=tuple(
            AbstractionGroup(name, members) for name, members in parsed.groups
        ),
        # Annotation listing order carries no meaning: without an explicit
        # ordering key the pane shows document order.
        pane_order=parsed.order if parsed.order is not None else (),
        focus_token=focus,
    )
    return canonicalize(state)


# --- construction helpers and JSON form --------------------------------


def build_state(
    doc: Document,
    spans: Sequence[tuple[int, int]],
    groups: Iterable[tuple[str, Sequence[int]]] = (),
    pane_order: Sequence[int] | None = None,
    focus_token: int | None = None,
) -> InterpretationState:
    """Build a canonical state from token spans of a document.

    Group members and the pane order refer to positions in ``spans``.
    """
    annotations = tuple(
        Annotation(
            id=i,
            start=start,
            end=end,
            surface=token_slice(doc, start, end),
            color_index=i % len(PALETTE),
        )
        for i, (start, end) in enumerate(spans)
    )
    state = InterpretationState(
        doc_fingerprint=doc.fingerprint,
        annotations=annotations,
        groups=tuple(AbstractionGroup(n, tuple(m)) for n, m in groups),
        pane_order=tuple(pane_order) if pane_order is not None else tuple(range(len(spans))),
        focus_token=focus_token,
    )
    return canonicalize(state)


def state_to_dict(state: InterpretationState) -> dict:
    """JSON-ready mapping with fixed key order."""
    return {
        "docFingerprint": state.doc_fingerprint,
        "annotations": [
            {
                "id": a.id,
                "span": [a.start, a.end],
                "surface": a.surface,
                "colorIndex": a.color_index,
            }
            for a in state.annotations
        ],
        "groups": [
            {"name": g.name, "memberIds": list(g.member_ids)} for g in state.groups
        ],
        "paneOrder": list(state.pane_order),
        "focusToken": state.focus_token,
    }


def state_from_dict(data: dict) -> InterpretationState:
    """Build a state from its JSON form; tolerant of omitted derived fields.

    Ids default to list positions, color indices to id mod 5, the pane
    order to identity. The result is *not* canonicalized.
    """
    try:
        doc_fingerprint = data["docFingerprint"]
        raw_annotations = data.get("annotations", [])
        annotations = []
        for position, entry in enumerate(raw_annotations):
            start, end = entry["span"]
            ann_id = entry.get("id", position)
            annotations.append(
                Annotation(
                    id=ann_id,
                    start=start,
                    end=end,
                    surface=entry["surface"],
                    color_index=entry.get("colorIndex", ann_id % len(PALETTE)),
                )
            )
        groups = tuple(
            AbstractionGroup(entry["name"], tuple(entry["memberIds"]))
            for entry in data.get("groups", [])
        )
        pane_order = data.get("paneOrder")
        if pane_order is None:
            pane_order = [a.id for a in annotations]
        focus = data.get("focusToken")
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed state JSON: {exc}") from exc
    return InterpretationState(
        doc_fingerprint=doc_fingerprint,
        annotations=tuple(annotations),
        groups=groups,
        pane_order=tuple(pane_order),
        focus_token=focus,
    )
