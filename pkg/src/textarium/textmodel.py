"""Source texts, deterministic word tokenization, and token-index anchors.

Every other layer anchors to the token table built here: annotations name
token spans, URL states name token indices, and the compiled site ships the
table as ``doc.json``. Offsets are byte offsets into the UTF-8 encoding of
the normalized text so that anchors survive any transport that preserves
bytes.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass

from .errors import SpanRangeError

# Characters that join two letters into one token ("it's", "re-design").
_JOINERS = {"'", "’", "-"}

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


@dataclass(frozen=True)
class Token:
    """One word token: ordinal index plus byte offsets into the raw text."""

    index: int
    surface: str
    byte_start: int
    byte_end: int


@dataclass(frozen=True)
class Document:
    """Immutable source text with its token table.

    ``raw`` is BOM-stripped and line-ending normalized to LF, so byte
    offsets are identical on every platform. ``fingerprint`` is the FNV-1a
    hash of that normalized text.
    """

    fingerprint: str
    title: str
    raw: str
    tokens: tuple[Token, ...]


def _is_word_char(ch: str) -> bool:
    cat = unicodedata.category(ch)
    return cat.startswith("L") or cat == "Nd"


def tokenize(raw: str) -> list[Token]:
    """Split text into word tokens with UTF-8 byte offsets.

    A token is a maximal run of Unicode letters/digits; an apostrophe
    (straight or curly) or hyphen is kept inside a token only when both
    neighbors are letters. Punctuation and whitespace are never indexed.
    """
    tokens: list[Token] = []
    chars = raw
    n = len(chars)
    byte_pos = 0
    i = 0
    while i < n:
        ch = chars[i]
        if not _is_word_char(ch):
            byte_pos += len(ch.encode("utf-8"))
            i += 1
            continue
        start_char = i
        start_byte = byte_pos
        while i < n:
            ch = chars[i]
            if _is_word_char(ch):
                byte_pos += len(ch.encode("utf-8"))
                i += 1
                continue
            if (
                ch in _JOINERS
                and i + 1 < n
                and unicodedata.category(chars[i - 1]).startswith("L")
                and unicodedata.category(chars[i + 1]).startswith("L")
            ):
                byte_pos += len(ch.encode("utf-8"))
                i += 1
                continue
            break
        surface = chars[start_char:i]
        tokens.append(Token(len(tokens), surface, start_byte, byte_pos))
    return tokens


def fnv1a64(data: bytes) -> int:
    """FNV-1a 64-bit hash of a byte string."""
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


def normalize_text(raw: str) -> str:
    """Strip a leading BOM and normalize line endings to LF."""
    if raw.startswith("﻿"):
        raw = raw[1:]
    return raw.replace("\r\n", "\n").replace("\r", "\n")


def fingerprint(raw: str) -> str:
    """16 lowercase hex chars of FNV-1a 64 over the normalized text."""
    return format(fnv1a64(normalize_text(raw).encode("utf-8")), "016x")


def build_document(text: str, title: str = "") -> Document:
    """Normalize, tokenize, and fingerprint a source text."""
    raw = normalize_text(text)
    return Document(
        fingerprint=fingerprint(raw),
        title=title,
        raw=raw,
        tokens=tuple(tokenize(raw)),
    )


def token_slice(doc: Document, start: int, end: int) -> str:
    """Raw-text substring covering tokens ``start..end`` (inclusive).

    Interior punctuation and whitespace between the tokens is preserved.
    """
    count = len(doc.tokens)
    if not 0 <= start < count:
        raise SpanRangeError(f"start token index {start} out of range 0..{count - 1}")
    if not 0 <= end < count:
        raise SpanRangeError(f"end token index {end} out of range 0..{count - 1}")
    if start > end:
        raise SpanRangeError(f"start token index {start} exceeds end index {end}")
    raw_bytes = doc.raw.encode("utf-8")
    first = doc.tokens[start]
    last = doc.tokens[end]
    return raw_bytes[first.byte_start : last.byte_end].decode("utf-8")


def document_to_dict(doc: Document) -> dict:
    """JSON-ready mapping with fixed key order (``doc.json`` schema)."""
    return {
        "fingerprint": doc.fingerprint,
        "title": doc.title,
        "raw": doc.raw,
        "tokens": [
            {
                "index": t.index,
                "surface": t.surface,
                "byteStart": t.byte_start,
                "byteEnd": t.byte_end,
            }
            for t in doc.tokens
        ],
    }


def document_from_dict(data: dict) -> Document:
    """Inverse of :func:`document_to_dict`."""
    tokens = tuple(
        Token(t["index"], t["surface"], t["byteStart"], t["byteEnd"])
        for t in data["tokens"]
    )
    return Document(
        fingerprint=data["fingerprint"],
        title=data.get("title", ""),
        raw=data["raw"],
        tokens=tokens,
    )
