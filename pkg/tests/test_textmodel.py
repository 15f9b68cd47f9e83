import json

import pytest
from hypothesis import given, strategies as st

from textarium import (
    Document,
    SpanRangeError,
    build_document,
    fingerprint,
    token_slice,
    tokenize,
)
from textarium.textmodel import document_from_dict, document_to_dict


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_title_with_punctuation():
    tokens = tokenize("A Cautious Prometheus?")
    assert [(t.index, t.surface, t.byte_start, t.byte_end) for t in tokens] == [
        (0, "A", 0, 1),
        (1, "Cautious", 2, 10),
        (2, "Prometheus", 11, 21),
    ]


def test_tokenize_keeps_flanked_joiners():
    tokens = tokenize("re-design it’s")
    assert [t.surface for t in tokens] == ["re-design", "it’s"]
    # the curly apostrophe is three UTF-8 bytes
    assert (tokens[1].byte_start, tokens[1].byte_end) == (10, 16)


def test_tokenize_rejects_unflanked_joiners():
    assert [t.surface for t in tokenize("re- design 'tis its' a--b 3-4")] == [
        "re",
        "design",
        "tis",
        "its",
        "a",
        "b",
        "3",
        "4",
    ]


def test_tokenize_digits_and_scripts():
    assert [t.surface for t in tokenize("B2B café λόγος 语言")] == [
        "B2B",
        "café",
        "λόγος",
        "语言",
    ]


def test_fingerprint_reference_values():
    assert fingerprint("") == "cbf29ce484222325"
    assert fingerprint("a") == "af63dc4c8601ec8c"


def test_fingerprint_normalizes_line_endings():
    assert fingerprint("one\r\ntwo\rthree\n") == fingerprint("one\ntwo\nthree\n")


def test_build_document_strips_bom():
    doc = build_document("﻿A text")
    assert doc.raw == "A text"
    assert doc.fingerprint == fingerprint("A text")


def test_slice_single_token_is_surface(doc: Document):
    token = doc.tokens[42]
    assert token_slice(doc, token.index, token.index) == token.surface


def test_slice_preserves_interior_text():
    doc = build_document("A Cautious Prometheus?")
    assert token_slice(doc, 1, 2) == "Cautious Prometheus"


def test_slice_range_errors(doc: Document):
    with pytest.raises(SpanRangeError, match="5 exceeds end index 3"):
        token_slice(doc, 5, 3)
    with pytest.raises(SpanRangeError, match="out of range"):
        token_slice(doc, 0, len(doc.tokens))
    with pytest.raises(SpanRangeError, match="out of range"):
        token_slice(doc, -1, 0)


def test_token_round_trip(doc: Document):
    for token in doc.tokens:
        assert token_slice(doc, token.index, token.index) == token.surface


def test_tokenize_deterministic(fixture_text):
    assert tokenize(fixture_text) == tokenize(fixture_text)


def test_token_ranges_strictly_increasing(doc: Document):
    for prev, cur in zip(doc.tokens, doc.tokens[1:]):
        assert prev.byte_end <= cur.byte_start
        assert cur.byte_start < cur.byte_end
    assert [t.index for t in doc.tokens] == list(range(len(doc.tokens)))


@given(st.text(max_size=200))
def test_tokenize_invariants_on_arbitrary_text(raw):
    tokens = tokenize(raw)
    raw_bytes = raw.encode("utf-8")
    last_end = 0
    for i, token in enumerate(tokens):
        assert token.index == i
        assert token.byte_start >= last_end
        assert token.byte_start < token.byte_end
        assert raw_bytes[token.byte_start : token.byte_end].decode("utf-8") == token.surface
        last_end = token.byte_end


def test_document_json_round_trip(doc: Document):
    data = document_to_dict(doc)
    assert list(data) == ["fingerprint", "title", "raw", "tokens"]
    clone = document_from_dict(json.loads(json.dumps(data)))
    assert clone == doc
