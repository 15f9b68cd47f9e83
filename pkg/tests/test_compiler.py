import json
import logging

import pytest

from textarium import (
    BrokenEmbedError,
    build_document,
    build_state,
    compile_site,
    encode,
    parse_argument,
    validate_embeds,
)
from textarium.compiler import EMBED, PROSE, SYNTAX, UNKNOWN_DOCUMENT


@pytest.fixture(scope="module")
def fragments(doc):
    return [
        encode(build_state(doc, [(192, 192)])),
        encode(build_state(doc, [(174, 174), (177, 177)], groups=[("languages", [0, 1])])),
        encode(build_state(doc, [(156, 156)], focus_token=156)),
    ]


@pytest.fixture(scope="module")
def essay_md(fragments):
    f1, f2, f3 = fragments
    return f"""# A worked argument

Some opening prose that frames the question.

[first view](txt/index.html{f1})

Prose between the first and second embeds, with an
inline [reference](txt/index.html{f1}) that must stay a plain link.

[second view](txt/index.html{f2})

- a list
- of observations

[third view](txt/index.html{f3})

Closing remarks.
"""


def test_parse_standalone_link_becomes_embed(fragments):
    essay = parse_argument(f"[fig](txt/index.html{fragments[0]})\n")
    assert [b.kind for b in essay.blocks] == [EMBED]
    assert essay.blocks[0].embed_url == f"txt/index.html{fragments[0]}"
    assert essay.blocks[0].embed_text == "fig"


def test_parse_inline_link_stays_prose(fragments):
    essay = parse_argument(f"See [this](txt/index.html{fragments[0]}) inline.\n")
    assert [b.kind for b in essay.blocks] == [PROSE]
    assert "<a href=" in essay.blocks[0].content


def test_parse_empty_document():
    assert parse_argument("").blocks == ()


@pytest.mark.parametrize(
    "url,expected",
    [
        ("txt/index.html#d=0000000000000000", EMBED),
        ("txt/#d=0000000000000000", EMBED),
        ("/proj/txt/index.html#d=0000000000000000", EMBED),
        ("https://example.org/essays/txt/#d=0000000000000000", EMBED),
        ("txt/index.html", PROSE),  # no fragment
        ("txt/index.html#", PROSE),  # empty fragment
        ("txt/other.html#d=0000000000000000", PROSE),
        ("nontxt/#d=0000000000000000", PROSE),
    ],
)
def test_embed_url_shapes(url, expected):
    essay = parse_argument(f"[link]({url})\n")
    assert essay.blocks[0].kind == expected


def test_parse_fixture_essay_block_structure(essay_md, fragments):
    essay = parse_argument(essay_md)
    kinds = [b.kind for b in essay.blocks]
    assert kinds == [PROSE, PROSE, EMBED, PROSE, EMBED, PROSE, EMBED, PROSE]
    assert [b.ordinal for b in essay.blocks] == list(range(8))
    assert [b.embed_url for b in essay.embeds] == [
        f"txt/index.html{f}" for f in fragments
    ]


def test_parse_conserves_content(essay_md):
    essay = parse_argument(essay_md)
    assert len(essay.blocks) == len([b for b in essay.blocks if b.kind == PROSE]) + len(
        essay.embeds
    )
    prose_html = "".join(b.content for b in essay.blocks if b.kind == PROSE)
    for phrase in (
        "A worked argument",
        "Some opening prose",
        "must stay a plain link",
        "of observations",
        "Closing remarks.",
    ):
        assert phrase in prose_html


def test_reparse_is_stable(essay_md):
    first = parse_argument(essay_md)
    second = parse_argument(first.source)
    assert [(b.kind, b.embed_url) for b in first.blocks] == [
        (b.kind, b.embed_url) for b in second.blocks
    ]


# --- validate_embeds -------------------------------------------------------


def test_validate_embeds_clean(essay_md, doc):
    essay = parse_argument(essay_md)
    assert validate_embeds(essay, {doc.fingerprint}) == []


def test_validate_embeds_detects_syntax_and_unknown(doc):
    md = (
        "[broken](txt/index.html#a=@@)\n\n"
        f"[elsewhere](txt/index.html#d=0000000000000000&a=design@192)\n\n"
        f"[fine](txt/index.html#d={doc.fingerprint})\n"
    )
    essay = parse_argument(md)
    diagnostics = validate_embeds(essay, {doc.fingerprint})
    assert len(diagnostics) == 2
    assert (diagnostics[0].ordinal, diagnostics[0].failure) == (0, SYNTAX)
    assert (diagnostics[1].ordinal, diagnostics[1].failure) == (1, UNKNOWN_DOCUMENT)
    assert "0000000000000000" in diagnostics[1].detail


def test_validate_embeds_missing_document_key(doc):
    essay = parse_argument("[x](txt/index.html#a=design@192)\n")
    diagnostics = validate_embeds(essay, {doc.fingerprint})
    assert [d.failure for d in diagnostics] == [SYNTAX]


# --- compile_site -----------------------------------------------------------


def test_compile_site_layout_and_manifest(tmp_path, essay_md, doc):
    essay = parse_argument(essay_md)
    manifest = compile_site(
        essay, tmp_path, documents=[doc], title="A worked argument"
    )
    for rel in (
        "index.html",
        "manifest.json",
        "txt/index.html",
        "txt/text.txt",
        "txt/doc.json",
    ):
        assert (tmp_path / rel).is_file(), rel

    embeds = [b for b in manifest.blocks if b.kind == EMBED]
    assert [b.ordinal for b in embeds] == [2, 4, 6]
    data = json.loads((tmp_path / "manifest.json").read_text("utf-8"))
    assert list(data) == ["title", "blocks", "buildFingerprint"]
    assert [b["ordinal"] for b in data["blocks"] if b["kind"] == "embed"] == [2, 4, 6]
    assert data["buildFingerprint"] == manifest.build_fingerprint

    page = (tmp_path / "index.html").read_text("utf-8")
    assert page.count("data-embed-url=") == 3
    assert (tmp_path / "txt/text.txt").read_text("utf-8") == doc.raw
    doc_data = json.loads((tmp_path / "txt/doc.json").read_text("utf-8"))
    assert doc_data["fingerprint"] == doc.fingerprint
    assert len(doc_data["tokens"]) == len(doc.tokens)


def test_compile_site_deterministic(tmp_path, essay_md, doc):
    essay = parse_argument(essay_md)
    first = tmp_path / "one"
    second = tmp_path / "two"
    compile_site(essay, first, documents=[doc], title="T")
    compile_site(essay, second, documents=[doc], title="T")
    for rel in ("index.html", "manifest.json", "txt/doc.json", "txt/text.txt"):
        assert (first / rel).read_bytes() == (second / rel).read_bytes(), rel


def test_compile_site_rejects_unknown_fingerprint(tmp_path, doc):
    essay = parse_argument(
        "[view](txt/index.html#d=0000000000000000&a=design@192)\n"
    )
    with pytest.raises(BrokenEmbedError, match="0000000000000000"):
        compile_site(essay, tmp_path, documents=[doc], title="T")


def test_compile_site_degrades_bad_fragment_to_prose(tmp_path, doc, caplog):
    essay = parse_argument("[view](txt/index.html#a=@@)\n\nProse.\n")
    with caplog.at_level(logging.WARNING, logger="textarium.compiler"):
        manifest = compile_site(essay, tmp_path, documents=[doc], title="T")
    assert [b.kind for b in manifest.blocks] == [PROSE, PROSE]
    assert any("kept as hyperlink" in r.message for r in caplog.records)
    page = (tmp_path / "index.html").read_text("utf-8")
    assert "data-embed-url" not in page
    assert 'href="txt/index.html#a=@@"' in page


def test_compile_site_secondary_documents(tmp_path, doc):
    other = build_document("Another text entirely.", "other")
    essay = parse_argument("Prose only.\n")
    compile_site(essay, tmp_path, documents=[doc, other], title="T")
    assert (tmp_path / "txt/doc.json").is_file()
    assert (tmp_path / f"txt/doc-{other.fingerprint}.json").is_file()
    assert (tmp_path / f"txt/text-{other.fingerprint}.txt").read_text(
        "utf-8"
    ) == other.raw


def test_compile_site_copies_assets(tmp_path, doc):
    assets = tmp_path / "bundle"
    (assets / "txt").mkdir(parents=True)
    (assets / "txt" / "index.html").write_text("<!-- custom view -->")
    (assets / "txt" / "view.js").write_text("// view code")
    (assets / "app.js").write_text("// runtime")
    essay = parse_argument("Prose.\n")
    out = tmp_path / "site"
    compile_site(essay, out, documents=[doc], title="T", assets_dir=assets)
    assert (out / "txt/index.html").read_text() == "<!-- custom view -->"
    assert (out / "txt/view.js").read_text() == "// view code"
    assert (out / "app.js").read_text() == "// runtime"
    # bundled assets change the build fingerprint
    plain = compile_site(essay, tmp_path / "plain", documents=[doc], title="T")
    with_assets = compile_site(
        essay, tmp_path / "again", documents=[doc], title="T", assets_dir=assets
    )
    assert plain.build_fingerprint != with_assets.build_fingerprint


def test_manifest_zero_embeds(tmp_path):
    essay = parse_argument("Just prose.\n\nMore prose.\n")
    manifest = compile_site(essay, tmp_path, title="T")
    assert all(b.kind == PROSE for b in manifest.blocks)
    assert json.loads((tmp_path / "manifest.json").read_text())["blocks"]
