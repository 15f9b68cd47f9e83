"""Essay parsing and the static scrollytelling site compiler.

An essay is plain CommonMark. A paragraph that consists of nothing but a
single link into the interpretation view (a path ending in ``txt/`` or
``txt/index.html`` with a non-empty fragment) becomes an *embed*: the
compiled page carries an inert placeholder with the target URL in a data
attribute, and the browser runtime turns it into a live frame when the
reader scrolls to it. Everything else is prose.

Builds are deterministic: identical inputs produce byte-identical output
files, which makes golden-file testing and caching trivial.
"""

from __future__ import annotations

import html
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from markdown_it import MarkdownIt
from markdown_it.token import Token as MarkdownToken

from .errors import BrokenEmbedError, FragmentParseError
from .state import parse_fragment
from .textmodel import Document, document_to_dict, fnv1a64

log = logging.getLogger(__name__)

PROSE = "prose"
EMBED = "embed"

SYNTAX = "syntax"
UNKNOWN_DOCUMENT = "unknown-document"


@dataclass(frozen=True)
class Block:
    """One top-level unit of an essay: rendered prose or an embed."""

    ordinal: int
    kind: str
    content: str = ""  # rendered HTML fragment (prose only)
    embed_url: str = ""
    embed_text: str = ""


@dataclass(frozen=True)
class ArgumentDocument:
    source: str
    blocks: tuple[Block, ...]

    @property
    def embeds(self) -> tuple[Block, ...]:
        return tuple(b for b in self.blocks if b.kind == EMBED)


@dataclass(frozen=True)
class EmbedDiagnostic:
    ordinal: int
    url: str
    failure: str  # SYNTAX or UNKNOWN_DOCUMENT
    detail: str


@dataclass(frozen=True)
class ManifestBlock:
    ordinal: int
    kind: str
    embed_url: str | None = None


@dataclass(frozen=True)
class ArgumentManifest:
    title: str
    blocks: tuple[ManifestBlock, ...]
    build_fingerprint: str


def _is_interpretation_url(url: str) -> bool:
    path, sep, fragment = url.partition("#")
    if not sep or not fragment:
        return False
    path = path.split("?", 1)[0]
    return (
        path in ("txt/", "txt/index.html")
        or path.endswith("/txt/")
        or path.endswith("/txt/index.html")
    )


def _single_link(inline: MarkdownToken) -> tuple[str, str] | None:
    """(href, text) when the inline content is exactly one link."""
    children = inline.children or []
    if len(children) < 2:
        return None
    first, last = children[0], children[-1]
    if first.type != "link_open" or last.type != "link_close":
        return None
    if any(c.type != "text" for c in children[1:-1]):
        return None
    href = first.attrs.get("href", "")
    text = "".join(c.content for c in children[1:-1])
    return str(href), text


def _top_level_runs(tokens: list[MarkdownToken]) -> list[list[MarkdownToken]]:
    runs: list[list[MarkdownToken]] = []
    depth = 0
    for token in tokens:
        if depth == 0:
            runs.append([])
        runs[-1].append(token)
        depth += token.nesting
    return runs


def parse_argument(markdown: str) -> ArgumentDocument:
    """Parse an essay into ordered prose and embed blocks.

    Embed detection is purely structural here; whether an embed's fragment
    actually parses is the business of :func:`validate_embeds`.
    """
    md = MarkdownIt("commonmark")
    tokens = md.parse(markdown)
    blocks: list[Block] = []
    for run in _top_level_runs(tokens):
        ordinal = len(blocks)
        if (
            len(run) == 3
            and run[0].type == "paragraph_open"
            and run[1].type == "inline"
        ):
            link = _single_link(run[1])
            if link is not None and _is_interpretation_url(link[0]):
                blocks.append(
                    Block(
                        ordinal=ordinal,
                        kind=EMBED,
                        embed_url=link[0],
                        embed_text=link[1],
                    )
                )
                continue
        rendered = md.renderer.render(run, md.options, {})
        blocks.append(Block(ordinal=ordinal, kind=PROSE, content=rendered))
    return ArgumentDocument(source=markdown, blocks=tuple(blocks))


def _embed_fragment(url: str) -> str:
    return "#" + url.partition("#")[2]


def validate_embeds(
    essay: ArgumentDocument, known_docs: Iterable[str]
) -> list[EmbedDiagnostic]:
    """Check each embed's fragment syntax and document fingerprint.

    Returns diagnostics rather than raising; an empty list means every
    embed can be resolved.
    """
    known = set(known_docs)
    diagnostics = []
    for block in essay.embeds:
        fragment = _embed_fragment(block.embed_url)
        try:
            parsed = parse_fragment(fragment)
        except FragmentParseError as exc:
            diagnostics.append(
                EmbedDiagnostic(block.ordinal, block.embed_url, SYNTAX, str(exc))
            )
            continue
        if parsed.fingerprint is None:
            diagnostics.append(
                EmbedDiagnostic(
                    block.ordinal,
                    block.embed_url,
                    SYNTAX,
                    "fragment has no document key 'd'",
                )
            )
        elif parsed.fingerprint not in known:
            diagnostics.append(
                EmbedDiagnostic(
                    block.ordinal,
                    block.embed_url,
                    UNKNOWN_DOCUMENT,
                    f"no imported document has fingerprint {parsed.fingerprint}",
                )
            )
    return diagnostics


# --- page templates ----------------------------------------------------

_PAGE_TEMPLATE = """<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<meta name="viewport" content="width=device-width, initial-scale=1">
<title>{title}</title>
<link rel="stylesheet" href="essay.css">
<script src="app.js" defer></script>
</head>
<body>
<main class="essay">
{body}
</main>
</body>
</html>
"""

_BUILTIN_TXT_INDEX = """<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>Interpretation view</title>
</head>
<body>
<p>The interactive interpretation view is not bundled in this build.
The document and its token table are served as <a href="doc.json">doc.json</a>,
the source text as <a href="text.txt">text.txt</a>.</p>
</body>
</html>
"""

_BUILTIN_APP_JS = (
    "// Scrollytelling runtime placeholder: embed slots keep their fallback links.\n"
)

_BUILTIN_ESSAY_CSS = """body { margin: 0; font: 18px/1.6 Georgia, serif; color: #1a1a1a; }
.essay { max-width: 42rem; margin: 0 auto; padding: 3rem 1.25rem 6rem; }
.block-embed { margin: 2rem 0; }
.frame-slot { border: 1px solid #d0d0d0; border-radius: 4px; padding: 1rem; background: #fafafa; }
.frame-slot iframe { width: 100%; height: 60vh; border: 0; }
"""


def _render_block(block: Block, degraded: set[int]) -> str:
    if block.kind == EMBED and block.ordinal not in degraded:
        url = html.escape(block.embed_url, quote=True)
        text = html.escape(block.embed_text or block.embed_url)
        return (
            f'<section class="block block-embed" data-ordinal="{block.ordinal}">\n'
            f'<div class="frame-slot" data-embed-url="{url}">'
            f'<a href="{url}">{text}</a></div>\n'
            "</section>"
        )
    if block.kind == EMBED:
        url = html.escape(block.embed_url, quote=True)
        text = html.escape(block.embed_text or block.embed_url)
        content = f'<p><a href="{url}">{text}</a></p>\n'
    else:
        content = block.content
    return (
        f'<section class="block block-prose" data-ordinal="{block.ordinal}">\n'
        f"{content}</section>"
    )


def manifest_to_dict(manifest: ArgumentManifest) -> dict:
    blocks = []
    for b in manifest.blocks:
        entry: dict = {"ordinal": b.ordinal, "kind": b.kind}
        if b.kind == EMBED:
            entry["embedUrl"] = b.embed_url
        blocks.append(entry)
    return {
        "title": manifest.title,
        "blocks": blocks,
        "buildFingerprint": manifest.build_fingerprint,
    }


def _dump_json(data: dict) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def _collect_assets(assets_dir: Path | None) -> dict[str, bytes]:
    """Relative path -> content for every file in the asset bundle."""
    if assets_dir is None:
        return {}
    root = Path(assets_dir)
    if not root.is_dir():
        return {}
    return {
        str(p.relative_to(root)).replace("\\", "/"): p.read_bytes()
        for p in sorted(root.rglob("*"))
        if p.is_file()
    }


def _build_fingerprint(
    title: str,
    essay_source: str,
    documents: Sequence[Document],
    assets: dict[str, bytes],
) -> str:
    h = bytearray()
    for part in [title, essay_source]:
        h += part.encode("utf-8") + b"\x00"
    for doc in documents:
        h += doc.fingerprint.encode() + b"\x00" + doc.raw.encode("utf-8") + b"\x00"
    for name in sorted(assets):
        h += name.encode("utf-8") + b"\x00" + assets[name] + b"\x00"
    return format(fnv1a64(bytes(h)), "016x")


def compile_site(
    essay: ArgumentDocument,
    out_dir: str | Path,
    *,
    documents: Sequence[Document] = (),
    title: str = "",
    assets_dir: str | Path | None = None,
) -> ArgumentManifest:
    """Write the static site and return its manifest.

    Layout: ``index.html`` and ``manifest.json`` at the root, the
    interpretation view under ``txt/`` (``index.html``, ``text.txt``,
    ``doc.json``; additional documents get fingerprint-suffixed files).

    Embeds whose fragment does not even parse degrade to plain hyperlinks
    with a warning; embeds naming a fingerprint that matches none of the
    given documents raise :class:`BrokenEmbedError`.
    """
    out = Path(out_dir)
    known = {doc.fingerprint for doc in documents}
    degraded: set[int] = set()
    broken: list[str] = []
    for diagnostic in validate_embeds(essay, known):
        if diagnostic.failure == SYNTAX:
            degraded.add(diagnostic.ordinal)
            log.warning(
                "block %d: embed fragment rejected (%s); kept as hyperlink",
                diagnostic.ordinal,
                diagnostic.detail,
            )
        else:
            broken.append(diagnostic.url)
    if broken:
        raise BrokenEmbedError(
            "embedded states reference unknown documents: " + ", ".join(broken)
        )

    assets = _collect_assets(Path(assets_dir) if assets_dir else None)
    manifest = ArgumentManifest(
        title=title,
        blocks=tuple(
            ManifestBlock(
                ordinal=b.ordinal,
                kind=EMBED if b.kind == EMBED and b.ordinal not in degraded else PROSE,
                embed_url=b.embed_url
                if b.kind == EMBED and b.ordinal not in degraded
                else None,
            )
            for b in essay.blocks
        ),
        build_fingerprint=_build_fingerprint(title, essay.source, documents, assets),
    )

    body = "\n".join(_render_block(b, degraded) for b in essay.blocks)
    page = _PAGE_TEMPLATE.format(title=html.escape(title), body=body)

    (out / "txt").mkdir(parents=True, exist_ok=True)
    (out / "index.html").write_text(page, encoding="utf-8")
    (out / "manifest.json").write_text(
        _dump_json(manifest_to_dict(manifest)), encoding="utf-8"
    )

    for position, doc in enumerate(documents):
        suffix = "" if position == 0 else f"-{doc.fingerprint}"
        (out / "txt" / f"text{suffix}.txt").write_text(doc.raw, encoding="utf-8")
        (out / "txt" / f"doc{suffix}.json").write_text(
            _dump_json(document_to_dict(doc)), encoding="utf-8"
        )

    for name, content in assets.items():
        target = out / name
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(content)
    if "txt/index.html" not in assets:
        (out / "txt" / "index.html").write_text(_BUILTIN_TXT_INDEX, encoding="utf-8")
    if "app.js" not in assets:
        (out / "app.js").write_text(_BUILTIN_APP_JS, encoding="utf-8")
    if "essay.css" not in assets:
        (out / "essay.css").write_text(_BUILTIN_ESSAY_CSS, encoding="utf-8")

    return manifest
