"""Command-line interface for the whole pipeline.

Commands: ``init``, ``import``, ``state encode``, ``state decode``,
``build``, ``serve``. Exit codes are part of the contract:

    0  success
    2  init refused (directory not empty)
    3  import failed (unreadable or not UTF-8 text)
    4  state codec failure (validation, parse, or document mismatch)
    5  build produced embed diagnostics
    6  serve failed (port in use, nothing to serve)
"""

from __future__ import annotations

import argparse
import json
import shutil
import sys
from functools import partial
from http.server import SimpleHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from . import compiler, state as state_codec
from .errors import ConfigError, FragmentParseError, TextariumError
from .project import SITE_DIR, SOURCES_DIR, Project, scaffold
from .textmodel import Document, build_document, document_to_dict

EXIT_OK = 0
EXIT_INIT_REFUSED = 2
EXIT_IMPORT_FAILED = 3
EXIT_CODEC_FAILED = 4
EXIT_BUILD_DIAGNOSTICS = 5
EXIT_SERVE_FAILED = 6


def _fail(message: str, code: int) -> int:
    print(f"textarium: {message}", file=sys.stderr)
    return code


def cmd_init(args: argparse.Namespace) -> int:
    try:
        root = scaffold(args.directory)
    except ConfigError as exc:
        return _fail(str(exc), EXIT_INIT_REFUSED)
    print(f"initialized project in {root}")
    return EXIT_OK


def _write_site_document(site_dir: Path, doc: Document, position: int) -> None:
    suffix = "" if position == 0 else f"-{doc.fingerprint}"
    txt_dir = site_dir / "txt"
    txt_dir.mkdir(parents=True, exist_ok=True)
    (txt_dir / f"text{suffix}.txt").write_text(doc.raw, encoding="utf-8")
    (txt_dir / f"doc{suffix}.json").write_text(
        json.dumps(document_to_dict(doc), indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )


def cmd_import(args: argparse.Namespace) -> int:
    try:
        project = Project.load()
    except ConfigError as exc:
        return _fail(str(exc), EXIT_IMPORT_FAILED)
    source = Path(args.file)
    try:
        text = source.read_bytes().decode("utf-8")
    except OSError as exc:
        return _fail(f"cannot read {source}: {exc}", EXIT_IMPORT_FAILED)
    except UnicodeDecodeError:
        return _fail(f"{source} is not UTF-8 text", EXIT_IMPORT_FAILED)

    sources_dir = project.root / SOURCES_DIR
    try:
        rel = source.resolve().relative_to(project.root.resolve())
        inside = True
    except ValueError:
        inside = False
    if inside:
        rel_path = rel.as_posix()
    else:
        sources_dir.mkdir(exist_ok=True)
        target = sources_dir / source.name
        shutil.copyfile(source, target)
        rel_path = f"{SOURCES_DIR}/{source.name}"
    project.register_source(rel_path)

    doc = build_document(text, title=source.stem)
    position = project.config.sources.index(rel_path)
    _write_site_document(project.site_dir, doc, position)
    print(f"{doc.fingerprint} {len(doc.tokens)} tokens")
    return EXIT_OK


def cmd_state_encode(args: argparse.Namespace) -> int:
    try:
        data = json.loads(Path(args.file).read_text("utf-8"))
    except OSError as exc:
        return _fail(f"cannot read state file: {exc}", EXIT_CODEC_FAILED)
    except json.JSONDecodeError as exc:
        return _fail(f"state file is not valid JSON: {exc}", EXIT_CODEC_FAILED)
    try:
        parsed = state_codec.state_from_dict(data)
        fragment = state_codec.encode(state_codec.canonicalize(parsed))
    except TextariumError as exc:
        return _fail(str(exc), EXIT_CODEC_FAILED)
    print(fragment)
    return EXIT_OK


def cmd_state_decode(args: argparse.Namespace) -> int:
    fragment = args.fragment
    try:
        parsed = state_codec.parse_fragment(fragment)
        project = Project.load()
        documents = project.load_documents()
        if not documents:
            raise ConfigError("project has no imported source texts")
        if parsed.fingerprint is None:
            doc = documents[0]
        else:
            matches = [d for d in documents if d.fingerprint == parsed.fingerprint]
            if not matches:
                raise ConfigError(
                    f"no project document has fingerprint {parsed.fingerprint}"
                )
            doc = matches[0]
        decoded = state_codec.decode(fragment, doc)
    except TextariumError as exc:
        return _fail(str(exc), EXIT_CODEC_FAILED)
    for key in parsed.unknown_keys:
        print(f"textarium: ignoring unknown key {key!r}", file=sys.stderr)
    print(json.dumps(state_codec.state_to_dict(decoded), indent=2, ensure_ascii=False))
    return EXIT_OK


def cmd_build(args: argparse.Namespace) -> int:
    try:
        project = Project.load()
        documents = project.load_documents()
        essay = compiler.parse_argument(project.essay_path.read_text("utf-8"))
    except (ConfigError, OSError) as exc:
        return _fail(str(exc), 1)

    diagnostics = compiler.validate_embeds(
        essay, [d.fingerprint for d in documents]
    )
    if diagnostics:
        for d in diagnostics:
            print(
                f"textarium: block {d.ordinal}: {d.failure}: {d.url} ({d.detail})",
                file=sys.stderr,
            )
        return EXIT_BUILD_DIAGNOSTICS

    manifest = compiler.compile_site(
        essay,
        project.site_dir,
        documents=documents,
        title=project.config.title,
        assets_dir=project.assets_dir,
    )
    embeds = sum(1 for b in manifest.blocks if b.kind == compiler.EMBED)
    print(f"{embeds} embeds, {len(diagnostics)} warnings")
    return EXIT_OK


class _StaticHandler(SimpleHTTPRequestHandler):
    """Static files only, never cached; content types from the file name."""

    def end_headers(self):
        self.send_header("Cache-Control", "no-store")
        super().end_headers()

    def log_message(self, format, *log_args):  # noqa: A002 - stdlib signature
        pass


def make_server(site_dir: Path, port: int) -> ThreadingHTTPServer:
    handler = partial(_StaticHandler, directory=str(site_dir))
    return ThreadingHTTPServer(("127.0.0.1", port), handler)


def cmd_serve(args: argparse.Namespace) -> int:
    try:
        project = Project.load()
    except ConfigError as exc:
        return _fail(str(exc), EXIT_SERVE_FAILED)
    site = project.site_dir
    if not site.is_dir():
        return _fail(f"{site} does not exist; run `textarium build` first", EXIT_SERVE_FAILED)
    port = args.port if args.port is not None else project.config.port
    try:
        server = make_server(site, port)
    except OSError as exc:
        return _fail(f"cannot serve on port {port}: {exc}", EXIT_SERVE_FAILED)
    print(f"serving {site} at http://127.0.0.1:{port}/ (Ctrl-C to stop)")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="textarium",
        description="Annotate texts, share states as URLs, compile scrollytelling essays.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_init = sub.add_parser("init", help="scaffold a new project directory")
    p_init.add_argument("directory")
    p_init.set_defaults(func=cmd_init)

    p_import = sub.add_parser("import", help="import a UTF-8 source text")
    p_import.add_argument("file")
    p_import.set_defaults(func=cmd_import)

    p_state = sub.add_parser("state", help="encode or decode interpretation states")
    state_sub = p_state.add_subparsers(dest="state_command", required=True)
    p_encode = state_sub.add_parser("encode", help="state JSON file -> URL fragment")
    p_encode.add_argument("file")
    p_encode.set_defaults(func=cmd_state_encode)
    p_decode = state_sub.add_parser("decode", help="URL fragment -> state JSON")
    p_decode.add_argument("fragment")
    p_decode.set_defaults(func=cmd_state_decode)

    p_build = sub.add_parser("build", help="compile the static site into site/")
    p_build.set_defaults(func=cmd_build)

    p_serve = sub.add_parser("serve", help="serve the compiled site locally")
    p_serve.add_argument("--port", type=int, default=None)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def run() -> None:
    raise SystemExit(main())
