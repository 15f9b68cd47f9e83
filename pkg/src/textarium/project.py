"""Project directories: a key=value config, source texts, and one essay."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .textmodel import Document, build_document

CONFIG_NAME = "textarium.conf"
ESSAY_NAME = "essay.md"
SOURCES_DIR = "sources"
SITE_DIR = "site"

DEFAULT_CONFIG = """# Textarium project configuration.
title = Untitled project

# One "source =" line per text file; the first is the primary document.
# source = sources/example.txt

# Analysis defaults used by the interpretation view.
similarity_threshold = 0.80
suggestion_threshold = 0.75

# Local preview server.
port = 8000

# Optional directory with the compiled web UI (copied into the site build).
# assets = frontend/dist
"""


@dataclass
class Config:
    title: str = "Untitled project"
    sources: list[str] = field(default_factory=list)
    similarity_threshold: float = 0.80
    suggestion_threshold: float = 0.75
    port: int = 8000
    assets: str | None = None
    extras: dict[str, str] = field(default_factory=dict)


def parse_config(text: str) -> Config:
    """Parse the plain key=value configuration format.

    Lines are ``key = value``; blank lines and ``#`` comments are ignored.
    ``source`` may repeat, one line per text. Unknown keys are kept so a
    newer tool's settings survive a round trip.
    """
    config = Config()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        try:
            if key == "title":
                config.title = value
            elif key == "source":
                config.sources.append(value)
            elif key == "similarity_threshold":
                config.similarity_threshold = float(value)
            elif key == "suggestion_threshold":
                config.suggestion_threshold = float(value)
            elif key == "port":
                config.port = int(value)
            elif key == "assets":
                config.assets = value
            else:
                config.extras[key] = value
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from exc
    return config


def scaffold(directory: str | Path) -> Path:
    """Create a fresh project skeleton; refuses a non-empty directory."""
    root = Path(directory)
    if root.exists():
        if not root.is_dir():
            raise ConfigError(f"{root} exists and is not a directory")
        if any(root.iterdir()):
            raise ConfigError(f"{root} is not empty")
    root.mkdir(parents=True, exist_ok=True)
    (root / CONFIG_NAME).write_text(DEFAULT_CONFIG, encoding="utf-8")
    (root / ESSAY_NAME).write_text("", encoding="utf-8")
    (root / SOURCES_DIR).mkdir()
    return root


def project_root() -> Path:
    """Current project root: $TEXTARIUM_ROOT or the working directory."""
    return Path(os.environ.get("TEXTARIUM_ROOT") or os.getcwd())


@dataclass
class Project:
    root: Path
    config: Config

    @classmethod
    def load(cls, root: str | Path | None = None) -> "Project":
        base = Path(root) if root is not None else project_root()
        conf_path = base / CONFIG_NAME
        if not conf_path.is_file():
            raise ConfigError(f"no {CONFIG_NAME} in {base}")
        return cls(root=base, config=parse_config(conf_path.read_text("utf-8")))

    @property
    def essay_path(self) -> Path:
        return self.root / ESSAY_NAME

    @property
    def site_dir(self) -> Path:
        return self.root / SITE_DIR

    @property
    def assets_dir(self) -> Path | None:
        if self.config.assets:
            candidate = self.root / self.config.assets
            if candidate.is_dir():
                return candidate
        return None

    def source_paths(self) -> list[Path]:
        return [self.root / rel for rel in self.config.sources]

    def load_documents(self) -> list[Document]:
        documents = []
        for path in self.source_paths():
            if not path.is_file():
                raise ConfigError(f"configured source {path} does not exist")
            documents.append(
                build_document(path.read_text("utf-8"), title=path.stem)
            )
        return documents

    def register_source(self, rel_path: str) -> None:
        """Append a ``source =`` line to the config if not already present."""
        if rel_path in self.config.sources:
            return
        conf_path = self.root / CONFIG_NAME
        text = conf_path.read_text("utf-8")
        if text and not text.endswith("\n"):
            text += "\n"
        conf_path.write_text(text + f"source = {rel_path}\n", encoding="utf-8")
        self.config.sources.append(rel_path)
