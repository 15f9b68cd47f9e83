import random
from pathlib import Path

import pytest

from textarium import build_document, build_state

DATA = Path(__file__).parent / "data"

# Word shapes that stress the codec: plain ASCII, accents, non-Latin
# scripts, digits, and the in-token joiners (apostrophe, hyphen).
WORD_POOL = [
    "design", "reading", "margin", "pattern", "Prometheus", "essay",
    "naïve", "Begriff", "λόγος", "язык", "语言", "café", "it’s", "don’t",
    "re-design", "close-reading", "B2B", "2024", "αβγ", "Führung",
    "tongue", "dialect", "weigh", "connect", "über", "señal",
]

# Separators between tokens, several of which are reserved in the grammar
# and must survive percent-encoding inside multi-token phrases.
SEPARATOR_POOL = [
    " ", "  ", ", ", ". ", "; ", ": ", "\n", " — ", " & ", " + ",
    " @ ", " = ", " # ", " % ", " (", ") ", "…", "\t",
]

GROUP_NAME_POOL = [
    "languages", "motifs", "design words", "καιρός", "Leitmotiv",
    "a&b", "x=y", "k+v", "semi;colon", "at@sign", "hy-phen",
    "per%cent", "comma,name", "hash#tag", "colon:name", "",
]


def make_random_document(rng: random.Random, min_tokens=150, max_tokens=250):
    target = rng.randint(min_tokens, max_tokens)
    parts = []
    for _ in range(target):
        parts.append(rng.choice(WORD_POOL))
        parts.append(rng.choice(SEPARATOR_POOL))
    return build_document("".join(parts), title="random")


def make_random_state(rng: random.Random, doc, max_annotations=50, max_groups=10):
    """A canonical state with random spans, groups, ordering, and focus."""
    n = len(doc.tokens)
    wanted = rng.randint(0, max_annotations)
    spans = []
    prev_end = -1
    for start in sorted(rng.sample(range(n), min(wanted, n))):
        if start <= prev_end:
            continue
        end = min(start + rng.choice((0, 0, 0, 1, 2)), n - 1)
        spans.append((start, end))
        prev_end = end
    free = list(range(len(spans)))
    rng.shuffle(free)
    groups = []
    while free and len(groups) < max_groups and rng.random() < 0.75:
        size = rng.randint(1, min(4, len(free)))
        members = [free.pop() for _ in range(size)]
        groups.append((rng.choice(GROUP_NAME_POOL), members))
    pane_order = list(range(len(spans)))
    if rng.random() < 0.5:
        rng.shuffle(pane_order)
    focus = rng.randrange(n) if n and rng.random() < 0.3 else None
    return build_state(doc, spans, groups, pane_order, focus)


@pytest.fixture(scope="session")
def fixture_text() -> str:
    return (DATA / "fixture_text.txt").read_text("utf-8")


@pytest.fixture(scope="session")
def doc(fixture_text):
    return build_document(fixture_text, title="Margins and Meanings")


@pytest.fixture()
def rng():
    return random.Random(0x7E87A)
