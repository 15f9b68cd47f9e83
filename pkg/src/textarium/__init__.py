"""Deterministic text-interpretation engine with shareable URL states.

Source texts get a stable token table; annotations anchor to token spans;
complete interpretation states round-trip through a human-readable URL
fragment; essays embed those states and compile to a static scrollytelling
site.
"""

from .analysis import (
    MatchSpec,
    Suggestion,
    find_related,
    levenshtein,
    similarity,
    stem,
    suggest_groups,
)
from .compiler import (
    ArgumentDocument,
    ArgumentManifest,
    Block,
    EmbedDiagnostic,
    compile_site,
    parse_argument,
    validate_embeds,
)
from .errors import (
    BrokenEmbedError,
    ConfigError,
    DocumentMismatchError,
    FragmentParseError,
    PatternError,
    SpanRangeError,
    StaleStateError,
    TextariumError,
    ValidationError,
)
from .state import (
    PALETTE,
    AbstractionGroup,
    Annotation,
    InterpretationState,
    build_state,
    canonicalize,
    decode,
    empty_state,
    encode,
    palette_color,
    parse_fragment,
)
from .textmodel import (
    Document,
    Token,
    build_document,
    fingerprint,
    token_slice,
    tokenize,
)

__version__ = "0.1.0"

__all__ = [
    "AbstractionGroup",
    "Annotation",
    "ArgumentDocument",
    "ArgumentManifest",
    "Block",
    "BrokenEmbedError",
    "ConfigError",
    "Document",
    "DocumentMismatchError",
    "EmbedDiagnostic",
    "FragmentParseError",
    "InterpretationState",
    "MatchSpec",
    "PALETTE",
    "PatternError",
    "SpanRangeError",
    "StaleStateError",
    "Suggestion",
    "TextariumError",
    "Token",
    "ValidationError",
    "build_document",
    "build_state",
    "canonicalize",
    "compile_site",
    "decode",
    "empty_state",
    "encode",
    "find_related",
    "fingerprint",
    "levenshtein",
    "palette_color",
    "parse_argument",
    "parse_fragment",
    "similarity",
    "stem",
    "suggest_groups",
    "token_slice",
    "tokenize",
    "validate_embeds",
]
