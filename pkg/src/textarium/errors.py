"""Exception types shared across the package."""


class TextariumError(Exception):
    """Base class for all errors raised by this package."""


class SpanRangeError(TextariumError, IndexError):
    """A token index or span lies outside the document."""


class ValidationError(TextariumError, ValueError):
    """A state or group violates a structural invariant."""


class FragmentParseError(TextariumError, ValueError):
    """A URL fragment is syntactically malformed.

    ``position`` is the zero-based character offset into the fragment
    string (including the leading ``#``) where the fault was detected.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class PatternError(TextariumError, ValueError):
    """A regular expression is invalid or uses an unsupported construct.

    ``position`` is the zero-based offset of the syntax fault within the
    pattern, or -1 when it cannot be localized.
    """

    def __init__(self, message: str, position: int = -1):
        if position >= 0:
            super().__init__(f"{message} (at position {position})")
        else:
            super().__init__(message)
        self.position = position


class DocumentMismatchError(TextariumError):
    """A shared state refers to a different source text."""


class StaleStateError(TextariumError):
    """A recorded annotation word no longer matches the document span."""


class BrokenEmbedError(TextariumError):
    """An essay embeds an interpretation state that cannot be resolved."""


class ConfigError(TextariumError):
    """A project directory or configuration file is unusable."""
