"""Shared exception types."""


class ParseError(ValueError):
    """Malformed input text (graph, decomposition, or CNF files)."""


class LimitExceeded(RuntimeError):
    """A configured resource cap (cover size, width, search budget) was hit."""
