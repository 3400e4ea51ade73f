"""Shared exception types."""


class TextfrayError(Exception):
    """Base class for all package errors."""


class DataFormatError(TextfrayError):
    """A resource or dataset file is missing, truncated or malformed."""


class TrainingError(TextfrayError):
    """The victim training corpus violates a precondition."""


class QueryError(TextfrayError):
    """A victim query failed (transport error, bad payload, timeout)."""
