"""Exception types shared across the package."""


class SchemaError(ValueError):
    """Raised when a CSV or JSON artifact does not match its expected layout.

    The message always names the offending row or field so the artifact can
    be fixed by hand.
    """


class ModelDocumentError(ValueError):
    """Raised when a serialized model document cannot be decoded."""
