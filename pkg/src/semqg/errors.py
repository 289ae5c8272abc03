"""Exception and warning types shared across the package."""


class SemqgError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(SemqgError):
    """Malformed input bytes. Carries the byte offset of the failure."""

    def __init__(self, message: str, byte_offset: int):
        super().__init__(f"{message} (byte offset {byte_offset})")
        self.byte_offset = byte_offset


class SchemaError(SemqgError):
    """Structurally valid JSON that does not match the annotations schema."""

    def __init__(self, field: str, message: str = "missing or malformed"):
        super().__init__(f"field '{field}': {message}")
        self.field = field


class ShapeError(SemqgError):
    """Dimension mismatch in a numeric operation. Names the offending op."""

    def __init__(self, op: str, detail: str):
        super().__init__(f"{op}: {detail}")
        self.op = op


class ConfigError(SemqgError):
    """Invalid configuration, e.g. an edge type without a weight matrix."""


class EncodingError(SemqgError):
    """Encoder-side failure: empty document, empty answer, bad span."""


class LabelingError(SemqgError):
    """Ground-truth labels required but absent."""


class TrainingError(SemqgError):
    """Training aborted (divergence, empty dataset, missing supervision)."""


class OracleError(SemqgError):
    """The finite-difference oracle could not evaluate its target."""


class SemqgWarning(UserWarning):
    """Recoverable conditions recorded through the warnings machinery."""
