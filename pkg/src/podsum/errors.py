"""Exception types shared across the pipeline."""


class PodsumError(Exception):
    """Base class for all pipeline errors."""


class ParseError(PodsumError):
    """A document or record file could not be parsed."""


class ValidationError(PodsumError):
    """An input violated a contract (bad shapes, duplicate ids, bad flags)."""


class TransportError(PodsumError):
    """A model-server request failed at the HTTP or protocol level."""


class TrainingError(PodsumError):
    """Training aborted (non-finite loss or inconsistent dataset)."""
