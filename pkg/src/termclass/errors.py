"""Exception types shared across the package."""


class TermclassError(Exception):
    """Base class for errors raised by this package."""


class DataError(TermclassError):
    """A corpus, document, or model file is malformed or violates a precondition."""


class ConfigError(TermclassError):
    """An experiment or preprocessing configuration is invalid."""
