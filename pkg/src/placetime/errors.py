"""Exception types shared across the toolkit."""


class PlacetimeError(Exception):
    """Base class for all toolkit errors."""


class TrainingError(PlacetimeError):
    """Raised when a profile cannot be trained (e.g. corpus too short)."""


class ScoringError(PlacetimeError):
    """Raised when a byte sequence cannot be scored."""


class ConfigError(PlacetimeError):
    """Raised for invalid configuration (empty profile sets, bad flags)."""


class DecodeError(PlacetimeError):
    """Raised when bytes are invalid for the declared encoding.

    Carries the byte offset of the first offending byte.
    """

    def __init__(self, message, offset=None):
        super().__init__(message)
        self.offset = offset


class LoadError(PlacetimeError):
    """Raised when a data file (gazetteer, lexicon, outline, ...) is malformed."""


class ContractError(PlacetimeError):
    """Raised when an operation is called outside its contract."""
