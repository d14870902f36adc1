"""
Logic:
- Exception hierarchy for the cost model
- Everything derives from ValueError so callers that only know ValueError still work
"""


class ModelError(ValueError):
    """Base class for cost model failures."""


class DomainError(ModelError):
    """An argument lies outside the domain of a formula."""


class ConfigError(ModelError):
    """The configuration document could not be parsed or validated."""


class MappingNotTabulatedError(ModelError):
    """A chain mapping was requested for a code distance with no tabulated layout."""


class CapacityError(ModelError):
    """A chain holds more ions than the processor node capacity."""


class DatasetError(ModelError):
    """An embedded dataset has no row for the requested key."""


class NoFiniteSpareError(DomainError):
    """No finite number of spare pairs meets the loss threshold."""


class MonotonicityError(ModelError):
    """Success rate decreased while the improvement factor increased."""

    def __init__(self, message, lower_sample, upper_sample):
        super().__init__(message)
        self.lower_sample = lower_sample
        self.upper_sample = upper_sample


class UsageError(ModelError):
    """The command line could not be parsed."""
