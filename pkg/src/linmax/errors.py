"""Semantic exception types shared across the package."""


class ConfigurationError(Exception):
    """An experiment configuration is invalid or fails a precondition.

    Raised before any simulation work starts, so a refused run never
    leaves partial output behind.
    """


class MonotonicityError(ValueError):
    """A step function required to be nondecreasing has a downward jump."""


class UnsupportedModelError(TypeError):
    """A coefficient model of an unknown family was passed to a checker."""


class NonSummableTailError(ValueError):
    """A coefficient model whose absolute tail sum diverges was asked for
    a summable-tail quantity (e.g. a truncation order)."""
