"""Exception types shared across the package."""

from __future__ import annotations


class MixedBoError(Exception):
    """Base class for errors raised by this package."""


class SpaceError(MixedBoError):
    """Malformed search-space definition."""


class InvalidConfigError(MixedBoError):
    """A configuration does not belong to the search space."""


class InvalidPointError(MixedBoError):
    """A relaxed point has the wrong width or leaves the box."""


class SingularModelError(MixedBoError):
    """Gram matrix could not be factorized even at the maximum jitter."""


class SamplerStuckError(MixedBoError):
    """Slice sampler shrank its bracket to zero width without accepting."""


class InsufficientDataError(MixedBoError):
    """An operation needs more observations than are available."""


class InvalidObservationError(MixedBoError):
    """Observed value is not a finite real number."""


class GridTooLargeError(MixedBoError):
    """Grid enumeration would exceed the configured cap."""


class ExternalObjectiveError(MixedBoError):
    """External objective process failed or printed something unparseable."""


class IncompleteGridError(MixedBoError):
    """Records are missing (strategy, repetition, iteration) cells."""
