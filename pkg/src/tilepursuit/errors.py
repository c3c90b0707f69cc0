"""Exception types shared across the package."""


class TilePursuitError(Exception):
    """Base class for all library errors."""


class InvalidShapeError(TilePursuitError):
    """A matrix or grid dimension is empty or inconsistent."""


class InvalidTileError(TilePursuitError):
    """Tile indices are empty or out of range for the bound shape."""


class InvalidPartitionError(TilePursuitError):
    """Hypothesis column partition blocks overlap or do not cover the column set."""


class EnumerationTooLargeError(TilePursuitError):
    """The permutation space (n!)^m exceeds the enumeration cap."""


class DegenerateCovarianceError(TilePursuitError):
    """A covariance matrix has no usable variance to whiten."""


class DegenerateDirectionError(TilePursuitError):
    """A projection direction has (near-)zero variance under the reference distribution."""


class SelectionTooSmallError(TilePursuitError):
    """A point selection is too small for spread statistics."""


class EmptyTileError(TilePursuitError):
    """No column passed the attribute-selection threshold.

    Carries the full per-column report so callers can show the user
    why nothing was selected.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class IngestionError(TilePursuitError):
    """Input data could not be loaded or left no usable rows."""


class ReplayError(TilePursuitError):
    """A history log entry is malformed; carries the offending offset."""

    def __init__(self, message, offset=None):
        super().__init__(message)
        self.offset = offset
