"""Exception hierarchy shared across the toolkit.

Every error raised on purpose derives from :class:`PmtError` so callers
(CLI, HTTP service) can separate expected validation failures from bugs.
"""


class PmtError(Exception):
    """Base class for all toolkit errors."""


class InvalidBasinError(PmtError):
    """A deflection basin is missing a sensor value or has a non-positive one."""


class InvalidRecordError(PmtError):
    """A measurement record violates a domain invariant."""


class UnitError(PmtError):
    """Unknown unit name or a non-finite value passed to a conversion."""


class InsufficientSamplesError(PmtError):
    """Too few samples to derive a meaningful threshold."""


class DegenerateThresholdError(PmtError):
    """Derived lower and upper threshold collapse to the same value."""

    def __init__(self, parameter, value):
        self.parameter = parameter
        self.value = value
        super().__init__(
            f"degenerate threshold for {parameter}: "
            f"lower and upper percentiles both equal {value}"
        )


class UnsolvableDesignError(PmtError):
    """The design equation has no root inside the solver bracket."""


class IncompletePointError(PmtError):
    """A test point lacks a field required by the requested computation."""


class UndefinedSnError(PmtError):
    """Structural number is undefined for the given basin (non-positive AUPP)."""


class SchemaError(PmtError):
    """An input file's header does not match the expected schema."""


class MixedGroupError(PmtError):
    """Records from different (route, direction, lane) groups in one call."""


class DatasetNotFoundError(PmtError):
    """No stored dataset with the requested id."""


class DatasetExistsError(PmtError):
    """A dataset with this id is already stored."""


class IntegrityError(PmtError):
    """A stored data file does not match its recorded content hash."""
