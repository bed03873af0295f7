"""Exception hierarchy shared by all modules."""


class HopfError(Exception):
    """Base class for every error raised by hopfgroup."""


class UsageError(HopfError, ValueError):
    """Bad arguments: mixed groups, m > n, unknown suite id, ..."""


class LevelRangeError(UsageError):
    """A filtration level outside the group's level range was requested."""


class ElementError(UsageError):
    """A literal or value does not denote an element of the group."""


class ValidationError(HopfError, ValueError):
    """Input data (Cayley table, representation matrices) fails its axioms."""


class UnsupportedOperation(HopfError, TypeError):
    """Operation not defined for this group, e.g. Fourier on a non-abelian group."""


class ConductorError(HopfError, ArithmeticError):
    """Cyclotomic conductor exceeds HOPFGROUP_MAX_CONDUCTOR."""


class LeakageError(HopfError):
    """An operator image escapes the truncation window in exact mode."""

    def __init__(self, message, missing=()):
        super().__init__(message)
        self.missing = tuple(missing)
