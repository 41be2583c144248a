"""Exception types raised by the halving library."""


class HalvingError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArmCount(HalvingError, ValueError):
    """Fewer than two arms; the halving round structure is undefined."""


class BudgetTooSmall(HalvingError, ValueError):
    """Total budget below n * ceil(log2 n); some arm could never be pulled."""


class IndexOutOfRange(HalvingError, IndexError):
    """Arm or pull index outside the valid range."""


class MatrixExhausted(HalvingError, IndexError):
    """An explicit reward matrix has no entry for the requested pull."""


class EmptyCandidateSet(HalvingError, ValueError):
    """Candidate selection invoked with no candidates."""


class ScheduleExhausted(HalvingError, IndexError):
    """A target pull was requested past the end of the schedule."""


class InsufficientBatches(HalvingError, ValueError):
    """Batch budget smaller than the number of halving rounds."""


class AlphaOutOfRange(HalvingError, ValueError):
    """Tightness search requires 0 < alpha < 4."""


class InvalidRange(HalvingError, ValueError):
    """Problem-instance parameters outside their documented ranges."""


class DegenerateFit(HalvingError, ValueError):
    """Slope fit requested on points whose x-values are all zero."""
