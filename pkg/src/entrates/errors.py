"""Exception hierarchy shared by all entrates modules.

The CLI maps these onto distinct process exit codes, so library code
should raise the most specific class that applies.
"""


class EntratesError(Exception):
    """Base class for all errors raised by this package."""


class StateFileError(EntratesError):
    """A state file is missing, unreadable, or structurally malformed."""


class InvariantViolationError(EntratesError):
    """A numerical invariant was violated badly enough to signal corrupt data.

    Examples: an amplitude vector whose norm deviates from 1 by more than
    the repair tolerance, or a density matrix with an eigenvalue below
    the PSD clipping floor.
    """


class DimensionError(EntratesError):
    """Dimensions are inconsistent or exceed the supported dense-scale limit."""
