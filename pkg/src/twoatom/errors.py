"""Exception taxonomy shared across the package.

Each class maps to one failure family so callers (and the command-line
harness) can translate failures into stable exit codes without string
matching.
"""


class TwoAtomError(Exception):
    """Base class for all package-specific errors."""


class DomainError(TwoAtomError):
    """Invalid physical or configuration input.

    Examples: malformed bilinear data, detector outside the box, negative
    widths, unparseable config files, unsupported parameter combinations.
    """


class UnregisteredSmearingError(DomainError):
    """A smearing label was used that the bilinear data does not know."""


class AccuracyError(TwoAtomError):
    """A numerical routine could not meet the requested tolerance.

    Carries the achieved error estimate in :attr:`estimate` so callers can
    report how far off the computation was.
    """

    def __init__(self, message: str, estimate: float | None = None):
        super().__init__(message)
        self.estimate = estimate


class InternalConsistencyError(TwoAtomError):
    """Two routes that must agree did not (for example a CPTP violation).

    This signals a bug or corrupted input, not a user mistake.
    """


class NullEventError(DomainError):
    """Conditioning on a measurement outcome whose probability is zero."""
