"""Exception hierarchy shared across the package."""


class RepStabError(Exception):
    """Base class for all package errors."""


class ValidationError(RepStabError):
    """Structurally invalid input: bad tables, maps, graphs, or vectors."""


class IsomorphyError(ValidationError):
    """Two representations were required to be isomorphic but are not.

    Carries both multiplicity vectors for diagnosis.
    """

    def __init__(self, message, left=None, right=None):
        super().__init__(message)
        self.left = left
        self.right = right


class NumericalError(RepStabError):
    """A numerical procedure failed or produced unusable output."""


class MultiplicityError(NumericalError):
    """A character inner product was too far from an integer.

    Raised when the input is not (numerically) an exact representation.
    """


class GuardExceededError(RepStabError):
    """A measured defect exceeded the configured guard threshold."""

    def __init__(self, message, measured=None, guard=None):
        super().__init__(message)
        self.measured = measured
        self.guard = guard
