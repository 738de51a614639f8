"""Exception hierarchy for ncprob.

Every error raised deliberately by this package derives from
:class:`NcprobError`, so callers can catch the whole family with one
clause while still being able to branch on the semantic subtype.
"""


class NcprobError(Exception):
    """Base class for all errors raised by ncprob."""


class DomainError(NcprobError):
    """A map was applied outside its domain.

    Raised when a random variable is not defined on every outcome of its
    space, when a spectral function cannot be evaluated at an eigenvalue,
    or when an event references outcomes the space does not contain.
    """


class NullEventError(NcprobError):
    """Conditioning on an event of probability zero."""


class DimensionError(NcprobError):
    """Operands live on spaces of incompatible dimension."""


class HypothesisError(NcprobError):
    """A precondition of a theorem-shaped routine failed (operator norm
    bound violated, required cross-commutation absent, ...)."""


class NonCommutingError(HypothesisError):
    """An operation that requires commuting operators received a pair
    whose commutator norm exceeds the stated tolerance."""


class AlgebraError(NcprobError):
    """A family of matrices is not the unital *-closed algebra basis it
    was claimed to be, or a representation contract failed to hold."""


class PartitionError(NcprobError):
    """A spectrum partition is malformed or incompatible with the
    operator/PVM it was paired with."""


class ScenarioError(NcprobError):
    """A scenario file failed validation.  ``field`` names the offending
    location when known."""

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        if field:
            message = f"{field}: {message}"
        super().__init__(message)
