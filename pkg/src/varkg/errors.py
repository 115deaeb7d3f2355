"""Exception types shared across the toolkit."""


class VarkgError(Exception):
    """Base class for all toolkit errors."""


class InvalidInput(VarkgError):
    """Malformed or out-of-range construction input."""


class InvalidParameter(VarkgError):
    """Operation parameter outside its admissible range."""


class InvalidMass(VarkgError):
    """Frequency or mass parameter leaves the stable range."""


class Unsupported(VarkgError):
    """Requested combination is outside the toolkit's scope."""


class NumericalOverflow(VarkgError):
    """A functional evaluation left the representable range."""


class GridMismatch(VarkgError):
    """Operands live on different grids."""


class BracketError(VarkgError):
    """Shooting bracket does not straddle the critical amplitude."""


class ConvergenceError(VarkgError):
    """Iteration budget exhausted before reaching tolerance."""


class WrongRegion(VarkgError):
    """Exponent pair is not in the region the operation requires."""


class NotOnConstraint(VarkgError):
    """Input function does not satisfy the constraint identity."""


class NoNegativeEndpoint(VarkgError):
    """Endpoint search failed to reach negative action."""


class GluingFailed(VarkgError):
    """No gluing parameter produced a monotone first segment."""


class NoRoot(VarkgError):
    """The scalar constraint map has no root along the family."""


class PreconditionFailed(VarkgError):
    """A documented operation precondition does not hold."""


class TruncationOverflow(VarkgError):
    """Rescaling would push non-negligible mass off the grid."""


class EmptyConstraintSample(VarkgError):
    """No trial function could be projected onto the constraint."""
