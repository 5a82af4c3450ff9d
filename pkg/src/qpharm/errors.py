"""Exception hierarchy for the workbench.

Every error carries enough context to identify the failing precondition;
the CLI maps them onto exit codes (validation = 2, precondition = 3,
internal invariant = 4).
"""


class QpharmError(Exception):
    """Base class for all workbench errors."""


class ValidationError(QpharmError):
    """Bad input data (model files, malformed weights)."""


class PreconditionError(QpharmError):
    """An operation was called outside its domain."""


class InternalInvariantError(QpharmError):
    """A should-never-happen condition; indicates a bug upstream."""


# -- exact algebra ----------------------------------------------------------

class ZeroConstantTerm(PreconditionError):
    pass


class NotARoot(PreconditionError):
    pass


class DoubleRoot(PreconditionError):
    """Quadratic series root is not simple; caller must swap the axes."""


class NotDivisible(PreconditionError):
    def __init__(self, msg, remainder=None):
        super().__init__(msg)
        self.remainder = remainder


class NoReliableReconstruction(PreconditionError):
    pass


# -- model validation -------------------------------------------------------

class BadWeight(ValidationError):
    pass


class NotProbability(ValidationError):
    pass


class Degenerate(ValidationError):
    pass


class NonzeroDrift(ValidationError):
    pass


# -- curve / group ----------------------------------------------------------

class InfiniteGroup(PreconditionError):
    pass


class OrbitSumNonzero(PreconditionError):
    pass


class ResidualYPart(InternalInvariantError):
    pass


class PrecisionExhausted(PreconditionError):
    pass


# -- conformal / pipelines --------------------------------------------------

class NotIntegerAngle(PreconditionError):
    pass


class ReconstructionFailed(PreconditionError):
    pass


class PoleAtZero(PreconditionError):
    pass


class DoubleRootBothAxes(InternalInvariantError):
    pass


class RemainderNotDecoupled(InternalInvariantError):
    pass


class NotPi2(PreconditionError):
    pass


class GroupInfinite(PreconditionError):
    pass


class SingularSystem(PreconditionError):
    pass


class OrderTooLow(PreconditionError):
    pass


# -- continuous -------------------------------------------------------------

class NonIntegerExponent(PreconditionError):
    pass


class NotDivisibleByGamma(InternalInvariantError):
    pass


class ObstructedDecoupling(InternalInvariantError):
    pass


class NotLaurent(PreconditionError):
    pass


# -- ansatz ------------------------------------------------------------------

class NotInvariant(PreconditionError):
    pass


# -- pi/theta = 2 ------------------------------------------------------------

class CancellationFailed(PreconditionError):
    pass


class QuadratureNotConverged(PreconditionError):
    pass


class PointOnContour(PreconditionError):
    pass


# -- walk oracle --------------------------------------------------------------

class WindowTooSmall(PreconditionError):
    pass


class SingularFit(PreconditionError):
    pass
