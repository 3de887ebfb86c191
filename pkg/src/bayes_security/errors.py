"""Exception hierarchy.

Every domain error derives from :class:`BayesSecurityError`, which is a
``ValueError`` so callers that only care about bad input can catch that.
The CLI reports the class name as the machine-readable error code.
"""


class BayesSecurityError(ValueError):
    """Base class for all domain errors raised by this package."""

    @property
    def code(self) -> str:
        return type(self).__name__


# channel-core
class EmptyMatrix(BayesSecurityError):
    pass


class NegativeEntry(BayesSecurityError):
    pass


class RowSumViolation(BayesSecurityError):
    def __init__(self, row: int, total: float):
        super().__init__(f"row {row} sums to {total!r}, expected 1")
        self.row = row
        self.total = total


class ZeroRow(BayesSecurityError):
    pass


class LengthMismatch(BayesSecurityError):
    pass


class IndexOutOfRange(BayesSecurityError):
    pass


class EqualIndices(BayesSecurityError):
    pass


class InvalidPrior(BayesSecurityError):
    pass


class ChannelFormatError(BayesSecurityError):
    pass


# metrics
class DimensionMismatch(BayesSecurityError):
    pass


class DegeneratePrior(BayesSecurityError):
    pass


class ZeroPriorVulnerability(BayesSecurityError):
    pass


class ZeroPriorRisk(BayesSecurityError):
    pass


# minimizer
class SingleSecret(BayesSecurityError):
    pass


class ObservableSpaceTooLarge(BayesSecurityError):
    pass


class InvalidReference(BayesSecurityError):
    pass


class SecretSpaceTooLarge(BayesSecurityError):
    pass


class GridTooCoarse(BayesSecurityError):
    pass


class InvalidK(BayesSecurityError):
    pass


# composition
class SecretSpaceMismatch(BayesSecurityError):
    pass


class InnerDimensionMismatch(BayesSecurityError):
    pass


# mechanisms
class InvalidN(BayesSecurityError):
    pass


class NegativeEpsilon(BayesSecurityError):
    pass


class InvalidScale(BayesSecurityError):
    pass


class TooFewSecrets(BayesSecurityError):
    pass


class InvalidDelta(BayesSecurityError):
    pass


class InvalidGrid(BayesSecurityError):
    pass


class InvalidParameters(BayesSecurityError):
    pass


# dp-bridge
class InvalidDimensions(BayesSecurityError):
    pass


class InvalidSplit(BayesSecurityError):
    pass


# blackbox estimation
class InsufficientSamples(BayesSecurityError):
    pass


class OracleFailure(BayesSecurityError):
    pass


# experiments
class InvalidDistribution(BayesSecurityError):
    pass


class SingularDebias(BayesSecurityError):
    pass


class TruncationWarning(UserWarning):
    """Discretization grid does not cover the noise support well enough."""


class EpsilonRangeWarning(UserWarning):
    """Gaussian calibration used outside the range it was derived for."""
