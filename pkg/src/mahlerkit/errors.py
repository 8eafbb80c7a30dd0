"""Typed failure modes shared by all mahlerkit modules.

Every error that a caller is expected to catch programmatically gets its own
class here; generic ValueError/TypeError remain reserved for plain misuse
(wrong types, malformed strings).
"""


class MahlerkitError(Exception):
    """Base class for all typed mahlerkit failures."""


class DomainError(MahlerkitError):
    """Input outside the mathematical domain of the requested quantity."""


class ZeroDenominator(DomainError):
    """A rational was supplied with denominator zero."""


class ZeroVector(DomainError):
    """A projective point needs at least one nonzero coordinate."""


class DegenerateExponent(DomainError):
    """Exponent algebra degenerates: theta >= 1 where the formula needs
    theta < 1, or mn <= r(m+n) where kappa is undefined."""


class HypothesisViolation(MahlerkitError):
    """A stated hypothesis list fails; carries the failing report.

    The `report` attribute, when set, is the HypothesisReport whose failing
    row triggered the error.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class MissingConstant(MahlerkitError):
    """A bound with an unspecified constant was evaluated without the caller
    supplying that constant."""


class RankMismatch(MahlerkitError):
    """Declared rank differs from the exact computed rank."""


class RootIsolationFailure(MahlerkitError):
    """Certified root isolation did not converge within the precision budget
    or the degree cap was exceeded."""


class QuadratureDivergence(MahlerkitError):
    """Quadrature error estimate stopped decreasing under node doubling."""


class PrecisionBudgetExceeded(MahlerkitError):
    """A certified comparison stayed ambiguous at the precision cap.

    Never a wrong answer: the caller learns the decision is out of reach at
    the configured cap, nothing more.
    """


class RationalDetected(MahlerkitError):
    """A continued-fraction target turned out exactly rational.

    `prefix` carries the finite expansion found before termination.
    """

    def __init__(self, message, prefix=None):
        super().__init__(message)
        self.prefix = prefix


class BudgetExceeded(MahlerkitError):
    """An enumeration's nominal cost exceeds the configured budget."""
