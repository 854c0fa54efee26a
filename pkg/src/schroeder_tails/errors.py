"""Exception hierarchy.

Two families: :class:`InvalidInput` for anything the caller got wrong
(the CLI maps it to exit status 2), and :class:`NumericalGuard` for
guards that trip during a computation (exit status 3).
"""


class SchroederTailsError(Exception):
    """Base class for all package errors."""


class InvalidInput(SchroederTailsError, ValueError):
    pass


class NumericalGuard(SchroederTailsError, ArithmeticError):
    pass


# -- offspring law -----------------------------------------------------------

class InvalidDistribution(InvalidInput):
    pass


class NonZeroP0(InvalidDistribution):
    pass


class P1OutOfRange(InvalidDistribution):
    pass


class NotNormalized(InvalidDistribution):
    pass


class PeriodicSupport(InvalidDistribution):
    pass


class Subcritical(InvalidDistribution):
    pass


# -- evaluation domain -------------------------------------------------------

class NonPositiveX(InvalidInput):
    pass


class PoleArgument(InvalidInput):
    pass


class EmptyRange(InvalidInput):
    pass


class GridCoverage(InvalidInput):
    pass


# -- numerical guards --------------------------------------------------------

class CapExceeded(NumericalGuard):
    pass


class NoConvergence(NumericalGuard):
    pass


class AliasingSuspected(NumericalGuard):
    pass


class TruncationNotReached(NumericalGuard):
    def __init__(self, message, tail_bound=None):
        super().__init__(message)
        self.tail_bound = tail_bound


class ImagResidueTooLarge(NumericalGuard):
    pass


class NegativeDensity(NumericalGuard):
    pass


class PopulationOverflow(NumericalGuard):
    pass
