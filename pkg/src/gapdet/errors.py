"""Exception hierarchy shared by all gapdet modules."""


class GapdetError(Exception):
    """Base class for every error raised by this package."""


class ParameterDomainError(GapdetError, ValueError):
    """Parameters outside the admissible region of a kernel, symbol or formula."""


class PoleError(ParameterDomainError):
    """Argument sits on a pole (e.g. Gamma or Barnes G at a nonpositive integer)."""


class NonConvergenceError(GapdetError, ArithmeticError):
    """A series or iteration hit its cap before the requested accuracy was met."""


class AccuracyError(GapdetError, ArithmeticError):
    """Two refinement levels of a quadrature disagree beyond the allowed tolerance."""


class DeterminantBreakdown(GapdetError, ArithmeticError):
    """Factorization produced an exactly singular or non-finite pivot."""


class UnderflowGuardError(GapdetError, ArithmeticError):
    """A requested value lies below the double-precision range; use the log form."""
