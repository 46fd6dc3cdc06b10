"""Exception and warning types shared across the package."""


class DilatedBasisError(Exception):
    """Base class for all package errors."""


class InputError(DilatedBasisError, ValueError):
    """Invalid input (violated precondition)."""


class NumericalError(DilatedBasisError, ArithmeticError):
    """A numerical procedure failed to produce a trustworthy answer."""


class DegenerateInput(InputError):
    pass


class ZeroConstantTerm(InputError):
    pass


class NoInnerRoot(InputError):
    pass


class NotOuter(InputError):
    pass


class InconsistentClassification(InputError):
    pass


class WrongWeightKind(InputError):
    pass


class NonConvergence(NumericalError):
    pass


class GramNotPositive(NumericalError):
    pass


class BoundedSequence(NumericalError):
    """Raised by exponent fits when the sequence has plateaued."""


class SizeLimit(DilatedBasisError):
    pass


class BoundaryWarning(UserWarning):
    """A root sits close to a modulus partition boundary."""


class NonExhausted(UserWarning):
    """A finite section changed by more than the stability tolerance."""


class QuadratureDiverging(UserWarning):
    """An adaptive quadrature kept growing under refinement."""
