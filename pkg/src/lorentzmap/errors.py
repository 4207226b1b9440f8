"""Exception hierarchy.

Everything raised on purpose by the library derives from LorentzError.
ValidationError subclasses mark bad input (CLI exit code 2), NumericalError
marks solver trouble (CLI exit code 3).
"""


class LorentzError(Exception):
    pass


class ValidationError(LorentzError, ValueError):
    pass


class NumericalError(LorentzError, ArithmeticError):
    pass


class SpecSyntaxError(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class RangeError(ValidationError):
    pass


class DomainMismatch(ValidationError):
    pass


class NotFixingEndpoints(ValidationError):
    pass


# same condition, two names in use
NotEndpointFixing = NotFixingEndpoints


class NotFixingOrigin(ValidationError):
    pass


class NotMonotone(ValidationError):
    pass


class NotInvertible(ValidationError):
    pass


class NotOdd(ValidationError):
    pass


class NotEven(ValidationError):
    pass


class NotBijectiveOnHalfLine(ValidationError):
    pass


class NonPositiveDerivative(ValidationError):
    pass


class NonPositiveDensity(ValidationError):
    pass


class CyclicViolation(ValidationError):
    pass


class InconsistentGauge(ValidationError):
    pass


class VerticesNotOnAxes(ValidationError):
    pass


class DegeneratePoint(ValidationError):
    pass


class NondifferentiableCrossing(ValidationError):
    pass


class ConstantFunction(ValidationError):
    pass


class NonUniqueImage(ValidationError):
    pass


class EmptyWindow(ValidationError):
    pass


class RayEscapes(ValidationError):
    pass


class DegenerateRectangle(ValidationError):
    pass


class ConvergenceError(NumericalError):
    pass
