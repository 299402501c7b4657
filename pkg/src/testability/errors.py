"""Exception hierarchy.  ``exit_code`` is the CLI status for each family."""


class TestabilityError(Exception):
    exit_code = 1


class InputError(TestabilityError, ValueError):
    """Malformed input: wrong dimensions, bad pmf, unknown names."""

    exit_code = 1

    def __init__(self, message: str, path: str | None = None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class ProblemSyntaxError(InputError):
    pass


class SchemaError(InputError):
    pass


class ValidationError(InputError):
    pass


class InvalidGenerator(ValidationError):
    pass


class DimensionMismatch(InputError):
    pass


class UnknownExample(InputError):
    pass


class InvalidParams(InputError):
    pass


class InfeasibilityError(TestabilityError):
    exit_code = 2


class EmptyHypothesis(InfeasibilityError):
    """A polytope hypothesis with no probability vector in it."""


class LpInfeasible(InfeasibilityError):
    pass


class LpUnbounded(InfeasibilityError):
    pass


class NoPoweredEVariable(InfeasibilityError):
    """The hulls of null and alternative touch, so no e-variable is powered."""


class NumericError(TestabilityError, ArithmeticError):
    exit_code = 3


class NumericBreakdown(NumericError):
    pass


class MaxIterationsExceeded(NumericError):
    pass


class DualityGapExceeded(NumericError):
    pass
