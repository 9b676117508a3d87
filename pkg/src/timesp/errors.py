"""Exception hierarchy.

Validation errors (bad input, violated preconditions) and computation errors
(budgets, horizons) are kept apart so the CLI can map them to exit codes 1 and 2.
"""


class TimespError(Exception):
    kind = "error"


class ValidationError(TimespError, ValueError):
    kind = "validation"


class InvalidMeasureError(ValidationError):
    kind = "invalid-measure"


class InvalidArgumentError(ValidationError):
    kind = "invalid-argument"


class UnsupportedVariantError(ValidationError):
    kind = "unsupported-variant"


class OutOfRangeError(ValidationError):
    kind = "out-of-range"


class NotApplicableError(ValidationError):
    kind = "not-applicable"


class InvalidTauError(ValidationError):
    kind = "invalid-tau"


class SpecError(ValidationError):
    """A spec document failed to parse or validate.

    ``problems`` lists every violation found, each as a human readable string
    prefixed with the field path.
    """

    kind = "spec"

    def __init__(self, problems, path=None):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        self.path = path
        where = f"{path}: " if path else ""
        super().__init__(where + "; ".join(self.problems))


class ComputationError(TimespError):
    kind = "computation"


class BudgetExceededError(ComputationError):
    kind = "budget-exceeded"

    def __init__(self, message, partial=None):
        self.partial = partial
        super().__init__(message)


class HorizonExceededError(ComputationError):
    kind = "horizon-exceeded"
