"""Exception hierarchy shared by every module of the package."""


class PdynError(Exception):
    """Base class for all errors raised by pdyn."""

    exit_code = 1


class ZeroPolynomial(PdynError, ValueError):
    pass


class VariableAbsent(PdynError, ValueError):
    pass


class BudgetExceeded(PdynError):
    """A search ran past its budget; ``partial`` holds whatever was computed."""

    exit_code = 2

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class DegreeOverflow(BudgetExceeded):
    """A computation would exceed the configured degree / monomial budget."""


class SingularCurve(PdynError, ValueError):
    pass


class NotInvariant(PdynError, ValueError):
    pass


class BadDegreePattern(PdynError, ValueError):
    pass


class NotCodimOne(PdynError, ValueError):
    pass


class PreconditionFailed(PdynError, ValueError):
    def __init__(self, hypothesis, message=None):
        super().__init__(message or f"precondition failed: {hypothesis}")
        self.hypothesis = hypothesis


class MismatchedBudgets(PdynError, ValueError):
    pass


class InvariantViolation(PdynError, ValueError):
    """A domain object failed one of its type invariants."""

    def __init__(self, invariant, message=None):
        super().__init__(message or f"invariant violated: {invariant}")
        self.invariant = invariant


class ParseError(PdynError, ValueError):
    def __init__(self, message, location=None):
        loc = f" at {location}" if location else ""
        super().__init__(f"{message}{loc}")
        self.location = location


class InputSuspect(UserWarning):
    """Input data contradicts a structural result it is supposed to satisfy."""


class InputErrors(ParseError):
    """Several inputs failed validation; ``errors`` lists (input name, message) pairs."""

    def __init__(self, errors):
        self.errors = list(errors)
        body = "; ".join(f"{name}: {msg}" for name, msg in self.errors)
        super().__init__(f"{len(self.errors)} invalid input(s): {body}")
