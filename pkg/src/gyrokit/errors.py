"""Exception types shared by every gyrokit module."""


class GyrokitError(Exception):
    """Base class for all gyrokit errors."""


class DomainError(GyrokitError, ValueError):
    """An argument lies outside the region where a formula is valid."""


class AssumptionError(DomainError):
    """Physical parameters violate a modelling assumption.

    ``assumption`` names the violated condition so callers (and the CLI) can
    report it verbatim.
    """

    def __init__(self, assumption, message):
        super().__init__(f"{assumption}: {message}")
        self.assumption = assumption


class SingularityError(GyrokitError, ArithmeticError):
    """A formula hit a genuine singularity during evaluation.

    ``operation`` and ``time`` (when known) locate the failure.
    """

    def __init__(self, operation, message, time=None):
        where = operation if time is None else f"{operation} at t={time:.17g}"
        super().__init__(f"{where}: {message}")
        self.operation = operation
        self.time = time
