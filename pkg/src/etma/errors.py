"""Exception hierarchy shared across the workbench.

Everything raised on bad user input derives from EtmaError so the CLI and
the HTTP service can map failures to exit codes and status codes in one
place.  Genuine bugs are left to surface as ordinary Python exceptions.
"""


class EtmaError(Exception):
    """Base class for input and domain failures."""


class DocumentError(EtmaError):
    """A JSON document is malformed, mistagged, or has the wrong shape.

    ``where`` points at the offending location, e.g. ``components[1].states``.
    """

    def __init__(self, message: str, where: str = ""):
        self.where = where
        if where:
            message = f"{where}: {message}"
        super().__init__(message)


class InvalidModelError(EtmaError):
    """A model failed validation; carries the violation report."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(v.message for v in self.violations)
        super().__init__(f"model is invalid: {lines}")


class DirectiveError(EtmaError):
    """A reduction directive cannot be applied to the tree at hand."""


class ConflictError(DirectiveError):
    """Two directives overlap (one prefix extends or equals another)."""


class UnknownComponentError(EtmaError):
    """An operation referenced a component the model does not declare."""


class RedundancyError(EtmaError):
    """The redundancy transform does not support the requested component."""


class EvaluationError(EtmaError):
    """Probability lookup or summation failed, e.g. a missing table entry."""


class PartitionError(EtmaError):
    """A partition query does not fit the path list it was aimed at."""


class CapacityError(EtmaError):
    """An exhaustive check was asked to enumerate more outcomes than its cap."""
