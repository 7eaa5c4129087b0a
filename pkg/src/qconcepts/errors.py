"""Exception hierarchy shared across the package."""


class QConceptsError(Exception):
    pass


class ParseError(QConceptsError, ValueError):
    """Malformed input file. ``line`` is 1-based, or None when not line-specific."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DomainError(QConceptsError, ValueError):
    pass


class LookupFailure(QConceptsError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class SingularMatrixError(QConceptsError, ArithmeticError):
    pass


class ModelError(QConceptsError):
    """Base for failures of the Hilbert-space construction."""


class DegenerateItemError(ModelError, ValueError):
    pass


class InfeasibleModelError(ModelError, ValueError):
    def __init__(self, message, item=None):
        self.item = item
        super().__init__(message)


class PlacementError(QConceptsError, ValueError):
    def __init__(self, message, item=None):
        self.item = item
        super().__init__(message)
