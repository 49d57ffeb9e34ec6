"""Exception types shared across the package."""


class PowerOpsError(Exception):
    """Base class for all errors raised here."""


class PrecisionError(PowerOpsError):
    """A result cannot be decided at the working precision."""


class NonUnitError(PowerOpsError, ZeroDivisionError):
    def __init__(self, message, valuation=None):
        super().__init__(message)
        self.valuation = valuation


class ModelError(PowerOpsError):
    """Model data is inconsistent or unsupported."""


class ReconstructionError(PowerOpsError):
    pass


class RewriteBudgetExceeded(PowerOpsError):
    pass


class VerificationError(PowerOpsError):
    """Two routes to the same quantity disagree."""


class ParseError(PowerOpsError, ValueError):
    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)

    def pointer(self):
        if self.text is None or self.position is None:
            return str(self)
        return f"{self.text}\n{' ' * self.position}^\n{self}"
