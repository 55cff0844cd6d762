"""Exception types shared across the package."""


class SymplecticError(ValueError):
    """Base class for invalid input to the symplectic routines."""


class GenusMismatch(SymplecticError):
    pass


class ZeroVectorError(SymplecticError):
    pass


class NotASummand(SymplecticError):
    pass


class PairingPatternError(SymplecticError):
    pass


class PreconditionError(SymplecticError):
    pass


class NotASimplexError(SymplecticError):
    pass


class NotACycle(SymplecticError):
    pass


class HypothesisViolation(SymplecticError):
    """A request outside the parameter range where a claim applies."""


class MissingSpan(SymplecticError):
    pass


class ResourceLimitExceeded(RuntimeError):
    def __init__(self, message: str, report: dict | None = None):
        super().__init__(message)
        self.report = report or {}
