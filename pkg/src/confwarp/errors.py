"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PoleError(ArithmeticError):
    """Evaluation requested exactly at a pole of an elliptic function."""


class GenerationError(RuntimeError):
    """Scene generation exhausted its rejection-sampling budget."""
