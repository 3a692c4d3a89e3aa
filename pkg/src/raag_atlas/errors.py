"""Exception types shared across the package."""


class RaagAtlasError(Exception):
    """Base class for package errors."""


class InputError(RaagAtlasError, ValueError):
    """Invalid user-supplied input: bad digraph, bad parameters, bad file."""


class BudgetError(InputError):
    """A requested computation exceeds the configured work budget."""


class PrecisionError(InputError):
    """Operands with incompatible prime or precision."""


class InternalCheckError(RaagAtlasError, RuntimeError):
    """A built-in cross-check failed; indicates a bug, not a user error."""


class StuckWordError(RaagAtlasError):
    """A word could not be normalized with the available rewriting rules."""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position
