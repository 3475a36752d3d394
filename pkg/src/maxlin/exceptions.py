"""Exception types raised by maxlin."""


class MaxLinError(Exception):
    """Base class for all maxlin errors."""


class CycleError(MaxLinError, ValueError):
    """The edge set contains a directed cycle.

    The ``witness`` attribute holds one offending cycle as a list of
    1-based node labels, first node repeated at the end.
    """

    def __init__(self, witness):
        self.witness = list(witness)
        path = " -> ".join(str(v) for v in self.witness)
        super().__init__(f"graph has a directed cycle: {path}")


class ModelError(MaxLinError, ValueError):
    """Invalid recursive max-linear model specification."""


class MatrixValidationError(MaxLinError, ValueError):
    """A matrix is not the coefficient matrix of any recursive max-linear model."""

    def __init__(self, message, reasons=()):
        self.reasons = list(reasons)
        super().__init__(message)


class PathLimitError(MaxLinError, RuntimeError):
    """Explicit path enumeration exceeded its configured cap."""
