"""Exception hierarchy shared by all modules."""


class MnmError(Exception):
    """Base class for errors raised by mnmland."""


class ParameterError(MnmError, ValueError):
    """An argument violates a documented precondition."""


class ResourceError(MnmError, MemoryError):
    """A request exceeds the exhaustive-enumeration size guard."""


class NormalizationError(MnmError, ArithmeticError):
    """An objective column is constant and cannot be min-max rescaled.

    Attributes
    ----------
    columns : tuple of int
        Zero-based indices of the offending columns.
    """

    def __init__(self, columns):
        self.columns = tuple(columns)
        super().__init__(
            f"constant objective column(s) {list(self.columns)}: max == min, "
            "min-max normalization undefined"
        )
