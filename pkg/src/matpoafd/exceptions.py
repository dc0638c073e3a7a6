"""Exception hierarchy shared by all solver modules."""


class MatpoafdError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(MatpoafdError, ValueError):
    """Operand shapes do not agree."""


class PreconditionError(MatpoafdError, ValueError):
    """An input violates a documented precondition."""


class NumericalError(MatpoafdError, ArithmeticError):
    """Base class for failures of a numerical procedure."""


class SingularError(NumericalError):
    """A triangular factor has a (numerically) zero pivot."""


class FactorizationError(NumericalError):
    """Cholesky factorization met a non-positive pivot."""


class ConvergenceError(NumericalError):
    """An iteration hit its sweep or iteration limit."""


class SizeLimitError(MatpoafdError):
    """A requested dense allocation exceeds the configured cap."""


class InputError(MatpoafdError):
    """A data file is missing or malformed.

    ``path``, ``row`` and ``col`` locate the problem when known (1-based).
    """

    def __init__(self, message, path=None, row=None, col=None):
        self.path = path
        self.row = row
        self.col = col
        where = []
        if path is not None:
            where.append(str(path))
        if row is not None:
            where.append(f"row {row}")
        if col is not None:
            where.append(f"column {col}")
        prefix = ": ".join([", ".join(where)]) + ": " if where else ""
        super().__init__(prefix + message)
