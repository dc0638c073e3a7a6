"""Matrix-POAFD least-squares and minimum-norm solvers.

The package solves ``X w = y`` in the least-squares sense by optimal
column selection with Gram-Schmidt co-projection (:mod:`.poafd`), turns any
least-squares solver into a pseudo-inverse solver (:mod:`.pinv`), and
ships classical baselines plus a benchmark harness.
"""

__version__ = "0.1.0"

from .exceptions import (
    ConvergenceError,
    DimensionError,
    FactorizationError,
    InputError,
    MatpoafdError,
    NumericalError,
    PreconditionError,
    SingularError,
    SizeLimitError,
)
from .greedy import PursuitTrace, forward_selection, ga_decompose, oga_decompose
from .linalg import SvdFactors, jacobi_svd
from .pinv import PinvResult, pinv_one_step, pinv_svd, pinv_two_step
from .poafd import PoafdModel, SolveConfig, assemble_solution, poafd_iterate, select_column, solve_ls
from .results import LsSolution
from .solvers import cgls, lasso_cd, lsqr, pcr, ridge

__all__ = [
    "ConvergenceError", "DimensionError", "FactorizationError", "InputError", "MatpoafdError",
    "NumericalError", "PreconditionError", "SingularError", "SizeLimitError",
    "PursuitTrace", "forward_selection", "ga_decompose", "oga_decompose",
    "SvdFactors", "jacobi_svd",
    "PinvResult", "pinv_one_step", "pinv_svd", "pinv_two_step",
    "PoafdModel", "SolveConfig", "assemble_solution", "poafd_iterate", "select_column", "solve_ls",
    "LsSolution", "cgls", "lasso_cd", "lsqr", "pcr", "ridge",
]
