"""Solution records returned by every least-squares routine."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np


@dataclass(frozen=True)
class LsSolution:
    """A solution ``w`` of ``min ||x @ w - y||`` with bookkeeping.

    Build instances with :meth:`from_solve`, which recomputes the residual
    from ``x`` and ``y`` rather than trusting the solver's own estimate.
    """

    w: np.ndarray
    residual_norm: float
    solution_norm: float
    method: str
    iterations: int = 0
    converged: bool = True
    wall_time: float = 0.0
    info: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_solve(cls, x, y, w, method, iterations=0, converged=True, wall_time=0.0, **info):
        w = np.asarray(w, dtype=np.float64)
        return cls(
            w=w,
            residual_norm=float(np.linalg.norm(x @ w - y)),
            solution_norm=float(np.linalg.norm(w)),
            method=method,
            iterations=int(iterations),
            converged=bool(converged),
            wall_time=float(wall_time),
            info=info,
        )
