"""Plain CSV matrices: one row per line, comma-separated, no header.

Values are written with 17 significant digits so a write/read cycle is
exact. Vectors are stored as n x 1 matrices.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .exceptions import InputError


def format_float(v: float) -> str:
    return format(float(v), ".17g")


def read_matrix(path) -> np.ndarray:
    """Parse a CSV matrix, raising :class:`InputError` with row/column on failure."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise InputError("file not found", path=path) from None
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read file ({exc})", path=path) from None

    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    rows: list[list[float]] = []
    width = None
    for i, line in enumerate(lines, start=1):
        if not line.strip():
            raise InputError("empty line", path=path, row=i)
        fields = line.split(",")
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            raise InputError(f"expected {width} fields, found {len(fields)}", path=path, row=i)
        row = []
        for j, field in enumerate(fields, start=1):
            try:
                value = float(field)
            except ValueError:
                raise InputError(f"not a number: {field.strip()!r}", path=path, row=i, col=j) from None
            if not np.isfinite(value):
                raise InputError(f"non-finite value {field.strip()!r}", path=path, row=i, col=j)
            row.append(value)
        rows.append(row)
    if not rows:
        raise InputError("no data rows", path=path)
    return np.array(rows, dtype=np.float64)


def read_vector(path) -> np.ndarray:
    """Read an n x 1 CSV as a 1-D array."""
    a = read_matrix(path)
    if a.shape[1] != 1:
        raise InputError(f"expected a single column, found {a.shape[1]}", path=path, row=1)
    return a[:, 0]


def write_matrix(path, a) -> None:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    lines = (",".join(format_float(v) for v in row) for row in a)
    try:
        Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write file ({exc.strerror})", path=path) from None
