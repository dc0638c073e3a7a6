"""Synthetic least-squares benchmarks.

Problems are ``y = X w_true + sigma * noise`` with every entry of ``X``,
``w_true`` and ``noise`` drawn i.i.d. standard normal from a seeded PCG64
generator. Trial ``t`` of a run with base seed ``s`` uses seed ``s + t``,
and all noise levels of a trial share the same ``X`` and ``w_true``.
"""

from __future__ import annotations

import csv
import math
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any

import numpy as np

from .csvio import format_float
from .exceptions import InputError, MatpoafdError, PreconditionError
from .methods import METHODS, SWEEPABLE, run_method

CSV_HEADER = (
    "preset", "method", "trial", "seed", "m", "n", "noise_sigma", "feature_count",
    "error", "solution_norm", "wall_time_s", "converged",
)
TIMING_REPEATS = 3

SWEEP_METHODS = ("poafd", "two_step", "lasso", "fs", "pcr")
PINV_ROSTER = ("lsqr", "cgls", "ridge", "mp", "two_step", "one_step", "poafd")


@dataclass(frozen=True)
class ExperimentConfig:
    """One benchmark run.

    ``feature_counts`` empty means every method runs once at full size.
    ``noise_sigmas``, when given, replaces ``noise_sigma`` with a list of
    levels. ``hyperparams`` is passed through to :func:`run_method`
    except for ``duplicate_columns`` (see :func:`gen_problem`).
    """

    preset: str = "custom"
    m: int = 100
    n: int = 10
    noise_sigma: float = 0.0
    trials: int = 1
    seed: int = 0
    methods: tuple[str, ...] = ("poafd",)
    feature_counts: tuple[int, ...] = ()
    hyperparams: dict[str, Any] = field(default_factory=dict)
    noise_sigmas: tuple[float, ...] = ()
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise PreconditionError("trials must be at least 1")
        if self.m < 1 or self.n < 1:
            raise PreconditionError("m and n must be at least 1")
        if not self.methods:
            raise PreconditionError("methods must be non-empty")
        unknown = [mt for mt in self.methods if mt not in METHODS]
        if unknown:
            raise PreconditionError(f"unknown methods: {', '.join(unknown)}")
        if any(s < 0 for s in self.sigmas):
            raise PreconditionError("noise levels must be non-negative")

    @property
    def sigmas(self) -> tuple[float, ...]:
        return self.noise_sigmas or (self.noise_sigma,)


@dataclass(frozen=True)
class ExperimentRecord:
    preset: str
    method: str
    trial: int
    seed: int
    m: int
    n: int
    noise_sigma: float
    feature_count: int | None
    error: float
    solution_norm: float
    wall_time_s: float
    converged: bool

    def sort_key(self):
        fc = -1 if self.feature_count is None else self.feature_count
        return (self.preset, self.method, self.trial, fc, self.noise_sigma)


def _scaled(dim: int, scale: float) -> int:
    return max(1, int(round(dim * scale)))


def preset_config(name: str, seed: int = 0, trials: int | None = None,
                  scale: float = 1.0) -> ExperimentConfig:
    """Configuration for a named preset.

    ``scale`` shrinks the long dimension (rows for the sweep presets and the
    tall matrix, columns for the flat one).
    """
    name = name.replace("-", "_")
    sweep = tuple(range(1, 11))
    if name == "fig1":
        cfg = ExperimentConfig("fig1", _scaled(100, scale), 10, 0.5, 10, seed, SWEEP_METHODS, sweep)
    elif name == "fig2":
        cfg = ExperimentConfig("fig2", _scaled(1000, scale), 10, 0.5, 10, seed, SWEEP_METHODS, sweep)
    elif name == "fig3":
        cfg = ExperimentConfig("fig3", _scaled(100, scale), 10, 0.5, 20, seed, SWEEP_METHODS, sweep,
                               noise_sigmas=(0.5, 5.0))
    elif name == "fig4_tall":
        cfg = ExperimentConfig("fig4_tall", _scaled(3000, scale), 30, 1.0, 5, seed, PINV_ROSTER)
    elif name == "fig4_flat":
        cfg = ExperimentConfig("fig4_flat", 30, _scaled(3000, scale), 0.0, 5, seed, PINV_ROSTER)
    else:
        raise PreconditionError(f"unknown preset {name!r}")
    if trials is not None:
        cfg = replace(cfg, trials=trials)
    return cfg


def _draw(m, n, seed, duplicate_columns=0):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((m, n))
    if duplicate_columns:
        if 2 * duplicate_columns > n:
            raise PreconditionError("too many duplicate columns for n")
        x[:, n - duplicate_columns:] = x[:, :duplicate_columns]
    w_true = rng.standard_normal(n)
    noise = rng.standard_normal(m)
    return np.asfortranarray(x), w_true, noise


def gen_problem(m: int, n: int, sigma: float, seed: int,
                duplicate_columns: int = 0) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Draw ``(X, y, w_true)``.

    With ``duplicate_columns = d`` the last ``d`` columns of ``X`` are
    copies of the first ``d``, which makes ``X`` rank deficient.
    """
    if sigma < 0:
        raise PreconditionError("sigma must be non-negative")
    x, w_true, noise = _draw(m, n, seed, duplicate_columns)
    y = x @ w_true
    if sigma > 0:
        y = y + sigma * noise
    return x, y, w_true


def _timed(fn):
    times, result = [], None
    for _ in range(TIMING_REPEATS):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return result, statistics.median(times)


def _run_trial(cfg: ExperimentConfig, trial: int) -> list[ExperimentRecord]:
    seed = cfg.seed + trial
    params = dict(cfg.hyperparams)
    dup = int(params.pop("duplicate_columns", 0))
    x, w_true, noise = _draw(cfg.m, cfg.n, seed, dup)
    out = []
    for sigma in cfg.sigmas:
        y = x @ w_true
        if sigma > 0:
            y = y + sigma * noise
        for method in cfg.methods:
            counts = cfg.feature_counts or (None,)
            for fc in counts:
                cap = fc if method in SWEEPABLE else None
                try:
                    sol, wall = _timed(lambda: run_method(method, x, y, feature_count=cap, **params))
                    err, nrm, ok = sol.residual_norm, sol.solution_norm, sol.converged
                except (MatpoafdError, ArithmeticError, np.linalg.LinAlgError):
                    err, nrm, wall, ok = math.nan, math.nan, 0.0, False
                out.append(ExperimentRecord(
                    cfg.preset, method, trial, seed, cfg.m, cfg.n, float(sigma), fc,
                    float(err), float(nrm), float(wall), bool(ok),
                ))
    return out


def run_experiment(cfg: ExperimentConfig) -> list[ExperimentRecord]:
    """Run every (trial, noise level, method, feature count) cell; records come back sorted."""
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            chunks = list(pool.map(lambda t: _run_trial(cfg, t), range(cfg.trials)))
    else:
        chunks = [_run_trial(cfg, t) for t in range(cfg.trials)]
    records = [r for chunk in chunks for r in chunk]
    return sorted(records, key=ExperimentRecord.sort_key)


def _csv_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "" if math.isnan(v) else format_float(v)
    return str(v)


def _write(path, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write file ({exc.strerror})", path=path) from None


def records_to_csv(records) -> str:
    lines = [",".join(CSV_HEADER)]
    for rec in records:
        row = asdict(rec)
        lines.append(",".join(_csv_value(row[k]) for k in CSV_HEADER))
    return "\n".join(lines) + "\n"


def summary_table(records) -> str:
    """Aligned text table of per-cell medians of error, norm and time."""
    groups: dict[tuple, list[ExperimentRecord]] = {}
    for rec in records:
        groups.setdefault((rec.method, rec.noise_sigma, rec.feature_count), []).append(rec)
    header = ("Method", "Sigma", "Features", "Time (s)", "Error", "Norm", "Failed")
    rows = [header]

    def med(vals):
        vals = [v for v in vals if not math.isnan(v)]
        return f"{statistics.median(vals):.6g}" if vals else "nan"

    for (method, sigma, fc), recs in sorted(
        groups.items(), key=lambda kv: (kv[0][0], kv[0][1], -1 if kv[0][2] is None else kv[0][2])
    ):
        rows.append((
            method, f"{sigma:g}", "full" if fc is None else str(fc),
            med([r.wall_time_s for r in recs]), med([r.error for r in recs]),
            med([r.solution_norm for r in recs]), str(sum(not r.converged for r in recs)),
        ))
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) if i < 3 else c.rjust(w) for i, (c, w) in enumerate(zip(r, widths)))
             for r in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(line.rstrip() for line in lines) + "\n"


def emit_records(records, path, format: str = "csv") -> None:
    """Write records as CSV or as a summary table."""
    if format == "csv":
        _write(path, records_to_csv(records))
    elif format == "summary":
        _write(path, summary_table(records))
    else:
        raise PreconditionError(f"unknown format {format!r}")


def read_records(path) -> list[ExperimentRecord]:
    """Parse a CSV written by :func:`emit_records`."""
    path = Path(path)
    try:
        fh = path.open(encoding="utf-8", newline="")
    except OSError:
        raise InputError("file not found", path=path) from None
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if tuple(header or ()) != CSV_HEADER:
            raise InputError("unexpected header", path=path, row=1)
        types = {f.name: f.type for f in fields(ExperimentRecord)}
        out = []
        for i, row in enumerate(reader, start=2):
            if len(row) != len(CSV_HEADER):
                raise InputError(f"expected {len(CSV_HEADER)} fields", path=path, row=i)
            vals = {}
            for name, raw in zip(CSV_HEADER, row):
                t = types[name]
                if name == "feature_count":
                    vals[name] = int(raw) if raw else None
                elif t == "bool":
                    vals[name] = raw == "true"
                elif t == "int":
                    vals[name] = int(raw)
                elif t == "float":
                    vals[name] = float(raw) if raw else math.nan
                else:
                    vals[name] = raw
            out.append(ExperimentRecord(**vals))
    return out
