"""Benchmark reproduction: problem setup, noise injection, error tables, fits.

The benchmark problem lives on (0, pi)^2 with

    u0(x, y) = sin(x) sin(y),
    f(x, y, s) = (2 - pi^2) sin(x) sin(y) e^(-pi^2 s),
    tau = 1, truncation 30x30,

and the final data g is produced by the forward solver itself.  Table 1
sweeps the reconstruction time t over 10^-2..10^-9 with exact data;
Tables 2 and 3 sweep source noise eps (and data noise delta = eps) over
10^-3..10^-9, picking t by the eta^(1/(2 alpha)) rule.  Noise follows the
constant recipe: f + eps/2, g + delta/2, added pointwise before
projection.  Errors are Parseval L2 distances to the projected u0 on the
truncated coefficient vector.

Everything here is deterministic: fixed reduction orders, shortest
round-trip decimal serialization, and a content hash over the emitted
CSV so repeated runs (any thread count) are byte-identical.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import DomainError, NumericalError
from .quadrature import QuadConfig, SingularMode, gauss_legendre
from .solver import (
    ChoiceRule,
    CompositeSource,
    RegularizationChoice,
    SeparableSource,
    Source,
    TimeFractionalProblem,
    backward_reconstruct,
    choose_t,
    final_value,
    reconstruct_noisy,
)
from .spectral import ModeSet, SpectralField, l2_error, project, synthesize_grid

__all__ = [
    "NoiseMode",
    "ExperimentConfig",
    "ErrorTable",
    "PaperProblem",
    "NoiseAudit",
    "FitResult",
    "paper_problem",
    "noisy_source",
    "noisy_data",
    "noise_audit",
    "run_table1",
    "run_table2",
    "run_table3",
    "run_fig4",
    "fit_rate",
    "emit_csv",
    "emit_plot_script",
    "emit_surface",
]

_PI2 = math.pi * math.pi


class NoiseMode(str, Enum):
    """Noise recipes: the constant shift of the benchmark, or seeded random."""

    PAPER_CONSTANT = "paper_constant"
    SEEDED_RANDOM = "seeded_random"


@dataclass(frozen=True)
class ExperimentConfig:
    """Benchmark configuration; the defaults reproduce the reference tables."""

    alphas: tuple[float, ...] = (0.2, 0.4, 0.6, 0.8)
    tau: float = 1.0
    truncation: int = 30
    subintervals: int = 4
    points: int = 4
    temporal_subintervals: int = 4
    sweep: tuple[float, ...] | None = None
    noise_mode: NoiseMode = NoiseMode.PAPER_CONSTANT
    seed: int = 0
    singular_mode: SingularMode = SingularMode.PAPER_DIRECT

    def __post_init__(self) -> None:
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        if not self.alphas:
            raise DomainError("ExperimentConfig: alphas must be non-empty")
        if any(not 0.0 < a <= 1.0 for a in self.alphas):
            raise DomainError(f"ExperimentConfig: alphas must be in (0, 1]: {self.alphas}")
        if not (isinstance(self.tau, (int, float)) and self.tau > 0.0):
            raise DomainError(f"ExperimentConfig: tau must be positive, got {self.tau!r}")
        for name in ("truncation", "subintervals", "points", "temporal_subintervals"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise DomainError(
                    f"ExperimentConfig: {name} must be an integer >= 1, got {v!r}"
                )
        if self.sweep is not None:
            object.__setattr__(self, "sweep", tuple(float(v) for v in self.sweep))
        if not isinstance(self.noise_mode, NoiseMode):
            object.__setattr__(self, "noise_mode", NoiseMode(self.noise_mode))
        if not isinstance(self.singular_mode, SingularMode):
            object.__setattr__(self, "singular_mode", SingularMode(self.singular_mode))
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise DomainError(f"ExperimentConfig: seed must be an integer, got {self.seed!r}")

    def quad_config(self) -> QuadConfig:
        return QuadConfig(
            rule=gauss_legendre(self.points),
            subintervals=self.subintervals,
            singular_mode=self.singular_mode,
        )


@dataclass(frozen=True)
class ErrorTable:
    """Levels (descending) x alphas error matrix with config echo and hash."""

    table_id: str
    levels: tuple[float, ...]
    alphas: tuple[float, ...]
    rows: tuple[tuple[float, ...], ...]
    config: ExperimentConfig
    content_hash: str = ""

    def __post_init__(self) -> None:
        if self.table_id not in ("table1", "table2", "table3", "fig4"):
            raise DomainError(f"ErrorTable: unknown id {self.table_id!r}")
        if len(self.rows) != len(self.levels):
            raise DomainError("ErrorTable: one row per level required")
        if any(b >= a for a, b in zip(self.levels, self.levels[1:])):
            raise DomainError("ErrorTable: levels must be strictly decreasing")
        for row in self.rows:
            if len(row) != len(self.alphas):
                raise DomainError("ErrorTable: one error per alpha required")
            if any(not (math.isfinite(v) and v >= 0.0) for v in row):
                raise DomainError("ErrorTable: errors must be finite and >= 0")
        if not self.content_hash:
            digest = hashlib.sha256(self.to_csv().encode("utf-8")).hexdigest()
            object.__setattr__(self, "content_hash", digest)

    def column(self, alpha: float) -> tuple[float, ...]:
        try:
            j = self.alphas.index(alpha)
        except ValueError:
            raise DomainError(f"ErrorTable: no column for alpha={alpha}") from None
        return tuple(row[j] for row in self.rows)

    def to_csv(self) -> str:
        header = "level," + ",".join(f"alpha_{a!r}" for a in self.alphas)
        lines = [header]
        for level, row in zip(self.levels, self.rows):
            lines.append(",".join([repr(level)] + [repr(v) for v in row]))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, eq=False)
class PaperProblem:
    """The benchmark problem per alpha: template, u0, and final data g."""

    config: ExperimentConfig
    modeset: ModeSet
    quad: QuadConfig
    u0: SpectralField
    problems: Mapping[float, TimeFractionalProblem]
    finals: Mapping[float, SpectralField]


def _benchmark_source() -> SeparableSource:
    return SeparableSource(
        lambda x, y: math.sin(x) * math.sin(y),
        lambda s: (2.0 - _PI2) * math.exp(-_PI2 * s),
    )


def paper_problem(cfg: ExperimentConfig = ExperimentConfig()) -> PaperProblem:
    """Construct u0, the per-alpha problems, and g = forward value at tau."""
    ms = ModeSet(dimension=2, truncation=cfg.truncation)
    quad = cfg.quad_config()
    u0 = project(lambda x, y: math.sin(x) * math.sin(y), ms, quad)
    problems = {}
    finals = {}
    for a in cfg.alphas:
        prob = TimeFractionalProblem(
            alpha=a,
            tau=cfg.tau,
            modeset=ms,
            source=_benchmark_source(),
            quad=quad,
            temporal_subintervals=cfg.temporal_subintervals,
        )
        problems[a] = prob
        finals[a] = final_value(prob, u0)
    return PaperProblem(cfg, ms, quad, u0, problems, finals)


class _ArraySource(Source):
    """Time-independent source given by a fixed coefficient vector."""

    def __init__(self, coeffs: np.ndarray):
        self.coeffs = np.asarray(coeffs, dtype=np.float64)

    def coefficient_batch(self, modeset, quad, s):
        if self.coeffs.size != modeset.size:
            raise DomainError("_ArraySource: coefficient count != modeset size")
        return np.repeat(self.coeffs[:, None], len(s), axis=1)


def _seeded_coeffs(size: int, level: float, seed: int, stream: int) -> np.ndarray:
    rng = np.random.default_rng([seed, stream])
    r = rng.uniform(-1.0, 1.0, size)
    norm = float(np.sqrt(np.sum(r * r)))
    if norm == 0.0:
        return np.zeros(size)
    return r * (level / norm)


def noisy_source(
    source: Source,
    eps: float,
    modeset: ModeSet,
    mode: NoiseMode = NoiseMode.PAPER_CONSTANT,
    seed: int = 0,
) -> Source:
    """Source perturbed at level eps: constant +eps/2, or seeded random.

    The constant recipe adds eps/2 pointwise before projection; the random
    recipe adds a time-independent coefficient vector with L2 norm exactly
    eps (so the L-infinity-in-time L2 noise bound holds with equality).
    """
    if not (isinstance(eps, (int, float)) and math.isfinite(eps) and eps >= 0.0):
        raise DomainError(f"noisy_source: eps must be >= 0, got {eps!r}")
    if eps == 0.0:
        return source
    if mode is NoiseMode.PAPER_CONSTANT:
        shift = SeparableSource(lambda x, y: 1.0, lambda s, _e=float(eps): _e / 2.0)
        return CompositeSource((source, shift))
    return CompositeSource(
        (source, _ArraySource(_seeded_coeffs(modeset.size, float(eps), seed, 0)))
    )


def noisy_data(
    g: SpectralField,
    delta: float,
    quad: QuadConfig,
    mode: NoiseMode = NoiseMode.PAPER_CONSTANT,
    seed: int = 0,
) -> SpectralField:
    """Final data perturbed at level delta (constant +delta/2, or random)."""
    if not (isinstance(delta, (int, float)) and math.isfinite(delta) and delta >= 0.0):
        raise DomainError(f"noisy_data: delta must be >= 0, got {delta!r}")
    if delta == 0.0:
        return g
    if mode is NoiseMode.PAPER_CONSTANT:
        ones = project(lambda x, y: 1.0, g.modeset, quad)
        return SpectralField(g.modeset, g.coeffs + (delta / 2.0) * ones.coeffs)
    shift = _seeded_coeffs(g.modeset.size, float(delta), seed, 1)
    return SpectralField(g.modeset, g.coeffs + shift)


@dataclass(frozen=True)
class NoiseAudit:
    """Nominal level vs the norms the constant recipe actually produces."""

    nominal: float
    function_norm: float  # (level/2) * ||1||_{L2((0,pi)^2)} = (level/2) * pi
    truncated_norm: float  # Parseval norm of the projected shift


def noise_audit(level: float, modeset: ModeSet, quad: QuadConfig) -> NoiseAudit:
    """Report how far the +level/2 constant shift exceeds the nominal bound."""
    if not (isinstance(level, (int, float)) and math.isfinite(level) and level >= 0.0):
        raise DomainError(f"noise_audit: level must be >= 0, got {level!r}")
    ones = project(lambda x, y: 1.0, modeset, quad)
    trunc = (level / 2.0) * math.sqrt(
        math.fsum(float(c) * float(c) for c in ones.coeffs)
    )
    return NoiseAudit(
        nominal=float(level),
        function_norm=(level / 2.0) * math.pi,
        truncated_norm=trunc,
    )


def _column_errors_table1(
    pp: PaperProblem, alpha: float, levels: tuple[float, ...]
) -> tuple[float, ...]:
    prob = pp.problems[alpha]
    g = pp.finals[alpha]
    return tuple(
        l2_error(backward_reconstruct(prob, g, t), pp.u0) for t in levels
    )


def _column_errors_noisy(
    pp: PaperProblem, alpha: float, levels: tuple[float, ...], with_delta: bool
) -> tuple[float, ...]:
    cfg = pp.config
    prob = pp.problems[alpha]
    g = pp.finals[alpha]
    errs = []
    for eta in levels:
        t_eta = choose_t(
            RegularizationChoice(ChoiceRule.PAPER_TABLE2, eta=eta),
            alpha,
            tau=cfg.tau,
        )
        f_eps = noisy_source(
            prob.source, eta, pp.modeset, mode=cfg.noise_mode, seed=cfg.seed
        )
        g_in = (
            noisy_data(g, eta, pp.quad, mode=cfg.noise_mode, seed=cfg.seed)
            if with_delta
            else g
        )
        rec = reconstruct_noisy(prob, g_in, f_eps, t_eta)
        errs.append(l2_error(rec, pp.u0))
    return tuple(errs)


def _run_columns(cfg, pp, levels, worker, table_id, threads):
    if threads is None or threads < 1:
        threads = 1
    if threads == 1 or len(cfg.alphas) == 1:
        cols = [worker(pp, a, levels) for a in cfg.alphas]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(worker, pp, a, levels) for a in cfg.alphas]
            cols = [f.result() for f in futures]
    rows = tuple(
        tuple(cols[j][i] for j in range(len(cfg.alphas)))
        for i in range(len(levels))
    )
    return ErrorTable(table_id, levels, cfg.alphas, rows, cfg)


def run_table1(
    cfg: ExperimentConfig = ExperimentConfig(), threads: int = 1
) -> ErrorTable:
    """Exact-data reconstruction errors over t = 10^-2 .. 10^-9."""
    levels = cfg.sweep or tuple(10.0 ** -(i + 1) for i in range(1, 9))
    pp = paper_problem(cfg)
    return _run_columns(cfg, pp, levels, _column_errors_table1, "table1", threads)


def run_table2(
    cfg: ExperimentConfig = ExperimentConfig(), threads: int = 1
) -> ErrorTable:
    """Source-noise errors (eps only) at t_eps = eps^(1/(2 alpha))."""
    levels = cfg.sweep or tuple(10.0 ** -(i + 2) for i in range(1, 8))
    pp = paper_problem(cfg)
    worker = lambda pp_, a, lv: _column_errors_noisy(pp_, a, lv, with_delta=False)
    return _run_columns(cfg, pp, levels, worker, "table2", threads)


def run_table3(
    cfg: ExperimentConfig = ExperimentConfig(), threads: int = 1
) -> ErrorTable:
    """Source-and-data-noise errors (delta = eps = eta) at t_eta."""
    levels = cfg.sweep or tuple(10.0 ** -(i + 2) for i in range(1, 8))
    pp = paper_problem(cfg)
    worker = lambda pp_, a, lv: _column_errors_noisy(pp_, a, lv, with_delta=True)
    return _run_columns(cfg, pp, levels, worker, "table3", threads)


@dataclass(frozen=True)
class FitResult:
    """Fitted rate constants: (alpha, value) pairs for the requested model."""

    model: str
    estimates: tuple[tuple[float, float], ...]

    def value(self, alpha: float) -> float:
        for a, v in self.estimates:
            if a == alpha:
                return v
        raise DomainError(f"FitResult: no estimate for alpha={alpha}")


def fit_rate(
    table: ErrorTable,
    model: str = "power_law",
    alpha: float | None = None,
    last: int | None = None,
) -> FitResult:
    """Fit error-vs-level behavior.

    power_law: least-squares slope of log10(error) against log10(level),
    per alpha (optionally restricted to the ``last`` rows, i.e. the
    smallest levels).  sqrt_const: best C in error ~ C sqrt(level) for one
    alpha column (default 0.8).
    """
    if model not in ("power_law", "sqrt_const"):
        raise DomainError(f"fit_rate: unknown model {model!r}")
    levels = np.array(table.levels)
    if last is not None:
        if last < 2:
            raise DomainError(f"fit_rate: need at least 2 rows, got last={last}")
        levels = levels[-last:]
    if len(table.levels) < 3:
        raise DomainError("fit_rate: need at least 3 rows")
    if model == "power_law":
        alphas = table.alphas if alpha is None else (alpha,)
        out = []
        for a in alphas:
            col = np.array(table.column(a))
            if last is not None:
                col = col[-last:]
            if np.any(col <= 0.0):
                raise NumericalError(
                    f"fit_rate: non-positive error in alpha={a} column; "
                    "power-law fit undefined"
                )
            slope = np.polyfit(np.log10(levels), np.log10(col), 1)[0]
            out.append((a, float(slope)))
        return FitResult("power_law", tuple(out))
    a = 0.8 if alpha is None else alpha
    col = np.array(table.column(a))
    if last is not None:
        col = col[-last:]
    denom = float(np.sum(levels))
    if denom == 0.0:
        raise NumericalError("fit_rate: degenerate levels for sqrt_const fit")
    C = float(np.sum(col * np.sqrt(levels)) / denom)
    return FitResult("sqrt_const", ((a, C),))


def run_fig4(
    cfg: ExperimentConfig = ExperimentConfig(), threads: int = 1
) -> tuple[ErrorTable, FitResult]:
    """Table 3 rebadged for the rate figure, plus its sqrt_const fit."""
    t3 = run_table3(cfg, threads)
    fig = ErrorTable("fig4", t3.levels, t3.alphas, t3.rows, cfg)
    fit_alpha = 0.8 if 0.8 in cfg.alphas else cfg.alphas[-1]
    return fig, fit_rate(fig, "sqrt_const", alpha=fit_alpha)


def emit_csv(table: ErrorTable, path: str | Path) -> None:
    """Write the table as CSV (LF, UTF-8, shortest round-trip floats)."""
    try:
        Path(path).write_text(table.to_csv(), encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(f"emit_csv: cannot write {path}: {exc}") from exc


def emit_plot_script(
    table: ErrorTable, path: str | Path, csv_name: str | None = None
) -> None:
    """Write a standalone gnuplot script next to the table's CSV.

    Tables render as log-log error curves per alpha; fig4 additionally
    overlays the fitted C*sqrt(eta) reference line.
    """
    path = Path(path)
    csv_ref = csv_name if csv_name is not None else f"{table.table_id}.csv"
    lines = [
        f"# gnuplot script for {table.table_id}; data: {csv_ref}",
        "set datafile separator ','",
        "set logscale xy",
        "set key top left",
        "set xlabel 'level'",
        "set ylabel 'L2 error'",
    ]
    curves = [
        f"'{csv_ref}' using 1:{j + 2} with linespoints title 'alpha={a!r}'"
        for j, a in enumerate(table.alphas)
    ]
    if table.table_id == "fig4":
        fit_alpha = 0.8 if 0.8 in table.alphas else table.alphas[-1]
        C = fit_rate(table, "sqrt_const", alpha=fit_alpha).value(fit_alpha)
        lines.append(f"C = {C!r}")
        curves.append("C*sqrt(x) with lines dashtype 2 title sprintf('%.3g*sqrt(eta)', C)")
    lines.append("plot \\")
    lines.append(", \\\n".join("    " + c for c in curves))
    lines.append("pause -1")
    try:
        path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(f"emit_plot_script: cannot write {path}: {exc}") from exc


def emit_surface(
    f: SpectralField, data_path: str | Path, script_path: str | Path, npts: int = 64
) -> None:
    """Write a synthesized surface grid and its gnuplot splot script."""
    xs = np.linspace(0.0, math.pi, npts)
    grid = synthesize_grid(f, xs, xs)
    lines = []
    for i, x in enumerate(xs):
        for j, y in enumerate(xs):
            lines.append(f"{float(x)!r} {float(y)!r} {float(grid[i, j])!r}")
        lines.append("")
    try:
        Path(data_path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
        script = [
            f"# gnuplot surface script; data: {Path(data_path).name}",
            "set hidden3d",
            "set xlabel 'x'",
            "set ylabel 'y'",
            f"splot '{Path(data_path).name}' using 1:2:3 with lines notitle",
            "pause -1",
        ]
        Path(script_path).write_text("\n".join(script) + "\n", encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(f"emit_surface: cannot write surface artifacts: {exc}") from exc
