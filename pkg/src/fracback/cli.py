"""Command-line front end for the fracback library.

Subcommands
-----------
ml         evaluate E_{alpha,beta}(x), printed at 15 significant digits
forward    solve the forward problem at time t and write the field CSV
backward   reconstruct u(t) from final data and write the field CSV
table      run one benchmark error table (1, 2, or 3); write CSV + plot script
fig4       run the rate sweep, print the fitted C, write CSV + plot script
diagnose   print the solvability classification of the final data

Configuration comes from an optional JSON file (strict schema: unknown keys
are rejected) whose values are overridden by flags; with no file and no
flags the defaults reproduce the benchmark artifacts.  The output directory
is resolved as ``--out``, then the config file's ``out``, then the
``FRACBACK_OUT`` environment variable, then the current directory.

Exit codes are a stable contract: 0 success, 2 usage or domain error
(including parameter-choice failures), 3 I/O error, 4 numerical failure.
No subcommand reads the network, and rerunning any subcommand with the
same inputs produces byte-identical outputs.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import DomainError, NumericalError
from .experiments import (
    ErrorTable,
    ExperimentConfig,
    PaperProblem,
    emit_csv,
    emit_plot_script,
    noise_audit,
    noisy_data,
    noisy_source,
    paper_problem,
    run_fig4,
    run_table1,
    run_table2,
    run_table3,
)
from .quadrature import SingularMode
from .solver import (
    ChoiceRule,
    RegularizationChoice,
    choose_t,
    forward_solve,
    reconstruct_noisy,
    solvability_diagnostic,
)
from .special import ml
from .spectral import write_csv

__all__ = ["CliConfig", "load_config", "main"]

# Short flag tokens and the full API tokens are both accepted.
_SINGULAR_TOKENS = {
    "paper": SingularMode.PAPER_DIRECT,
    "graded": SingularMode.GRADED_SUBSTITUTION,
    "paper_direct": SingularMode.PAPER_DIRECT,
    "graded_substitution": SingularMode.GRADED_SUBSTITUTION,
}

_EXPERIMENT_KEYS = (
    "alphas",
    "tau",
    "truncation",
    "subintervals",
    "points",
    "temporal_subintervals",
    "sweep",
    "noise_mode",
    "seed",
    "singular_mode",
)
_CONFIG_KEYS = frozenset(_EXPERIMENT_KEYS) | {"out", "verbosity"}


@dataclass(frozen=True)
class CliConfig:
    """Experiment settings plus output directory and verbosity."""

    experiment: ExperimentConfig = ExperimentConfig()
    out: str | None = None
    verbosity: int = 0

    def __post_init__(self) -> None:
        if self.out is not None and not isinstance(self.out, str):
            raise DomainError(f"config: out must be a string, got {self.out!r}")
        if not isinstance(self.verbosity, int) or isinstance(self.verbosity, bool):
            raise DomainError(
                f"config: verbosity must be an integer, got {self.verbosity!r}"
            )


def load_config(path: str | Path | None) -> CliConfig:
    """Parse a JSON config file; unknown keys are rejected, not ignored."""
    if path is None:
        return CliConfig()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"config: cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"config: {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise DomainError(f"config: {path} must hold a JSON object")
    unknown = sorted(set(data) - _CONFIG_KEYS)
    if unknown:
        raise DomainError(f"config: unknown keys {unknown} in {path}")
    fields = {k: v for k, v in data.items() if k in _EXPERIMENT_KEYS}
    if "singular_mode" in fields:
        fields["singular_mode"] = _parse_singular(fields["singular_mode"])
    try:
        experiment = ExperimentConfig(**fields)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"config: {path}: {exc}") from exc
    return CliConfig(
        experiment=experiment,
        out=data.get("out"),
        verbosity=data.get("verbosity", 0),
    )


def _parse_singular(value: object) -> SingularMode:
    try:
        return _SINGULAR_TOKENS[str(value)]
    except KeyError:
        raise DomainError(
            f"singular mode must be one of {sorted(_SINGULAR_TOKENS)}, got {value!r}"
        ) from None


def _settings(args: argparse.Namespace) -> tuple[ExperimentConfig, Path, int]:
    """Merge config file, flags, and environment into the effective settings."""
    cli = load_config(getattr(args, "config", None))
    ecfg = cli.experiment
    mode = getattr(args, "singular_mode", None)
    if mode is not None:
        ecfg = dataclasses.replace(ecfg, singular_mode=_parse_singular(mode))
    out = getattr(args, "out", None) or cli.out or os.environ.get("FRACBACK_OUT") or "."
    verbosity = cli.verbosity + getattr(args, "verbose", 0)
    return ecfg, Path(out), verbosity


def _ensure_dir(out: Path) -> None:
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc


def _write_field(field, path: Path) -> None:
    write_csv(field, path)
    print(f"wrote {path}")


def _echo(verbosity: int, message: str) -> None:
    if verbosity >= 1:
        print(f"# {message}", file=sys.stderr)


def _single_alpha(args: argparse.Namespace) -> tuple[ExperimentConfig, Path, int, PaperProblem, float]:
    ecfg, out, verbosity = _settings(args)
    alpha = float(args.alpha)
    ecfg = dataclasses.replace(ecfg, alphas=(alpha,))
    _echo(verbosity, f"config: {ecfg}")
    return ecfg, out, verbosity, paper_problem(ecfg), alpha


def _cmd_ml(args: argparse.Namespace) -> int:
    value = ml(args.alpha, args.beta, args.x)
    print(f"{value:.15g}")
    return 0


def _cmd_forward(args: argparse.Namespace) -> int:
    ecfg, out, verbosity, pp, alpha = _single_alpha(args)
    prob = pp.problems[alpha]
    if args.eps and args.eps > 0.0:
        source = noisy_source(
            prob.source, args.eps, pp.modeset, mode=ecfg.noise_mode, seed=ecfg.seed
        )
        prob = dataclasses.replace(prob, source=source)
    t = ecfg.tau if args.t is None else args.t
    field = forward_solve(prob, pp.u0, t)
    _ensure_dir(out)
    _write_field(pp.u0, out / "u0.csv")
    _write_field(pp.finals[alpha], out / "g.csv")
    _write_field(field, out / "forward.csv")
    return 0


def _cmd_backward(args: argparse.Namespace) -> int:
    ecfg, out, verbosity, pp, alpha = _single_alpha(args)
    prob = pp.problems[alpha]
    g = pp.finals[alpha]
    eps = args.eps or 0.0
    delta = args.delta or 0.0
    g_in = (
        noisy_data(g, delta, pp.quad, mode=ecfg.noise_mode, seed=ecfg.seed)
        if delta > 0.0
        else g
    )
    source = (
        noisy_source(prob.source, eps, pp.modeset, mode=ecfg.noise_mode, seed=ecfg.seed)
        if eps > 0.0
        else prob.source
    )
    if args.t is not None:
        t = args.t
    else:
        eta = max(eps, delta)
        if eta <= 0.0:
            raise DomainError(
                "backward: --t is required unless a noise level (--eps/--delta) "
                "selects it through the parameter-choice rule"
            )
        t = choose_t(
            RegularizationChoice(ChoiceRule.PAPER_TABLE2, eta=eta), alpha, tau=ecfg.tau
        )
        _echo(verbosity, f"parameter choice: t = {t!r}")
    if verbosity >= 1 and max(eps, delta) > 0.0:
        audit = noise_audit(max(eps, delta), pp.modeset, pp.quad)
        _echo(
            verbosity,
            f"noise audit: nominal={audit.nominal!r} "
            f"function_norm={audit.function_norm!r} "
            f"truncated_norm={audit.truncated_norm!r}",
        )
    field = reconstruct_noisy(prob, g_in, source, t)
    if "unregularized inversion" in field.flags:
        print("warning: unregularized inversion (t = 0)", file=sys.stderr)
    _ensure_dir(out)
    _write_field(pp.u0, out / "u0.csv")
    _write_field(g, out / "g.csv")
    _write_field(field, out / "backward.csv")
    return 0


_TABLE_RUNNERS = {1: run_table1, 2: run_table2, 3: run_table3}


def _emit_table(table: ErrorTable, out: Path) -> None:
    _ensure_dir(out)
    csv_path = out / f"{table.table_id}.csv"
    emit_csv(table, csv_path)
    emit_plot_script(table, out / f"{table.table_id}.gp")
    print(f"wrote {csv_path}")
    print(f"wrote {out / (table.table_id + '.gp')}")
    print(f"sha256 {table.content_hash}")


def _cmd_table(args: argparse.Namespace) -> int:
    ecfg, out, verbosity = _settings(args)
    _echo(verbosity, f"config: {ecfg}")
    table = _TABLE_RUNNERS[args.id](ecfg, threads=args.threads)
    _emit_table(table, out)
    return 0


def _cmd_fig4(args: argparse.Namespace) -> int:
    ecfg, out, verbosity = _settings(args)
    _echo(verbosity, f"config: {ecfg}")
    table, fit = run_fig4(ecfg, threads=args.threads)
    _emit_table(table, out)
    C = fit.estimates[0][1]
    print(f"C = {C!r}")
    return 0


def _cmd_diagnose(args: argparse.Namespace) -> int:
    ecfg, out, verbosity, pp, alpha = _single_alpha(args)
    prob = pp.problems[alpha]
    g = pp.finals[alpha]
    delta = args.delta or 0.0
    if delta > 0.0:
        g = noisy_data(g, delta, pp.quad, mode=ecfg.noise_mode, seed=ecfg.seed)
    report = solvability_diagnostic(prob, g)
    print(f"classification: {report.classification}")
    sums = report.partial_sums
    quarters = sorted({max(len(sums) * k // 4, 1) for k in (1, 2, 3, 4)})
    for idx in quarters:
        print(f"S_{idx} = {sums[idx - 1]!r}")
    return 0


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", metavar="PATH", help="JSON config file (strict keys)")
    sub.add_argument(
        "--out",
        metavar="DIR",
        help="output directory (fallback: config file, $FRACBACK_OUT, '.')",
    )
    sub.add_argument(
        "--singular-mode",
        choices=sorted(_SINGULAR_TOKENS),
        help="quadrature treatment of the weakly singular kernel",
    )
    sub.add_argument(
        "-v", "--verbose", action="count", default=0, help="diagnostics on stderr"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracback",
        description="Backward time-fractional heat conduction benchmark tools.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ml = sub.add_parser("ml", help="evaluate E_{alpha,beta}(x)")
    p_ml.add_argument("--alpha", type=float, required=True, help="order alpha in (0, 1]")
    p_ml.add_argument("--beta", type=float, required=True, help="order beta > 0")
    p_ml.add_argument("--x", type=float, required=True, help="argument x <= 0")
    p_ml.set_defaults(handler=_cmd_ml)

    p_fwd = sub.add_parser("forward", help="forward solution field at time t")
    _add_common(p_fwd)
    p_fwd.add_argument("--alpha", type=float, default=0.8, help="fractional order (default 0.8)")
    p_fwd.add_argument("--t", type=float, default=None, help="time in [0, tau] (default tau)")
    p_fwd.add_argument("--eps", type=float, default=0.0, help="source noise level")
    p_fwd.set_defaults(handler=_cmd_forward)

    p_bwd = sub.add_parser("backward", help="backward reconstruction at time t")
    _add_common(p_bwd)
    p_bwd.add_argument("--alpha", type=float, default=0.8, help="fractional order (default 0.8)")
    p_bwd.add_argument(
        "--t",
        type=float,
        default=None,
        help="time in [0, tau]; omitted: chosen from the noise level",
    )
    p_bwd.add_argument("--eps", type=float, default=0.0, help="source noise level")
    p_bwd.add_argument("--delta", type=float, default=0.0, help="data noise level")
    p_bwd.set_defaults(handler=_cmd_backward)

    p_tab = sub.add_parser("table", help="run benchmark error table 1, 2, or 3")
    _add_common(p_tab)
    p_tab.add_argument("--id", type=int, choices=(1, 2, 3), required=True)
    p_tab.add_argument("--threads", type=int, default=1, help="worker cap (output-invariant)")
    p_tab.set_defaults(handler=_cmd_table)

    p_fig = sub.add_parser("fig4", help="rate sweep and fitted C")
    _add_common(p_fig)
    p_fig.add_argument("--threads", type=int, default=1, help="worker cap (output-invariant)")
    p_fig.set_defaults(handler=_cmd_fig4)

    p_diag = sub.add_parser("diagnose", help="solvability classification of the data")
    _add_common(p_diag)
    p_diag.add_argument("--alpha", type=float, default=0.8, help="fractional order (default 0.8)")
    p_diag.add_argument("--delta", type=float, default=0.0, help="data noise level")
    p_diag.set_defaults(handler=_cmd_diagnose)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except DomainError as exc:  # includes ParameterChoiceError
        print(f"fracback: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"fracback: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"fracback: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
