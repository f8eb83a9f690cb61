"""Command-line front end: build states, sweep loss, simulate tomography, self-check.

Exit codes: 0 success, 2 unphysical state, 3 argument/parse error, 4
check-suite failure.  Output is CSV or JSON; identical configurations
(including seeds) produce byte-identical files, and files are written
atomically (temp file then rename).  If the environment variable
GHZ_STEERING_OUTDIR is set, relative output paths land inside it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .network import GhzConfig, QuadCombo, build_state, correlation_variance, squeezing_db_to_r
from .steering import (
    DIRECTIONS,
    STEERING_EPS,
    complementary_pairs,
    one_to_one_labels,
    residuals_from_report,
    steering_report,
)
from .symplectic import PHYSICALITY_TOL, is_physical, purity, symplectic_eigenvalues
from .tomography import REJECT_NU_FLOOR, reconstruct_trials

SCHEMA_VERSION = 1
OUTDIR_ENV = "GHZ_STEERING_OUTDIR"
DEFAULT_GRID = "0.0:1.0:0.05"
DEFAULT_SEED = 12345

EXIT_OK = 0
EXIT_UNPHYSICAL = 2
EXIT_USAGE = 3
EXIT_CHECK_FAILED = 4

# Fixed column contract of the sweep CSV.
SWEEP_COLUMNS: tuple[str, ...] = (
    "eta",
    *[f"G_{label.replace('->', 'to')}" for label in DIRECTIONS],
    "res_A_out", "res_A_in", "res_B_out", "res_B_in", "res_C_out", "res_C_in",
)

# The headline second-moment combinations reported by `build`.
BUILD_COMBOS: dict[str, QuadCombo] = {
    "xA-xB": QuadCombo(terms=((0, "x", 1), (1, "x", -1))),
    "xA-xC": QuadCombo(terms=((0, "x", 1), (2, "x", -1))),
    "xB-xC": QuadCombo(terms=((1, "x", 1), (2, "x", -1))),
    "pA+pB+pC": QuadCombo(terms=((0, "p", 1), (1, "p", 1), (2, "p", 1))),
}


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors remapped to exit code 3 (2 is reserved)."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(value: float) -> str:
    """12 significant digits, the CSV number contract."""
    return format(float(value), ".12g")


def _resolve_output(path_arg: str | None) -> Path | None:
    if path_arg is None:
        return None
    path = Path(path_arg)
    outdir = os.environ.get(OUTDIR_ENV)
    if outdir and not path.is_absolute():
        path = Path(outdir) / path
    return path


def _emit(text: str, path: Path | None) -> None:
    """Write to stdout, or atomically to path (write temp file, then rename)."""
    if path is None:
        sys.stdout.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _config_from_args(args: argparse.Namespace, eta: float | None = None) -> GhzConfig:
    r = args.r
    if getattr(args, "squeezing_db", None) is not None:
        r = squeezing_db_to_r(args.squeezing_db)
    kwargs = dict(r1=r, r2=r, r3=r, t1=args.t1, t2=args.t2)
    if eta is not None:
        kwargs["eta"] = eta
    return GhzConfig(**kwargs)


def _config_doc(config: GhzConfig) -> dict:
    return {
        "r1": config.r1,
        "r2": config.r2,
        "r3": config.r3,
        "t1": config.t1,
        "t2": config.t2,
        "eta": config.eta,
    }


def _parse_grid(expr: str) -> list[float]:
    """Parse an eta grid: either start:stop:step or a comma-separated list."""
    try:
        if ":" in expr:
            fields = expr.split(":")
            if len(fields) != 3:
                raise ValueError("grid must be start:stop:step")
            start, stop, step = (float(f) for f in fields)
            if step <= 0:
                raise ValueError("grid step must be positive")
            if not (0.0 <= start <= stop <= 1.0):
                raise ValueError("grid must lie within [0, 1] with start <= stop")
            count = int(round((stop - start) / step)) + 1
            values = [min(start + k * step, stop) for k in range(count)]
            return [v for v in values if v <= stop + 1e-12]
        values = [float(f) for f in expr.split(",") if f.strip() != ""]
        if not values:
            raise ValueError("empty eta grid")
        if any(not 0.0 <= v <= 1.0 for v in values):
            raise ValueError("grid values must lie within [0, 1]")
        return values
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_state_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--r", type=float, default=0.339,
                       help="squeezing parameter for all three inputs (default 0.339)")
    group.add_argument("--squeezing-db", type=float, default=None,
                       help="squeezing in dB instead of r (e.g. 2.944)")
    parser.add_argument("--t1", type=float, default=1.0 / 3.0,
                        help="first beam-splitter transmittance (default 1/3)")
    parser.add_argument("--t2", type=float, default=0.5,
                        help="second beam-splitter transmittance (default 1/2)")


def _add_output_args(parser: argparse.ArgumentParser, formats: tuple[str, ...], default: str) -> None:
    parser.add_argument("--format", choices=formats, default=default,
                        help=f"output format (default {default})")
    parser.add_argument("--output", default=None,
                        help="output file (default stdout); relative paths honor "
                             f"${OUTDIR_ENV} when set")


def cmd_build(args: argparse.Namespace) -> int:
    config = _config_from_args(args, eta=args.eta)
    state = build_state(config)
    if not is_physical(state, args.tol_phys):
        print("error: constructed state violates the uncertainty relation", file=sys.stderr)
        return EXIT_UNPHYSICAL

    nus = symplectic_eigenvalues(state)
    variances = {lab: correlation_variance(state, combo) for lab, combo in BUILD_COMBOS.items()}

    if args.format == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "command": "build",
            "config": _config_doc(config),
            "covariance_matrix": state.matrix.tolist(),
            "purity": purity(state),
            "symplectic_eigenvalues": nus.tolist(),
            "correlation_variances": variances,
        }
        text = json.dumps(doc, indent=2) + "\n"
    else:
        lines = [f"# purity={_fmt(purity(state))}"]
        lines.append("# symplectic_eigenvalues=" + ";".join(_fmt(nu) for nu in nus))
        for lab, val in variances.items():
            lines.append(f"# var({lab})={_fmt(val)}")
        header = [f"{quad}{name}" for name in "ABC" for quad in ("x", "p")]
        lines.append(",".join(header))
        for row in state.matrix:
            lines.append(",".join(_fmt(v) for v in row))
        text = "\n".join(lines) + "\n"
    _emit(text, _resolve_output(args.output))
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    rows = []
    for eta in args.grid:
        state = build_state(replace(config, eta=eta))
        if not is_physical(state, PHYSICALITY_TOL):
            print(f"error: state at eta={eta} violates the uncertainty relation", file=sys.stderr)
            return EXIT_UNPHYSICAL
        report = steering_report(state, eta=eta)
        residuals = residuals_from_report(report)
        rows.append((eta, report, residuals))

    if args.format == "csv":
        lines = [",".join(SWEEP_COLUMNS)]
        for eta, report, residuals in rows:
            values = [eta, *report.g.values(), *residuals.residuals.values()]
            lines.append(",".join(_fmt(v) for v in values))
        text = "\n".join(lines) + "\n"
    else:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "command": "sweep",
            "config": _config_doc(config),
            "rows": [
                {"eta": eta, "g": report.g, "residuals": residuals.residuals}
                for eta, report, residuals in rows
            ],
        }
        text = json.dumps(doc, indent=2) + "\n"
    _emit(text, _resolve_output(args.output))
    return EXIT_OK


def cmd_tomo(args: argparse.Namespace) -> int:
    config = _config_from_args(args, eta=args.eta)
    state = build_state(config)
    if not is_physical(state, PHYSICALITY_TOL):
        print("error: constructed state violates the uncertainty relation", file=sys.stderr)
        return EXIT_UNPHYSICAL
    analytic = steering_report(state, eta=config.eta)
    try:
        stats = reconstruct_trials(state, n_samples=args.samples, n_trials=args.trials,
                                   seed=args.seed)
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNPHYSICAL

    trials_doc = []
    accepted = set(stats.accepted)
    report_by_trial = dict(zip(stats.accepted, stats.reports))
    for index in range(stats.n_trials):
        entry = {
            "trial": index,
            "accepted": index in accepted,
            "min_symplectic_eigenvalue": stats.min_symplectic_eigenvalues[index],
            "g": report_by_trial[index].g if index in accepted else None,
        }
        trials_doc.append(entry)

    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": "tomo",
        "config": {
            **_config_doc(config),
            "samples": args.samples,
            "trials": args.trials,
            "seed": args.seed,
        },
        "rejection_rule": {
            "min_symplectic_eigenvalue_floor": REJECT_NU_FLOOR,
            "note": "trials reconstructing below the floor are excluded; no repair applied",
        },
        "analytic": analytic.g,
        "trials": trials_doc,
        "mean": stats.mean,
        "std": stats.std,
    }
    _emit(json.dumps(doc, indent=2) + "\n", _resolve_output(args.output))
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    grid = [k * 0.05 for k in range(21)]
    states = {eta: build_state(replace(config, eta=eta)) for eta in grid}
    reports = {eta: steering_report(state, eta=eta) for eta, state in states.items()}

    checks: list[tuple[str, bool, str]] = []

    nu_min = min(symplectic_eigenvalues(state).min() for state in states.values())
    floor = args.nu_floor if args.nu_floor is not None else 1.0 - PHYSICALITY_TOL
    checks.append(("physicality", nu_min >= floor,
                   f"min symplectic eigenvalue {nu_min:.6g} vs floor {floor:.6g}"))

    worst_pair = max(rep.g[lab] for rep in reports.values() for lab in one_to_one_labels())
    checks.append(("one-to-one-nullity", worst_pair <= STEERING_EPS,
                   f"max pairwise G {worst_pair:.3g}"))

    pure = reports[1.0]
    asym = max(abs(pure.g[a] - pure.g[b]) for a, b in complementary_pairs())
    checks.append(("pure-state-symmetry", asym <= 1e-9,
                   f"max |G(X->Y) - G(Y->X)| at eta=1: {asym:.3g}"))

    worst_res = min(min(residuals_from_report(rep).residuals.values())
                    for rep in reports.values())
    checks.append(("monogamy", worst_res >= -1e-10, f"min residual {worst_res:.3g}"))

    failed = [name for name, ok, _ in checks if not ok]
    for name, ok, detail in checks:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    if failed:
        print(f"check failed: {failed[0]}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="ghz-steering",
                     description="Three-mode GHZ-state Gaussian steering toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="construct one state and report its moments")
    _add_state_args(p_build)
    p_build.add_argument("--eta", type=float, default=1.0,
                         help="channel efficiency on mode A (default 1.0)")
    p_build.add_argument("--tol-phys", type=float, default=PHYSICALITY_TOL,
                         help="physicality tolerance on the symplectic spectrum")
    _add_output_args(p_build, ("json", "csv"), "json")
    p_build.set_defaults(func=cmd_build)

    p_sweep = sub.add_parser("sweep", help="steering and monogamy across an eta grid")
    _add_state_args(p_sweep)
    p_sweep.add_argument("--grid", type=_parse_grid, default=_parse_grid(DEFAULT_GRID),
                         help=f"eta grid, start:stop:step or comma list (default {DEFAULT_GRID})")
    _add_output_args(p_sweep, ("csv", "json"), "csv")
    p_sweep.set_defaults(func=cmd_sweep)

    p_tomo = sub.add_parser("tomo", help="simulated covariance reconstruction with error bars")
    _add_state_args(p_tomo)
    p_tomo.add_argument("--eta", type=float, default=1.0,
                        help="channel efficiency on mode A (default 1.0)")
    p_tomo.add_argument("--samples", type=int, default=100_000,
                        help="quadrature samples per trial (default 100000)")
    p_tomo.add_argument("--trials", type=int, default=3,
                        help="number of reconstruction trials (default 3)")
    p_tomo.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"master seed; trials derive child seeds (default {DEFAULT_SEED})")
    _add_output_args(p_tomo, ("json",), "json")
    p_tomo.set_defaults(func=cmd_tomo)

    p_check = sub.add_parser("check", help="run the invariant suite")
    _add_state_args(p_check)
    p_check.add_argument("--nu-floor", type=float, default=None,
                         help="override the physicality floor (default 1 - 1e-9)")
    p_check.set_defaults(func=cmd_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        # domain validation failures (bad eta, bad grid, bad direction, ...)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
