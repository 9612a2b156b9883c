"""Command line front end.

Subcommands: estimate (fit one data file), sample (draw variates),
design (inspect design-moment matrices), simulate (Monte Carlo grid) and
ksweep (grid-resolution sweep).  Exit codes: 0 success, 1 data or numeric
error, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional

import numpy as np

from .design import IntervalDesign, build_log_design, build_poly_design
from .ecf import Sample
from .estimators import (
    DEFAULT_DESIGN,
    DEFAULT_K,
    DEFAULT_KOUTROUVELIS_POINTS,
    Estimate,
    fit_infinite_ls,
    fit_kogon_williams,
    fit_koutrouvelis,
)
from .model import EstimationError, StableParams
from .rng import StableSampler
from .simulation import (
    ConfigError,
    build_config,
    emit_report,
    k_sweep,
    load_config_file,
    run_simulation,
)

__all__ = ["main", "run"]


def _read_values(path: str) -> np.ndarray:
    """One number per line; blank lines and '#' comments are skipped."""
    values: list[float] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            try:
                values.append(float(stripped))
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: not a number: {stripped!r}") from None
    if len(values) < 2:
        raise ValueError(f"{path}: need at least 2 observations, got {len(values)}")
    return np.array(values)


def _print_estimate(est: Estimate, n: int) -> None:
    print(f"method: {est.method}")
    print(f"n: {n}")
    print(f"alpha_hat: {est.alpha_hat:.4f}")
    print(f"sigma_hat: {est.sigma_hat:.4f}")
    print(f"alpha_se: {est.alpha_se:.4f}")
    print(f"intercept: {est.intercept:.4f}")
    print(f"s_squared: {est.s_squared:.6f}")
    print(f"clamp_count: {est.clamp_count}")
    print(f"slope_clamped: {'yes' if est.slope_clamped else 'no'}")


def cmd_estimate(args: argparse.Namespace) -> int:
    sample = Sample(_read_values(args.input))
    if args.method == "infinite-ls":
        est = fit_infinite_ls(sample, IntervalDesign(args.x0, args.d), args.K)
    elif args.method == "kogon-williams":
        est = fit_kogon_williams(sample)
    else:
        est = fit_koutrouvelis(sample, num_points=args.kout_points)
    _print_estimate(est, sample.n)
    return 0


def cmd_sample(args: argparse.Namespace) -> int:
    params = StableParams(alpha=args.alpha, sigma=args.sigma)
    sampler = StableSampler(params, args.seed, args.stream)
    values = sampler.draw_array(args.n)
    text = "\n".join(format(v, ".17g") for v in values) + "\n"
    if args.out is None or args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.n} draws to {args.out}")
    return 0


def cmd_design(args: argparse.Namespace) -> int:
    design = IntervalDesign(args.x0, args.d)
    if args.model == "log":
        moments = build_log_design(design)
    elif args.model == "linear":
        moments = build_poly_design(design, 1)
    else:
        moments = build_poly_design(design, args.degree)
    print(f"model: {moments.model_kind}")
    print(f"interval: [{design.x0:g}, {design.x0 + design.d:g}]")
    print("matrix:")
    for row in moments.matrix:
        print("  " + "  ".join(format(v, ".10g") for v in row))
    print(f"determinant: {moments.determinant:.10g}")
    print(f"condition: {np.linalg.cond(moments.matrix):.4e}")
    return 0


_OVERRIDE_KEYS = (
    ("alphas", "alphas"),
    ("ns", "ns"),
    ("reps", "reps"),
    ("methods", "methods"),
    ("x0", "x0"),
    ("d", "d"),
    ("K", "K"),
    ("seed", "seed"),
    ("target", "target"),
    ("sigma", "sigma"),
    ("kout_points", "kout_points"),
    ("ks", "ks"),
)


def _gather_raw_config(args: argparse.Namespace) -> dict[str, str]:
    raw = load_config_file(args.config) if args.config else {}
    for attr, key in _OVERRIDE_KEYS:
        value = getattr(args, attr, None)
        if value is not None:
            raw[key] = value
    return raw


def _emit(report, fmt: str, out: Optional[str]) -> None:
    text = emit_report(report, fmt)
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(
            f"wrote {len(report.rows)} rows to {out} "
            f"({fmt}, {report.wall_time:.2f} s, seed {report.config.base_seed})"
        )


def cmd_simulate(args: argparse.Namespace) -> int:
    config, k_values, out_file = build_config(_gather_raw_config(args))
    if k_values is not None:
        report = k_sweep(config, k_values, n_jobs=args.threads)
    else:
        report = run_simulation(config, n_jobs=args.threads)
    _emit(report, args.format, args.out if args.out is not None else out_file)
    return 0


def cmd_ksweep(args: argparse.Namespace) -> int:
    config, k_values, out_file = build_config(_gather_raw_config(args))
    if k_values is None:
        raise ConfigError("a K sweep needs --ks (or 'ks' in the config file)")
    report = k_sweep(config, k_values, n_jobs=args.threads)
    _emit(report, args.format, args.out if args.out is not None else out_file)
    return 0


def _add_sim_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="recipe file with key = value lines")
    sub.add_argument("--alphas", help="comma list of true index values")
    sub.add_argument("--ns", help="comma list of sample sizes")
    sub.add_argument("--reps", help="replications per cell")
    sub.add_argument("--methods", help="comma list from: infinite-ls, kogon-williams, koutrouvelis")
    sub.add_argument("--x0", help="grid start")
    sub.add_argument("--d", help="grid width")
    sub.add_argument("--K", help="grid resolution")
    sub.add_argument("--seed", help="base seed")
    sub.add_argument("--target", help="alpha or sigma")
    sub.add_argument("--sigma", help="true scale of simulated laws")
    sub.add_argument("--kout-points", dest="kout_points",
                     help="koutrouvelis points: integer or alpha:n:points list")
    sub.add_argument("--out", help="output path ('-' for stdout)")
    sub.add_argument("--format", choices=("csv", "markdown"), default="csv")
    sub.add_argument("--threads", type=int, default=1, help="worker threads per cell")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stablereg",
        description="Symmetric stable parameter estimation by characteristic function regression.",
        epilog="exit codes: 0 success, 1 data or numeric error, 2 usage or config error",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_est = subs.add_parser("estimate", help="estimate (alpha, sigma) from a data file")
    p_est.add_argument("input", help="data file, one number per line")
    p_est.add_argument("--method", choices=("infinite-ls", "kogon-williams", "koutrouvelis"),
                       default="infinite-ls")
    p_est.add_argument("--x0", type=float, default=DEFAULT_DESIGN.x0)
    p_est.add_argument("--d", type=float, default=DEFAULT_DESIGN.d)
    p_est.add_argument("--K", type=int, default=DEFAULT_K)
    p_est.add_argument("--kout-points", dest="kout_points", type=int,
                       default=DEFAULT_KOUTROUVELIS_POINTS)
    p_est.set_defaults(func=cmd_estimate)

    p_smp = subs.add_parser("sample", help="draw symmetric stable variates")
    p_smp.add_argument("--alpha", type=float, required=True)
    p_smp.add_argument("--sigma", type=float, default=1.0)
    p_smp.add_argument("--n", type=int, required=True)
    p_smp.add_argument("--seed", type=int, default=0)
    p_smp.add_argument("--stream", type=int, default=0)
    p_smp.add_argument("--out", help="output path (default stdout)")
    p_smp.set_defaults(func=cmd_sample)

    p_dsg = subs.add_parser("design", help="inspect a design-moment matrix")
    p_dsg.add_argument("--x0", type=float, default=DEFAULT_DESIGN.x0)
    p_dsg.add_argument("--d", type=float, default=DEFAULT_DESIGN.d)
    p_dsg.add_argument("--model", choices=("log", "linear", "poly"), default="log")
    p_dsg.add_argument("--degree", type=int, default=2, help="degree for --model poly")
    p_dsg.set_defaults(func=cmd_design)

    p_sim = subs.add_parser("simulate", help="run a Monte Carlo grid")
    _add_sim_flags(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_swp = subs.add_parser("ksweep", help="sweep grid resolutions on one cell")
    _add_sim_flags(p_swp)
    p_swp.add_argument("--ks", help="comma list of K values")
    p_swp.set_defaults(func=cmd_ksweep)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return int(code) if code is not None else 0
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (EstimationError, ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    raise SystemExit(main(sys.argv[1:]))


if __name__ == "__main__":
    run()
