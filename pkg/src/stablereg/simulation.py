"""Monte Carlo bias/MSE harness for the stable-parameter estimators.

A simulation is a grid of (alpha, n) cells.  Every cell draws
`replications` independent samples; all methods (and, in a K sweep, all
grid resolutions) are fitted to the same samples so that comparisons are
paired.  Sampling is keyed by (base_seed, alpha, n, replication) only,
never by method, so adding or removing methods does not move the data.
"""
from __future__ import annotations

import math
import struct
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from .design import IntervalDesign
from .ecf import Sample
from .estimators import (
    DEFAULT_KOUTROUVELIS_POINTS,
    Estimate,
    fit_infinite_ls,
    fit_kogon_williams,
    fit_koutrouvelis,
)
from .model import EstimationError, StableParams
from .rng import StableSampler, replicate_seed

__all__ = [
    "VALID_METHODS",
    "VALID_TARGETS",
    "CSV_HEADER",
    "CONFIG_KEYS",
    "ConfigError",
    "SimConfig",
    "SimRow",
    "SimReport",
    "run_simulation",
    "k_sweep",
    "emit_report",
    "parse_csv",
    "load_config_file",
    "build_config",
]

VALID_METHODS = ("infinite-ls", "kogon-williams", "koutrouvelis")
VALID_TARGETS = ("alpha", "sigma")

CSV_HEADER = "method,alpha_true,n,target,mean,bias,mse,clamp_rate,failures"

_SEED_MAX = 2**64


class ConfigError(ValueError):
    """Invalid simulation configuration (bad key, value or combination)."""


@dataclass(frozen=True)
class SimConfig:
    """One simulation run: the (alpha, n) grid, estimator roster and seeds.

    `koutrouvelis_points` optionally maps (alpha, n) to the number of
    regression points for that cell; cells not listed use
    `koutrouvelis_default_points`.  `sigma` is the true scale of the
    simulated laws and the truth value when target = "sigma".
    """

    alphas: tuple[float, ...]
    sample_sizes: tuple[int, ...]
    replications: int = 2000
    methods: tuple[str, ...] = ("infinite-ls",)
    x0: float = 0.1
    d: float = 1.9
    k: int = 500
    base_seed: int = 0
    target: str = "alpha"
    sigma: float = 1.0
    koutrouvelis_points: Optional[Mapping[tuple[float, int], int]] = None
    koutrouvelis_default_points: int = DEFAULT_KOUTROUVELIS_POINTS

    def __post_init__(self) -> None:
        if len(self.alphas) == 0:
            raise ConfigError("alphas must be non-empty")
        for a in self.alphas:
            if not 0.0 < a <= 2.0:
                raise ConfigError(f"alpha values must be in (0, 2], got {a}")
        if len(self.sample_sizes) == 0:
            raise ConfigError("ns must be non-empty")
        for n in self.sample_sizes:
            if n < 2:
                raise ConfigError(f"sample sizes must be >= 2, got {n}")
        if self.replications < 1:
            raise ConfigError(f"reps must be >= 1, got {self.replications}")
        if len(self.methods) == 0:
            raise ConfigError("methods must be non-empty")
        for m in self.methods:
            if m not in VALID_METHODS:
                raise ConfigError(f"unknown method {m!r}, valid: {', '.join(VALID_METHODS)}")
        if len(set(self.methods)) != len(self.methods):
            raise ConfigError("methods must not repeat")
        if not self.x0 > 0.0:
            raise ConfigError(f"x0 must be positive, got {self.x0}")
        if not self.d > 0.0:
            raise ConfigError(f"d must be positive, got {self.d}")
        if self.k < 2:
            raise ConfigError(f"K must be >= 2, got {self.k}")
        if not 0 <= self.base_seed < _SEED_MAX:
            raise ConfigError(f"seed must be in [0, 2^64), got {self.base_seed}")
        if self.target not in VALID_TARGETS:
            raise ConfigError(f"target must be one of {VALID_TARGETS}, got {self.target!r}")
        if not self.sigma > 0.0:
            raise ConfigError(f"sigma must be positive, got {self.sigma}")
        if self.koutrouvelis_default_points < 2:
            raise ConfigError("koutrouvelis point counts must be >= 2")
        if self.koutrouvelis_points is not None:
            for key, pts in self.koutrouvelis_points.items():
                if pts < 2:
                    raise ConfigError(f"koutrouvelis point count for {key} must be >= 2")


@dataclass(frozen=True)
class SimRow:
    """Aggregated cell result for one method label.

    mean/bias/mse summarize the successful replications; bias is
    mean - truth.  clamp_rate is the fraction of successful replications
    whose slope hit the admissible-range clamp.  failures counts
    replications that raised or produced a non-finite target estimate;
    when all replications fail the statistics are NaN and the run
    continues.
    """

    method: str
    alpha_true: float
    n: int
    target: str
    mean: float
    bias: float
    mse: float
    clamp_rate: float
    failures: int


@dataclass
class SimReport:
    rows: list[SimRow]
    config: SimConfig
    method_labels: tuple[str, ...]
    wall_time: float


# --------------------------------------------------------------------------
# seeding

def _cell_seed(base_seed: int, alpha: float, n: int) -> int:
    """Derive the sampling seed of an (alpha, n) cell from the base seed.

    Uses the IEEE bit pattern of alpha so distinct float values can never
    collide, and is independent of the method roster by construction.
    """
    alpha_bits = struct.unpack("<Q", struct.pack("<d", float(alpha)))[0]
    ss = np.random.SeedSequence([base_seed, alpha_bits, int(n)])
    return int(ss.generate_state(1, np.uint64)[0])


# --------------------------------------------------------------------------
# per-cell execution

Fitter = tuple[str, Callable[[Sample], Estimate]]


def _expand_labels(methods: Sequence[str], k_values: Optional[Sequence[int]]) -> tuple[str, ...]:
    labels: list[str] = []
    for m in methods:
        if m == "infinite-ls" and k_values is not None:
            labels.extend(f"infinite-ls[K={k}]" for k in k_values)
        else:
            labels.append(m)
    return tuple(labels)


def _cell_fitters(
    config: SimConfig, alpha: float, n: int, k_values: Optional[Sequence[int]]
) -> list[Fitter]:
    design = IntervalDesign(config.x0, config.d)
    fitters: list[Fitter] = []
    for m in config.methods:
        if m == "infinite-ls":
            ks = k_values if k_values is not None else (config.k,)
            label = "infinite-ls[K={}]" if k_values is not None else "infinite-ls"
            for k in ks:
                fitters.append((label.format(k), partial(fit_infinite_ls, design=design, k=k)))
        elif m == "kogon-williams":
            fitters.append((m, fit_kogon_williams))
        elif m == "koutrouvelis":
            pts = config.koutrouvelis_default_points
            if config.koutrouvelis_points is not None:
                pts = config.koutrouvelis_points.get((alpha, n), pts)
            fitters.append((m, partial(fit_koutrouvelis, num_points=pts)))
    return fitters


def _run_chunk(
    fitters: Sequence[Fitter],
    params: StableParams,
    cell_seed: int,
    n: int,
    indices: Sequence[int],
) -> dict[str, tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]]:
    """Fit every method to the samples of the given replication indices.

    Returns per label (alpha_hats, sigma_hats, clamped, raised) arrays in
    index order.  One sample is drawn per replication and shared by all
    fitters, keeping method comparisons paired.
    """
    m = len(indices)
    out = {
        label: (np.full(m, np.nan), np.full(m, np.nan), np.zeros(m, bool), np.zeros(m, bool))
        for label, _ in fitters
    }
    for pos, r in enumerate(indices):
        seed, stream = replicate_seed(cell_seed, int(r))
        sample = StableSampler(params, seed, stream).draw(n)
        for label, fit in fitters:
            alphas, sigmas, clamped, raised = out[label]
            try:
                est = fit(sample)
            except EstimationError:
                raised[pos] = True
                continue
            alphas[pos] = est.alpha_hat
            sigmas[pos] = est.sigma_hat
            clamped[pos] = est.slope_clamped
    return out


def _aggregate(
    label: str,
    alpha: float,
    n: int,
    config: SimConfig,
    values: np.ndarray,
    clamped: np.ndarray,
    raised: np.ndarray,
) -> SimRow:
    truth = alpha if config.target == "alpha" else config.sigma
    reps = values.size
    ok = np.isfinite(values) & ~raised
    failures = int(reps - ok.sum())
    if failures == reps:
        return SimRow(label, alpha, n, config.target, math.nan, math.nan, math.nan, math.nan, failures)
    vals = values[ok]
    mean = float(vals.mean())
    bias = mean - truth
    mse = float(np.mean((vals - truth) ** 2))
    var = float(np.mean((vals - mean) ** 2))
    if abs(mse - (var + bias * bias)) > 1e-12 * max(1.0, abs(mse)):
        raise RuntimeError(
            f"internal decomposition check failed: mse={mse!r} var={var!r} bias={bias!r}"
        )
    clamp_rate = float(clamped[ok].mean())
    return SimRow(label, alpha, n, config.target, mean, bias, mse, clamp_rate, failures)


def _run_cell(
    config: SimConfig,
    alpha: float,
    n: int,
    k_values: Optional[Sequence[int]],
    n_jobs: int,
) -> dict[str, SimRow]:
    fitters = _cell_fitters(config, alpha, n, k_values)
    params = StableParams(alpha=alpha, sigma=config.sigma)
    cell_seed = _cell_seed(config.base_seed, alpha, n)
    reps = config.replications
    indices = np.arange(reps)

    if n_jobs <= 1 or reps == 1:
        chunks = [_run_chunk(fitters, params, cell_seed, n, indices)]
    else:
        chunk_size = max(1, math.ceil(reps / (4 * n_jobs)))
        parts = [indices[i : i + chunk_size] for i in range(0, reps, chunk_size)]
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            chunks = list(pool.map(partial(_run_chunk, fitters, params, cell_seed, n), parts))

    rows: dict[str, SimRow] = {}
    for label, _ in fitters:
        alphas = np.concatenate([c[label][0] for c in chunks])
        sigmas = np.concatenate([c[label][1] for c in chunks])
        clamped = np.concatenate([c[label][2] for c in chunks])
        raised = np.concatenate([c[label][3] for c in chunks])
        values = alphas if config.target == "alpha" else sigmas
        rows[label] = _aggregate(label, alpha, n, config, values, clamped, raised)
    return rows


def _run(config: SimConfig, k_values: Optional[Sequence[int]], n_jobs: int) -> SimReport:
    start = time.perf_counter()
    labels = _expand_labels(config.methods, k_values)
    cell_rows: dict[tuple[float, int], dict[str, SimRow]] = {}
    for alpha in config.alphas:
        for n in config.sample_sizes:
            cell_rows[(alpha, n)] = _run_cell(config, alpha, n, k_values, n_jobs)
    rows = [
        cell_rows[(alpha, n)][label]
        for label in labels
        for alpha in config.alphas
        for n in config.sample_sizes
    ]
    return SimReport(
        rows=rows,
        config=config,
        method_labels=labels,
        wall_time=time.perf_counter() - start,
    )


def run_simulation(config: SimConfig, n_jobs: int = 1) -> SimReport:
    """Run all cells of the configuration; deterministic in (config, seed).

    n_jobs > 1 spreads replications of each cell over worker threads; the
    per-replication results are reassembled in index order, so output is
    identical to the serial run.
    """
    return _run(config, None, n_jobs)


def k_sweep(config: SimConfig, k_values: Sequence[int], n_jobs: int = 1) -> SimReport:
    """Repeat a single (alpha, n) cell across several grid resolutions K.

    Every K is fitted to the same samples (replication r draws once, all
    resolutions see it), isolating the pure effect of grid refinement.
    Rows are labeled "infinite-ls[K=...]".
    """
    if len(config.alphas) != 1 or len(config.sample_sizes) != 1:
        raise ConfigError("a K sweep needs exactly one alpha and one sample size")
    if "infinite-ls" not in config.methods:
        raise ConfigError("a K sweep needs 'infinite-ls' among the methods")
    ks = [int(k) for k in k_values]
    if len(ks) == 0:
        raise ConfigError("ks must be non-empty")
    if len(set(ks)) != len(ks):
        raise ConfigError("ks must not repeat")
    for k in ks:
        if k < 2:
            raise ConfigError(f"K values must be >= 2, got {k}")
    return _run(config, ks, n_jobs)


# --------------------------------------------------------------------------
# report emission and parsing

def _fmt_float(v: float) -> str:
    return format(v, ".17g")


def emit_report(report: SimReport, fmt: str = "csv") -> str:
    """Render a report as "csv" (full precision) or "markdown" (4 decimals,
    methods as column groups and alpha as rows, one table per n)."""
    if fmt == "csv":
        lines = [CSV_HEADER]
        for r in report.rows:
            lines.append(
                ",".join(
                    [
                        r.method,
                        _fmt_float(r.alpha_true),
                        str(r.n),
                        r.target,
                        _fmt_float(r.mean),
                        _fmt_float(r.bias),
                        _fmt_float(r.mse),
                        _fmt_float(r.clamp_rate),
                        str(r.failures),
                    ]
                )
            )
        return "\n".join(lines) + "\n"
    if fmt == "markdown":
        return _emit_markdown(report)
    raise ValueError(f"fmt must be 'csv' or 'markdown', got {fmt!r}")


def _emit_markdown(report: SimReport) -> str:
    labels = report.method_labels
    by_cell: dict[tuple[int, float], dict[str, SimRow]] = {}
    for r in report.rows:
        by_cell.setdefault((r.n, r.alpha_true), {})[r.method] = r
    ns = sorted({n for n, _ in by_cell})
    alphas = sorted({a for _, a in by_cell})

    def cell_stats(n: int, a: float, label: str) -> tuple[str, str, str]:
        row = by_cell.get((n, a), {}).get(label)
        if row is None or row.failures == report.config.replications:
            return ("-", "-", "-")
        return (f"{row.mean:.4f}", f"{row.bias:.4f}", f"{row.mse:.4f}")

    out = [f"# simulation report: target = {report.config.target}", ""]
    out.append(
        f"replications = {report.config.replications}, seed = {report.config.base_seed}, "
        f"wall time = {report.wall_time:.2f} s"
    )
    for n in ns:
        out.append("")
        out.append(f"## n = {n}")
        out.append("")
        head = ["alpha"]
        for label in labels:
            head += [f"{label} mean", f"{label} bias", f"{label} mse"]
        out.append("| " + " | ".join(head) + " |")
        out.append("|" + "---|" * len(head))
        for a in alphas:
            cells = [f"{a:g}"]
            for label in labels:
                cells.extend(cell_stats(n, a, label))
            out.append("| " + " | ".join(cells) + " |")
    return "\n".join(out) + "\n"


def parse_csv(text: str) -> list[SimRow]:
    """Inverse of emit_report(..., "csv"), faithful for all numeric fields."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"bad csv header, expected {CSV_HEADER!r}")
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 9:
            raise ValueError(f"bad csv row: {ln!r}")
        rows.append(
            SimRow(
                method=parts[0],
                alpha_true=float(parts[1]),
                n=int(parts[2]),
                target=parts[3],
                mean=float(parts[4]),
                bias=float(parts[5]),
                mse=float(parts[6]),
                clamp_rate=float(parts[7]),
                failures=int(parts[8]),
            )
        )
    return rows


# --------------------------------------------------------------------------
# recipe files

CONFIG_KEYS = (
    "alphas",
    "ns",
    "reps",
    "methods",
    "x0",
    "d",
    "K",
    "seed",
    "target",
    "sigma",
    "kout_points",
    "ks",
    "out",
)


def load_config_file(path: str) -> dict[str, str]:
    """Read a `key = value` recipe file; '#' comments and blank lines are
    ignored.  Unknown keys are rejected with the list of valid ones."""
    raw: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            if "=" not in stripped:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {stripped!r}")
            key, value = (part.strip() for part in stripped.split("=", 1))
            if key not in CONFIG_KEYS:
                raise ConfigError(
                    f"{path}:{lineno}: unknown key {key!r}; valid keys: {', '.join(CONFIG_KEYS)}"
                )
            if key in raw:
                raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
            raw[key] = value
    return raw


def _parse_float_list(value: str, key: str) -> tuple[float, ...]:
    try:
        return tuple(float(p) for p in value.split(",") if p.strip())
    except ValueError as exc:
        raise ConfigError(f"bad value for {key!r}: {value!r}") from exc


def _parse_int_list(value: str, key: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in value.split(",") if p.strip())
    except ValueError as exc:
        raise ConfigError(f"bad value for {key!r}: {value!r}") from exc


def _parse_kout_points(value: str) -> tuple[Optional[dict], Optional[int]]:
    """Either a bare integer (the default point count) or a comma list of
    alpha:n:points triplets (the per-cell map)."""
    if ":" not in value:
        try:
            return None, int(value)
        except ValueError as exc:
            raise ConfigError(f"bad value for 'kout_points': {value!r}") from exc
    table: dict[tuple[float, int], int] = {}
    for item in value.split(","):
        item = item.strip()
        if not item:
            continue
        parts = item.split(":")
        if len(parts) != 3:
            raise ConfigError(f"bad kout_points entry {item!r}, expected alpha:n:points")
        try:
            table[(float(parts[0]), int(parts[1]))] = int(parts[2])
        except ValueError as exc:
            raise ConfigError(f"bad kout_points entry {item!r}") from exc
    return table, None


def build_config(raw: Mapping[str, str]) -> tuple[SimConfig, Optional[tuple[int, ...]], Optional[str]]:
    """Turn raw string settings into (SimConfig, k_values, out_path).

    k_values is non-None when the 'ks' key is present, which requests a K
    sweep instead of a plain run.
    """
    for key in raw:
        if key not in CONFIG_KEYS:
            raise ConfigError(f"unknown key {key!r}; valid keys: {', '.join(CONFIG_KEYS)}")
    if "alphas" not in raw:
        raise ConfigError("missing required key 'alphas'")
    if "ns" not in raw:
        raise ConfigError("missing required key 'ns'")

    kwargs: dict = {
        "alphas": _parse_float_list(raw["alphas"], "alphas"),
        "sample_sizes": _parse_int_list(raw["ns"], "ns"),
    }
    try:
        if "reps" in raw:
            kwargs["replications"] = int(raw["reps"])
        if "methods" in raw:
            kwargs["methods"] = tuple(m.strip() for m in raw["methods"].split(",") if m.strip())
        if "x0" in raw:
            kwargs["x0"] = float(raw["x0"])
        if "d" in raw:
            kwargs["d"] = float(raw["d"])
        if "K" in raw:
            kwargs["k"] = int(raw["K"])
        if "seed" in raw:
            kwargs["base_seed"] = int(raw["seed"])
        if "target" in raw:
            kwargs["target"] = raw["target"].strip()
        if "sigma" in raw:
            kwargs["sigma"] = float(raw["sigma"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if "kout_points" in raw:
        table, default_pts = _parse_kout_points(raw["kout_points"])
        if table is not None:
            kwargs["koutrouvelis_points"] = table
        if default_pts is not None:
            kwargs["koutrouvelis_default_points"] = default_pts

    k_values = _parse_int_list(raw["ks"], "ks") if "ks" in raw else None
    out_path = raw.get("out")
    return SimConfig(**kwargs), k_values, out_path
