"""
Command-line harness.

Subcommands: ``fpt``, ``genz``, ``ghk``, ``bounds``, ``compare`` and ``table``.
Every run produces a list of :class:`ResultRow`; rows are printed as a text
table and optionally written to CSV with ``--output``.

Exit codes: 0 on success, 1 on numerical or I/O failure, 2 on invalid usage.
"""
from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .bounds import slepian_bound
from .covariance import CovarianceSequence, arfima_covariance, cholesky, read_covariance_file, toeplitz_matrix
from .errors import FormatError, NumericalError, ParameterError, ShapeError
from .fpt import Z99, Boundary, OrthantProblem, estimate_orthant_fpt
from .mvn_ref import genz_estimate, ghk_estimate
from .num_core import RandomStream
from .path_sim import METHODS, default_workers, sample_paths, write_paths_csv, write_paths_npy
from .reference_tables import TABLES

CSV_HEADER = ["method", "k", "estimate", "stderr", "ci_low", "ci_high", "n_samples", "seconds", "flags"]
COMMANDS = ("fpt", "genz", "ghk", "bounds", "compare", "table")

# stream ids keep the methods of one run on disjoint random streams
FPT_STREAM, GENZ_STREAM, GHK_STREAM = 0, 1, 2


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    method: str
    model: str = "arfima"
    d: float = 0.2
    cov_file: str | None = None
    boundary: str = "const:1"
    k_values: tuple[int, ...] = (20,)
    n_paths: int = 100_000
    n_draws: int | None = None
    seed: int = 0
    workers: int = field(default_factory=default_workers)
    tolerance: float = 1e-4
    max_evals: int | None = None
    sampler: str = "auto"
    quad_nodes: int = 64
    which: int | None = None
    per_k: bool = True
    output: str | None = None
    dump_paths: str | None = None

    def validate(self) -> None:
        if self.method not in COMMANDS:
            raise UsageError(f"unknown method {self.method!r}")
        if self.model == "arfima":
            if not abs(self.d) < 0.5:
                raise UsageError(f"--d must satisfy |d| < 0.5, got {self.d}")
        elif self.model == "file":
            if not self.cov_file:
                raise UsageError("--model file requires --cov-file")
        else:
            raise UsageError(f"unknown model {self.model!r}")
        if not self.k_values or min(self.k_values) < 1:
            raise UsageError("k must be >= 1")
        if self.n_paths < 1 or (self.n_draws is not None and self.n_draws < 1):
            raise UsageError("sample counts must be >= 1")
        if self.workers < 1:
            raise UsageError("--workers must be >= 1")
        if not self.tolerance > 0:
            raise UsageError("--tolerance must be positive")
        if self.max_evals is not None and self.max_evals < 1:
            raise UsageError("--max-evals must be >= 1")
        if self.sampler not in METHODS:
            raise UsageError(f"unknown sampler {self.sampler!r}")
        if self.quad_nodes < 16:
            raise UsageError("--quad-nodes must be >= 16")
        if self.method == "table" and self.which not in TABLES:
            raise UsageError("table requires --which 1 or --which 2")
        try:
            Boundary.parse(self.boundary)
        except (FormatError, ParameterError, OSError) as exc:
            raise UsageError(str(exc)) from None


@dataclass
class ResultRow:
    method: str
    k: int
    estimate: float
    stderr: float
    ci_low: float
    ci_high: float
    n_samples: int
    seconds: float
    flags: tuple[str, ...] = ()


# ----------------------------------------------------------- computation

def _covariance(config: RunConfig, k_max: int) -> CovarianceSequence:
    if config.model == "arfima":
        return arfima_covariance(config.d, max(k_max, 1))
    return read_covariance_file(config.cov_file)


def fpt_rows(cov, boundary, k_values, n_paths, stream, sampler, workers) -> list[ResultRow]:
    k_max = max(k_values)
    curve = estimate_orthant_fpt(OrthantProblem(cov, boundary, k_max), n_paths, stream,
                                 sampler, workers)
    lo, hi = curve.wilson_interval()
    flags = ("fallback-used",) if curve.method_tag == "durbin_levinson" and sampler == "auto" else ()
    return [
        ResultRow("fpt", k, float(curve.p_hat[k]), float(curve.stderr[k]), float(lo[k]),
                  float(hi[k]), n_paths, curve.elapsed_seconds, flags)
        for k in k_values
    ]


def genz_row(cov, boundary, k, tolerance, max_evals, stream) -> ResultRow:
    start = time.perf_counter()
    chol = cholesky(toeplitz_matrix(cov, k))
    res = genz_estimate(boundary.values(k), chol, tolerance, max_evals, stream)
    seconds = time.perf_counter() - start
    flags = ("eval-cap-hit",) if res.hit_eval_cap else ()
    return ResultRow("genz", k, res.estimate, res.error_99 / Z99,
                     max(res.estimate - res.error_99, 0.0), min(res.estimate + res.error_99, 1.0),
                     res.n_evals, seconds, flags)


def ghk_row(cov, boundary, k, n_draws, stream) -> ResultRow:
    start = time.perf_counter()
    chol = cholesky(toeplitz_matrix(cov, k))
    res = ghk_estimate(boundary.values(k), chol, n_draws, stream)
    seconds = time.perf_counter() - start
    half = Z99 * res.stderr
    return ResultRow("ghk", k, res.estimate, res.stderr, max(res.estimate - half, 0.0),
                     min(res.estimate + half, 1.0), n_draws, seconds)


def bound_row(cov, boundary, k, quad_nodes) -> ResultRow:
    start = time.perf_counter()
    b = slepian_bound(cov, boundary, k, quad_nodes)
    flags = (b.case_tag,) if b.stable else (b.case_tag, "unstable")
    return ResultRow("bounds", k, b.value, 0.0, b.value, b.value, quad_nodes,
                     time.perf_counter() - start, flags)


def consistency_flags(rows: list[ResultRow], n_sigma: float = 3.0) -> list[ResultRow]:
    """Tag each estimator row with whether it agrees with the others at its k."""
    by_k: dict[int, list[ResultRow]] = {}
    for r in rows:
        if r.method != "bounds":
            by_k.setdefault(r.k, []).append(r)
    for group in by_k.values():
        for r in group:
            ok = all(
                abs(r.estimate - o.estimate) <= n_sigma * np.hypot(r.stderr, o.stderr)
                for o in group if o is not r
            )
            r.flags = r.flags + (("consistent",) if ok else ("inconsistent",))
    return rows


def run(config: RunConfig) -> tuple[list[ResultRow], int]:
    config.validate()
    boundary = Boundary.parse(config.boundary)
    ks = config.k_values
    n_draws = config.n_draws or config.n_paths
    rows: list[ResultRow] = []
    try:
        if config.method == "table":
            return _run_table(config), 0
        cov = _covariance(config, max(ks))
        if config.method in ("fpt", "compare"):
            stream = RandomStream(config.seed, FPT_STREAM)
            rows += fpt_rows(cov, boundary, ks, config.n_paths, stream, config.sampler,
                             config.workers)
            if config.dump_paths:
                batch = sample_paths(cov, max(ks), config.n_paths,
                                     RandomStream(config.seed, FPT_STREAM), config.sampler,
                                     config.workers)
                writer = write_paths_npy if config.dump_paths.endswith(".npy") else write_paths_csv
                writer(batch, config.dump_paths)
        for k in ks:
            if config.method in ("genz", "compare"):
                rows.append(genz_row(cov, boundary, k, config.tolerance, config.max_evals,
                                     RandomStream(config.seed, GENZ_STREAM).child(k)))
            if config.method in ("ghk", "compare"):
                rows.append(ghk_row(cov, boundary, k, n_draws,
                                    RandomStream(config.seed, GHK_STREAM).child(k)))
            if config.method in ("bounds", "compare"):
                rows.append(bound_row(cov, boundary, k, config.quad_nodes))
    except (NumericalError, ShapeError, FormatError, ParameterError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return rows, 1
    if config.method == "compare":
        consistency_flags(rows)
    return rows, 0


def _run_table(config: RunConfig) -> list[ResultRow]:
    """Genz, GHK and FPT columns of a published table, one FPT run per k by default."""
    table = TABLES[config.which]
    ks = config.k_values
    cov = arfima_covariance(table.d, max(ks))
    rows = []
    if not config.per_k:
        rows += fpt_rows(cov, table.boundary, ks, config.n_paths,
                         RandomStream(config.seed, FPT_STREAM), config.sampler, config.workers)
    for k in ks:
        n_s = table.n_paths(k) if config.per_k else config.n_paths
        if config.per_k:
            rows += fpt_rows(cov, table.boundary, (k,), n_s,
                             RandomStream(config.seed, FPT_STREAM).child(k), config.sampler,
                             config.workers)
        rows.append(genz_row(cov, table.boundary, k, config.tolerance, config.max_evals,
                             RandomStream(config.seed, GENZ_STREAM).child(k)))
        rows.append(ghk_row(cov, table.boundary, k, n_s,
                            RandomStream(config.seed, GHK_STREAM).child(k)))
    return rows


# ---------------------------------------------------------------- output

def _fmt(x: float) -> str:
    return f"{x:.10g}"


def emit_csv(rows: list[ResultRow], path) -> None:
    if not rows:
        raise ParameterError("no rows to write")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow([r.method, r.k, _fmt(r.estimate), _fmt(r.stderr), _fmt(r.ci_low),
                        _fmt(r.ci_high), r.n_samples, _fmt(r.seconds), ";".join(r.flags)])


def read_csv(path) -> list[ResultRow]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER:
            raise FormatError(f"unexpected CSV header {reader.fieldnames}")
        return [
            ResultRow(d["method"], int(d["k"]), float(d["estimate"]), float(d["stderr"]),
                      float(d["ci_low"]), float(d["ci_high"]), int(d["n_samples"]),
                      float(d["seconds"]), tuple(f for f in d["flags"].split(";") if f))
            for d in reader
        ]


def format_rows(rows: list[ResultRow], reference=None) -> str:
    head = f"{'method':<7} {'k':>4} {'estimate':>10} {'stderr':>10} {'99% interval':>23} {'n':>8} {'seconds':>8}"
    if reference is not None:
        head += f" {'ref':>7}"
    lines = [head + "  flags"]
    for r in rows:
        line = (f"{r.method:<7} {r.k:>4} {r.estimate:>10.6f} {r.stderr:>10.2e} "
                f"[{r.ci_low:.6f}, {r.ci_high:.6f}] {r.n_samples:>8} {r.seconds:>8.3f}")
        if reference is not None:
            line += f" {reference(r):>7.4f}"
        lines.append(line + "  " + ",".join(r.flags))
    return "\n".join(lines)


# ------------------------------------------------------------------ argv

def _parse_k(args) -> tuple[int, ...]:
    if args.k_range:
        try:
            lo, hi = (int(v) for v in args.k_range.split(":"))
        except ValueError:
            raise UsageError(f"--k-range expects lo:hi, got {args.k_range!r}") from None
        if hi < lo:
            raise UsageError("--k-range upper end is below lower end")
        return tuple(range(lo, hi + 1))
    if args.k is not None:
        return (args.k,)
    if args.command == "table":
        return tuple(range(20, 41))
    raise UsageError("one of --k or --k-range is required")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orthant-fpt",
        description="Multivariate normal orthant probabilities by first-passage-time Monte Carlo.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--model", choices=("arfima", "file"), default="arfima")
        p.add_argument("--d", type=float, default=0.2, help="ARFIMA memory parameter")
        p.add_argument("--cov-file", help="autocovariances, one per line starting at lag 0")
        p.add_argument("--boundary", default="const:1", help="const:<c> | lin:<a>,<b> | file:<path>")
        p.add_argument("--k", type=int)
        p.add_argument("--k-range", help="inclusive range lo:hi")
        p.add_argument("--paths", type=int, default=None, help="simulated paths N_S")
        p.add_argument("--draws", type=int, default=None, help="GHK replications (default: --paths)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--tolerance", type=float, default=1e-4, help="Genz 99%% absolute error target")
        p.add_argument("--max-evals", type=int, default=None, help="Genz cap (default 1000 k)")
        p.add_argument("--sampler", choices=METHODS, default="auto")
        p.add_argument("--quad-nodes", type=int, default=64)
        p.add_argument("--output", "-o", help="write rows as CSV")
        if name == "fpt":
            p.add_argument("--dump-paths", help="write simulated paths (.csv or .npy)")
        if name == "table":
            p.add_argument("--which", type=int, choices=(1, 2), required=True)
    return parser


def config_from_args(args) -> RunConfig:
    ks = _parse_k(args)
    table = TABLES.get(getattr(args, "which", None))
    return RunConfig(
        method=args.command,
        model=args.model,
        d=table.d if table else args.d,
        cov_file=args.cov_file,
        boundary=table.boundary.describe() if table else args.boundary,
        k_values=ks,
        n_paths=args.paths if args.paths is not None else 100_000,
        n_draws=args.draws,
        seed=args.seed,
        workers=args.workers if args.workers is not None else default_workers(),
        tolerance=args.tolerance,
        max_evals=args.max_evals,
        sampler=args.sampler,
        quad_nodes=args.quad_nodes,
        which=getattr(args, "which", None),
        per_k=args.paths is None,
        output=args.output,
        dump_paths=getattr(args, "dump_paths", None),
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        config.validate()
    except UsageError as exc:
        parser.error(str(exc))
    rows, code = run(config)
    if rows:
        reference = None
        if config.method == "table":
            table = TABLES[config.which]
            reference = lambda r: table.genz(r.k)  # noqa: E731
        print(format_rows(rows, reference))
        if config.output:
            try:
                emit_csv(rows, config.output)
            except OSError as exc:
                print(f"error: cannot write {config.output}: {exc}", file=sys.stderr)
                return 1
    return code


if __name__ == "__main__":
    sys.exit(main())
