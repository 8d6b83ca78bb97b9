"""Command-line front end: ``fbm-minimax {solve,table,curve,profile,kernel,check}``."""

import argparse
import csv
import datetime as dt
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .discrete import build_model, h_profile
from .errors import FbmError, NonConvergenceError
from .kernel import KernelParams, kernel_row
from .solver import solve
from .structure import analyze

log = logging.getLogger("fbm_minimax")

COMMANDS = ("solve", "table", "curve", "profile", "kernel", "check")
TABLE_H = (0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95)
CURVE_H = tuple(round(0.51 + 0.01 * k, 2) for k in range(49))


class ConfigError(FbmError, ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    H: float = None
    N: int = None
    gap_tol: float = 1e-6
    seed: int = 0
    paths: int = 100_000
    output_dir: str = "results"
    format: str = None

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.H is not None and not (0.5 < self.H < 1.0):
            raise ConfigError(f"--H must lie in the open interval (0.5, 1), got {self.H}")
        if self.N is not None and not 1 <= self.N <= 5000:
            raise ConfigError(f"--N must lie in [1, 5000], got {self.N}")
        if not self.gap_tol > 0:
            raise ConfigError(f"--gap-tol must be > 0, got {self.gap_tol}")
        if self.paths < 1:
            raise ConfigError(f"--paths must be >= 1, got {self.paths}")
        allowed = {"solve": ("json",), "table": ("csv", "json"), "curve": ("csv", "svg"),
                   "profile": ("csv", "svg"), "kernel": ("csv",), "check": ("csv", "json")}
        if self.format is not None and self.format not in allowed[self.command]:
            raise ConfigError(f"--format for {self.command} must be one of {allowed[self.command]}")


def worker_count():
    raw = os.environ.get("FBM_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"FBM_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ConfigError("FBM_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)


def _solve_one(args):
    H, N, gap_tol = args
    r = solve(build_model(H, N), gap_tol=gap_tol)
    return H, r


def _sweep(hs, N, gap_tol):
    jobs = [(H, N, gap_tol) for H in hs]
    workers = min(worker_count(), len(jobs))
    if workers <= 1:
        return [_solve_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_solve_one, jobs))


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    log.info("wrote %s", path)


def _meta():
    return {
        "timestamp": dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"),
        "version": __version__,
    }


def _sweep_rows(results):
    return [[H, r.primal, r.dual, r.gap, r.iterations] for H, r in results]


def cmd_table(cfg, out):
    cfg.N = cfg.N or 200
    results = _sweep(TABLE_H, cfg.N, cfg.gap_tol)
    rows = _sweep_rows(results)
    if cfg.format == "json":
        doc = {"config": asdict(cfg), "result": [dict(zip(("H", "minF", "dual", "gap", "iters"), r)) for r in rows],
               "structure": None, "meta": _meta()}
        (out / "table.json").write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    else:
        _write_csv(out / "table.csv", ["H", "minF", "dual", "gap", "iters"], rows)
    for H, F, *_ in rows:
        print(f"H={H:.2f}  minF={F:.4f}")
    return 0


def cmd_curve(cfg, out):
    from .plotting import plot_min_curve

    results = _sweep(CURVE_H, cfg.N or 200, cfg.gap_tol)
    rows = _sweep_rows(results)
    if cfg.format in (None, "csv"):
        _write_csv(out / "curve.csv", ["H", "minF", "dual", "gap", "iters"], rows)
    if cfg.format in (None, "svg"):
        plot_min_curve([r[0] for r in rows], [r[1] for r in rows], out / "curve.svg")
    return 0


def cmd_profile(cfg, out):
    from .plotting import plot_profile

    H, N = cfg.H or 0.75, cfg.N or 500
    m = build_model(H, N)
    r = solve(m, gap_tol=cfg.gap_tol)
    h = h_profile(m, r.a)
    if cfg.format in (None, "csv"):
        rows = [[s + 1, r.a[s], m.K[-1, s], r.lam[s], h[s]] for s in range(N)]
        _write_csv(out / "profile.csv", ["s", "a_s", "k_Ns", "lambda_s", "h_s"], rows)
    if cfg.format in (None, "svg"):
        plot_profile(r.a, h, H, out / "profile.svg")
    return 0


def cmd_solve(cfg, out):
    cfg.H, cfg.N = cfg.H or 0.75, cfg.N or 200
    H, N = cfg.H, cfg.N
    m = build_model(H, N)
    r = solve(m, gap_tol=cfg.gap_tol)
    rep = analyze(m, r)
    result = r.to_dict()
    result["history"] = [list(x) for x in r.history]
    doc = {"config": asdict(cfg), "result": result, "structure": rep.to_dict(), "meta": _meta()}
    path = out / "solve.json"
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    print(f"H={H} N={N} minF={r.primal:.6f} gap={r.gap:.2e} iters={r.iterations}")
    return 0


def cmd_kernel(cfg, out):
    H, n = cfg.H or 0.75, cfg.N or 20
    p = KernelParams(H)
    rows = []
    for i in range(1, n + 1):
        t = i / n
        s = np.arange(1, n + 1) / n
        vals = kernel_row(p, t, s)
        rows.extend([t, sj, v] for sj, v in zip(s, vals))
    _write_csv(out / "kernel.csv", ["t", "s", "K"], rows)
    return 0


def cmd_check(cfg, out):
    from .checks import run_checks

    outcomes = run_checks(paths=cfg.paths, seed=cfg.seed)
    for name, ok, detail in outcomes:
        print(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
    return 0 if all(ok for _, ok, _ in outcomes) else 1


HANDLERS = {"solve": cmd_solve, "table": cmd_table, "curve": cmd_curve,
            "profile": cmd_profile, "kernel": cmd_kernel, "check": cmd_check}


def run(cfg):
    """Execute one configured command; returns the process exit status."""
    try:
        cfg.validate()
        worker_count()
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        return HANDLERS[cfg.command](cfg, out)
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FbmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--H", type=float, help="Hurst index in (0.5, 1)")
    common.add_argument("--N", type=int, help="number of grid steps")
    common.add_argument("--gap-tol", type=float, default=1e-6, help="relative duality gap tolerance")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--paths", type=int, default=100_000, help="Monte Carlo paths for `check`")
    common.add_argument("--out", default="results", help="output directory")
    common.add_argument("--format", choices=("csv", "json", "svg"))
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="fbm-minimax", description="Minimax martingale approximation of fractional Brownian motion.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="one instance, JSON result and structure report")
    sub.add_parser("table", parents=[common], help="minimal values for H = 0.55..0.95")
    sub.add_parser("curve", parents=[common], help="min F for H = 0.51..0.99, CSV and SVG")
    sub.add_parser("profile", parents=[common], help="minimizer and distance profile, CSV and SVG")
    sub.add_parser("kernel", parents=[common], help="kernel values on a grid")
    sub.add_parser("check", parents=[common], help="run the invariant suite")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = RunConfig(command=args.command, H=args.H, N=args.N, gap_tol=args.gap_tol,
                    seed=args.seed, paths=args.paths, output_dir=args.out, format=args.format)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
