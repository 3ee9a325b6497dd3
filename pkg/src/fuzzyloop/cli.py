"""Batch runner: table generation, verification suites, convergence sweeps.

Subcommands:

  tables   build the Poisson structure-constant table and per-level Toeplitz
           symbol caches, checksummed on disk
  verify   run the full verification battery; exit status is nonzero iff a
           non-warn check fails
  sweep    run the configured convergence sweeps, writing CSV records and a
           JSON report with fitted slopes
  report   re-render a verification report JSON as text

Configuration comes from an optional JSON file (--config) with flag
overrides; FUZZYLOOP_CACHE_DIR overrides the cache location.  Data files
are deterministic: floats are serialized with 17 significant digits and the
timing column is zeroed unless --timing is passed.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional

from . import acceptance, cocycles, harmonics, loopalg, quantize
from .config import ReportEntry, RunConfig
from .errors import FuzzyloopError
from .jsonio import (
    fmt_float,
    read_checked_json,
    write_checked_json,
    write_plain_json,
)

INTEGRALITY_NOTE = (
    "central extensions integrate to the group level exactly when the "
    "coefficient in front of the base cocycle is an integer; the sweep "
    "normalizations -6/k^3 and -6/(k(k+1)(k+2)) relate the integer lattices "
    "at finite level and in the limit"
)


def _load_config(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    overrides = {}
    if getattr(args, "out", None):
        overrides["out_dir"] = args.out
    if getattr(args, "kmax", None):
        overrides["k_list"] = [k for k in cfg.k_list if k <= args.kmax]
    if getattr(args, "lmax", None):
        overrides["lmax"] = args.lmax
    if getattr(args, "twist", None) is not None:
        overrides["twist"] = args.twist
    if getattr(args, "jobs", None):
        overrides["jobs"] = args.jobs
    if getattr(args, "timing", False):
        overrides["timing"] = True
    return cfg.with_overrides(**overrides)


def _ensure_out(cfg: RunConfig) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cfg.cache_dir().mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------

def cmd_tables(args) -> int:
    cfg = _load_config(args)
    _ensure_out(cfg)
    cache = cfg.cache_dir()

    table = harmonics.poisson_table(cfg.lmax)
    table.validate()
    print(f"poisson table lmax={cfg.lmax}: jacobi validation pass")
    write_checked_json(cache / f"poisson_table_l{cfg.lmax}.json", table.to_payload())
    print(f"wrote {cache / f'poisson_table_l{cfg.lmax}.json'}")

    sym_lmax = min(cfg.lmax, 4)
    for k in cfg.k_list:
        payload = quantize.symbol_cache_payload(k, sym_lmax)
        path = cache / f"toeplitz_symbols_k{k}_l{sym_lmax}.json"
        write_checked_json(path, payload)
        print(f"wrote {path}")
    return 0


def load_poisson_table(cfg: RunConfig) -> harmonics.PoissonTable:
    """Load the cached table if present (checksum enforced), else build it."""
    path = cfg.cache_dir() / f"poisson_table_l{cfg.lmax}.json"
    if path.exists():
        return harmonics.PoissonTable.from_payload(read_checked_json(path))
    return harmonics.poisson_table(cfg.lmax)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    cfg = _load_config(args)
    out = _ensure_out(cfg)
    entries = acceptance.run_acceptance(cfg)
    lines = [e.line() for e in entries]
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    (out / "verify_report.txt").write_text(text, encoding="utf-8")
    write_plain_json(
        out / "verify_report.json",
        {
            "entries": [e.to_dict() for e in entries],
            "metadata": {"integrality": INTEGRALITY_NOTE},
        },
    )
    n_fail = sum(1 for e in entries if e.status == "fail")
    n_warn = sum(1 for e in entries if e.status == "warn")
    print(f"verify: {len(entries)} checks, {n_fail} failures, {n_warn} warnings")
    return 1 if n_fail else 0


def cmd_report(args) -> int:
    path = Path(args.report)
    with open(path, "r", encoding="utf-8") as f:
        doc = json.load(f)
    entries = [ReportEntry(**e) for e in doc["entries"]]
    for e in entries:
        print(e.line())
    n_fail = sum(1 for e in entries if e.status == "fail")
    print(f"report: {len(entries)} checks, {n_fail} failures")
    return 1 if n_fail else 0


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def _run_one_sweep(payload):
    """Worker: one (sweep set, k) batch; separated for process pools."""
    sweep, k_list, lmax, exact_k_max, timing = payload
    F = loopalg.loop_from_literals(sweep["F"], lmax=lmax, twisted=sweep.get("twisted", False))
    G = loopalg.loop_from_literals(sweep["G"], lmax=lmax, twisted=sweep.get("twisted", False))
    recs = cocycles.limit_sweep(
        F, G, k_list, exact_k_max=exact_k_max, timing=timing
    )
    return sweep["name"], recs


def cmd_sweep(args) -> int:
    cfg = _load_config(args)
    out = _ensure_out(cfg)
    sweeps = [s for s in cfg.sweeps if cfg.twist or not s.get("twisted", False)]
    jobs = [
        (sweep, list(cfg.k_list), cfg.lmax, cfg.exact_k_max, cfg.timing)
        for sweep in sweeps
    ]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_run_one_sweep, jobs))
    else:
        results = [_run_one_sweep(j) for j in jobs]

    csv_path = out / "sweep.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["sweep"] + cocycles.ConvergenceRecord.csv_header())
        for name, recs in results:
            for rec in recs:
                for row in rec.csv_rows(fmt_float):
                    w.writerow([name] + row)
    print(f"wrote {csv_path}")

    slopes = {}
    for name, recs in results:
        slope = recs[0].fitted_rate if recs else None
        mono = all(
            recs[i].deviation >= recs[i + 1].deviation
            for i in range(len(recs) // 2, len(recs) - 1)
        )
        slopes[name] = {
            "fitted_rate": None if slope is None else float(slope),
            "limit": recs[0].limit if recs else None,
            "eventually_decreasing": mono,
            "status": "warn" if not mono else "pass",
        }
    write_plain_json(
        out / "sweep_slopes.json",
        {"sweeps": slopes, "metadata": {"integrality": INTEGRALITY_NOTE}},
    )
    print(f"wrote {out / 'sweep_slopes.json'}")
    for name, info in slopes.items():
        rate = info["fitted_rate"]
        rate_s = "n/a" if rate is None else f"{rate:.4f}"
        print(f"sweep {name}: fitted rate {rate_s} (limit {fmt_float(info['limit'])})")
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fuzzyloop",
        description="verification and sweep runner for sphere quantization cocycles",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON config file")
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--kmax", type=int, help="drop k_list entries above this")
        sp.add_argument("--lmax", type=int, help="harmonic truncation")
        twist = sp.add_mutually_exclusive_group()
        twist.add_argument("--twist", dest="twist", action="store_true", default=None)
        twist.add_argument("--no-twist", dest="twist", action="store_false", default=None)
        sp.add_argument("--jobs", type=int, help="parallel workers for sweeps")
        sp.add_argument("--timing", action="store_true",
                        help="record wall-clock seconds in sweep rows (breaks byte determinism)")

    sp = sub.add_parser("tables", help="build and cache structure-constant tables")
    common(sp)
    sp.set_defaults(func=cmd_tables)

    sp = sub.add_parser("verify", help="run the verification battery")
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sweep", help="run convergence sweeps")
    common(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("report", help="render a verify report JSON")
    sp.add_argument("report", help="path to verify_report.json")
    sp.set_defaults(func=cmd_report)

    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FuzzyloopError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
