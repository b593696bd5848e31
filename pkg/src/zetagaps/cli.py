"""Command-line entry point.

Every command produces a list of flat records written as CSV (header row,
LF endings) or JSON. Column suffixes name the units: ``_norm`` for mean
spacings, ``_abs`` for absolute heights and distances. With ``--out`` a
manifest ``<out>.manifest.json`` is written next to the output.

Exit codes: 0 success, 2 validation error, 3 coverage error, 4 numeric error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import analytic, gaps, gue, windows, xi
from .errors import ArgumentError, ZetaGapsError
from .zeros import fetch_remote, load_table

TABLE_ROWS = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 20, 100, 1000)


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


# -- data -------------------------------------------------------------------


def _load(args):
    if args.data:
        fmt = None if args.data_format == "auto" else args.data_format
        return load_table(args.data, fmt)
    url = args.data_url or os.environ.get("ZETAGAPS_DATA_URL")
    if not url:
        raise ArgumentError("no --data given and no data URL configured (ZETAGAPS_DATA_URL)")
    return fetch_remote(url, args.cache_dir, fmt="offset" if args.data_format == "offset" else "plain")


def _checksums(args) -> dict[str, str]:
    if not getattr(args, "data", None):
        return {}
    h = hashlib.sha256()
    with open(args.data, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return {str(args.data): h.hexdigest()}


# -- commands ---------------------------------------------------------------


def cmd_cr_table(args):
    if not args.tol > 0:
        raise ArgumentError(f"--tol must be positive, got {args.tol}")
    if args.rmax < 1:
        raise ArgumentError("--rmax must be at least 1")
    rs = sorted({r for r in TABLE_ROWS + tuple(args.extra) if 1 <= r <= args.rmax})
    rows = []
    for r in rs:
        c = analytic.solve_cr(r, args.tol)
        rows.append({"r": r, "c_r_norm": c, "f_c_r": analytic.f(c).value})
    return rows


def cmd_runs(args):
    table = _load(args)
    rows = []
    for c in args.c:
        rep = gaps.count_runs(table, args.r, c, args.T, args.convention)
        row = {
            "r": rep.r,
            "c_norm": rep.c,
            "T_abs": rep.T,
            "threshold_abs": gaps.moderate_threshold(rep.T, rep.c),
            "n_total": rep.n_total,
            "n_runs": rep.n_runs,
            "proportion": rep.proportion,
            "pcc_bound": analytic.pcc_lower_bound(analytic.BoundParams(rep.r, rep.c)),
            "partition_residual": rep.partition_residual,
        }
        row.update({f"S_{j + 1}": s for j, s in enumerate(rep.s_sizes)})
        rows.append(row)
    return rows


def cmd_pc(args):
    table = _load(args)
    return [
        {
            "c_norm": c,
            "T_abs": args.T,
            "pair_correlation": gaps.empirical_pair_correlation(table, c, args.T),
            "f_c": analytic.f(c).value,
        }
        for c in args.c
    ]


def cmd_ah(args):
    table = _load(args)
    hist = gaps.ah_binning(table, args.T)
    return [
        {"k": k, "half_integer_norm": k / 2, "count": hist.bin_counts[k], "p": hist.p_values[k]}
        for k in hist.bin_counts
    ]


def cmd_windows(args):
    table = _load(args)
    cfg = windows.WindowConfig(args.T, args.m, args.r)
    step = args.grid_step if args.grid_step else cfg.h / 16
    sites = 0
    good = 0
    moderate_ok = 0
    pigeonhole_ok = 0
    for rep in windows.scan_sites(table, cfg, step, args.convention):
        sites += 1
        if rep.all_within_bounds:
            good += 1
            moderate_ok += all(rep.has_moderate_gap)
            pigeonhole_ok += all(g >= cfg.h / (c + 1) for g, c in zip(rep.max_gaps, rep.counts))
    var = windows.variance_integral(table, cfg.T, cfg.h, cfg.m)
    return [{
        "T_abs": cfg.T,
        "m": cfg.m,
        "r": cfg.r,
        "h_abs": cfg.h,
        "grid_step_abs": step,
        "sites": sites,
        "good_sites": good,
        "good_fraction": good / sites if sites else 0.0,
        "good_measure_exact": windows.good_set_measure_exact(table, cfg),
        "good_sites_all_moderate": moderate_ok,
        "good_sites_pigeonhole": pigeonhole_ok,
        "variance_integral": var,
        "variance_ratio": var / (cfg.T * math.log(2 * cfg.m)),
    }]


def _gue_cfg(args) -> gue.GueSampleConfig:
    return gue.GueSampleConfig(args.dim, args.matrices, args.seed, args.bulk_fraction, args.threads)


def cmd_gue_spacing(args):
    cfg = _gue_cfg(args)
    spacings = np.sort(gue.gue_spacings(cfg))
    model = gue.nn_cdf(args.c)
    ks = gue.ks_distance(spacings, gue.nn_cdf)
    return [
        {
            "c_norm": c,
            "E0_fredholm": gue.fredholm_det(c),
            "nn_cdf_fredholm": float(p),
            "nn_cdf_mc": float(np.searchsorted(spacings, c, side="right")) / spacings.size,
            "ks_distance": ks,
            "n_spacings": int(spacings.size),
        }
        for c, p in zip(args.c, np.atleast_1d(model))
    ]


def cmd_gue_levels(args):
    rows = []
    for s in args.s:
        lp = gue.level_probabilities(s, args.kmax)
        rows.extend({"s_norm": s, "k": k, "E_k": float(p)} for k, p in enumerate(lp.probs))
    return rows


def cmd_gue_joint(args):
    est = gue.mc_joint_run_probability(_gue_cfg(args), args.c)
    return [{
        "thresholds_norm": ";".join(repr(c) for c in args.c),
        "probability": est.value,
        "stderr": est.stderr,
        "n_samples": est.n_samples,
    }]


def cmd_xistar(args):
    table = _load(args)
    ns = list(range(args.n, args.n + args.count))
    rows = []
    for n in ns:
        cfg = xi.ZeroSumConfig(args.delta) if args.delta else None
        cp = xi.find_gamma_star(table, n, cfg, args.tol)
        tj = xi.construct_tj(table, n, args.C)
        rows.append({
            "n": n,
            "gamma_n_abs": cp.bracket[0],
            "gamma_n1_abs": cp.bracket[1],
            "gamma_star_abs": cp.gamma_star,
            "residual": cp.residual,
            "left_distance_abs": cp.left_distance,
            "right_distance_abs": cp.right_distance,
            "T_j_abs": tj.T_j,
            "T_j_below_next": tj.below_next,
        })
    return rows


def cmd_fetch(args):
    table = _load(args)
    return [{
        "source": table.source_id,
        "count": len(table),
        "height_min_abs": table.height_min,
        "height_max_abs": table.height_max,
    }]


# -- output -----------------------------------------------------------------


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2, sort_keys=False) + "\n"
    header: list[str] = []
    for row in rows:
        header.extend(k for k in row if k not in header)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(row[k]) if k in row else "" for k in header])
    return buf.getvalue()


def _manifest(args, out: Path, elapsed: float) -> str:
    params = {
        k: v for k, v in sorted(vars(args).items())
        if k not in ("func", "out") and not callable(v)
    }
    manifest = {
        "command": args.command,
        "parameters": params,
        "input_checksums": _checksums(args),
        "output_paths": [str(out)],
        "wall_time": elapsed,
        "seed": getattr(args, "seed", None),
    }
    return json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n"


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", type=Path, help="output file (default: stdout)")
    common.add_argument("--threads", type=int, default=1,
                        help="worker threads; affects speed only, never values")
    common.add_argument("--tol", type=float, default=1e-12)

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("--data", type=Path, help="ordinate table (.zgc cache or text)")
    data.add_argument("--data-format", choices=("auto", "plain", "offset", "cache"), default="auto")
    data.add_argument("--data-url", help="remote table; default $ZETAGAPS_DATA_URL")
    data.add_argument("--cache-dir", default=None, help="default $ZETAGAPS_CACHE_DIR")

    mc = argparse.ArgumentParser(add_help=False)
    mc.add_argument("--dim", type=int, default=200)
    mc.add_argument("--matrices", type=int, default=1000)
    mc.add_argument("--seed", type=_u64, default=0)
    mc.add_argument("--bulk-fraction", type=float, default=0.8)

    parser = argparse.ArgumentParser(prog="zetagaps", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cr-table", parents=[common], help="thresholds c_r with r f(c_r) = 1")
    p.add_argument("--rmax", type=int, default=1000)
    p.add_argument("--extra", type=_int_list, default=[], help="additional r values")
    p.set_defaults(func=cmd_cr_table)

    p = sub.add_parser("runs", parents=[common, data], help="moderate-gap run counts")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--c", type=_float_list, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--convention", choices=("minimal", "literal"), default="minimal")
    p.set_defaults(func=cmd_runs)

    p = sub.add_parser("pc", parents=[common, data], help="empirical pair correlation")
    p.add_argument("--c", type=_float_list, required=True)
    p.add_argument("--T", type=float, required=True)
    p.set_defaults(func=cmd_pc)

    p = sub.add_parser("ah", parents=[common, data], help="half-integer binning")
    p.add_argument("--T", type=float, required=True)
    p.set_defaults(func=cmd_ah)

    p = sub.add_parser("windows", parents=[common, data], help="window counts and gaps")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--grid-step", type=float, default=None)
    p.add_argument("--convention", choices=("inclusive", "interior"), default="inclusive")
    p.set_defaults(func=cmd_windows)

    p = sub.add_parser("gue", parents=[common, mc], help="spacing CDF: Fredholm vs Monte Carlo")
    p.add_argument("--c", type=_float_list, default=[0.5, 1.0, 1.5])
    p.set_defaults(func=cmd_gue_spacing)

    p = sub.add_parser("gue-levels", parents=[common], help="gap probabilities E(k; s)")
    p.add_argument("--s", type=_float_list, required=True)
    p.add_argument("--kmax", type=int, default=10)
    p.set_defaults(func=cmd_gue_levels)

    p = sub.add_parser("gue-joint", parents=[common, mc], help="Monte-Carlo joint run probability")
    p.add_argument("--c", type=_float_list, required=True)
    p.set_defaults(func=cmd_gue_joint)

    p = sub.add_parser("xistar", parents=[common, data], help="critical points between zeros")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--C", type=float, default=3.0)
    p.add_argument("--delta", type=float, default=None)
    p.set_defaults(func=cmd_xistar)

    p = sub.add_parser("fetch", parents=[common, data], help="download and cache a table")
    p.set_defaults(func=cmd_fetch)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        rows = args.func(args)
        text = render(rows, args.format)
    except ZetaGapsError as exc:
        print(f"zetagaps {args.command}: {exc}", file=sys.stderr)
        return exc.exit_code
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        manifest = args.out.with_name(args.out.name + ".manifest.json")
        with open(manifest, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(_manifest(args, args.out, time.perf_counter() - start))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
