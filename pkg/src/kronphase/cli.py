"""Command-line interface.

Subcommands: sample, correlate, spacings, sweep, refcurve, verify.
Exit codes: 0 success, 1 validation error, 2 runtime or I/O error,
3 verification-suite failure.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .config import CURVES, MODES, build_config, parse_config_file
from .errors import CapacityError
from .output import write_csv
from .runner import (
    REFERENCE_KINDS,
    run_convergence_sweep,
    run_experiment,
    sample_rescaled_config,
)
from .sampler import RngStream, sample_cue_phases

WORKERS_ENV = "KRONPHASE_WORKERS"

EPILOG = """\
worker count precedence: --workers flag, then the config file, then the
%s environment variable, then 1.

exit codes: 0 success, 1 validation error, 2 runtime/I-O error,
3 verification failure.
""" % WORKERS_ENV


def _default_workers():
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return None
    try:
        v = int(raw)
    except ValueError:
        raise ValueError("%s must be an integer, got %r" % (WORKERS_ENV, raw))
    if v < 1:
        raise ValueError("%s must be >= 1" % WORKERS_ENV)
    return v


def _parse_dims_arg(text):
    try:
        return tuple(int(p) for p in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError("dims must be comma-separated integers")


def _parse_int_list(text):
    try:
        return [int(p) for p in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated integers")


def _add_experiment_args(p):
    p.add_argument("--config", metavar="FILE", help="flat key = value config file")
    p.add_argument("--mode", choices=MODES, help="process kind")
    p.add_argument("--dims", type=_parse_dims_arg, metavar="M[,N[,L]]", help="matrix sizes")
    p.add_argument("--samples", type=int, dest="n_samples", help="number of Monte Carlo samples")
    p.add_argument("--seed", type=int, help="base seed (64-bit)")
    p.add_argument("--delta-max", type=float, dest="delta_max", help="pair-correlation range, mean-spacing units")
    p.add_argument("--bins", type=int, dest="n_bins", help="histogram bin count (>= 4)")
    p.add_argument("--window", type=float, dest="window_half_width", help="half-width of the dump window (sample subcommand)")
    p.add_argument("--workers", type=int, help="worker thread count")
    p.add_argument("--k-analytic", type=int, dest="k_analytic", help="max analytic correlation order (<= 8); >= 3 adds a triple-correlation probe")
    p.add_argument("--curve", choices=CURVES, help="pair-correlation reference curve")
    p.add_argument("--out", default=".", metavar="DIR", help="output directory (default: current)")


def _build_config_from_args(args):
    file_values = parse_config_file(args.config) if args.config else {}
    overrides = {
        "mode": args.mode,
        "dims": args.dims,
        "n_samples": args.n_samples,
        "seed": args.seed,
        "delta_max": args.delta_max,
        "n_bins": args.n_bins,
        "window_half_width": args.window_half_width,
        "workers": args.workers,
        "k_analytic": args.k_analytic,
        "curve": args.curve,
    }
    if overrides["workers"] is None and "workers" not in file_values:
        overrides["workers"] = _default_workers()
    return build_config(file_values, overrides)


def _cmd_sample(args):
    cfg = _build_config_from_args(args)
    os.makedirs(args.out, exist_ok=True)
    rows = []
    if cfg.mode == "single":
        for s in range(cfg.n_samples):
            phases = sample_cue_phases(cfg.dims[0], RngStream(cfg.seed, s))
            rows.extend((s, i, float(p)) for i, p in enumerate(phases))
    else:
        from .processes import WindowSpec, window

        w = cfg.window_half_width
        for s in range(cfg.n_samples):
            rc = sample_rescaled_config(cfg, s)
            pts = rc.points if w is None else window(rc, WindowSpec(w))
            rows.extend((s, i, float(p)) for i, p in enumerate(pts))
    path = os.path.join(args.out, "phases.csv")
    name = "phase" if cfg.mode == "single" else "theta"
    write_csv(
        path,
        {"seed": cfg.seed, "dims": "x".join(str(d) for d in cfg.dims), "n_samples": cfg.n_samples},
        ("sample", "index", name),
        rows,
    )
    print("wrote %s" % path)
    return 0


def _cmd_correlate(args):
    cfg = _build_config_from_args(args)
    _, manifest = run_experiment(cfg, out_dir=args.out, emit=("pair", "counts"))
    s = manifest.summary
    print(
        "pair correlation vs %s: rms dev %.4g, max dev %.4g, bins over 4 sigma: %d"
        % (s["curve"], s["pair_rms_dev"], s["pair_max_abs_dev"], s["pair_bins_over_4sigma"])
    )
    for ell, var in s["count_variance"]:
        print("count variance at length %g: %.4g (poisson: %g)" % (ell, var, ell))
    if "triple_estimate" in s:
        print(
            "triple correlation at gaps (%g, %g): %.4g (target %.4g)"
            % (s["triple_gaps"][0], s["triple_gaps"][1], s["triple_estimate"], s["triple_target"])
        )
    print("outputs in %s: %s" % (args.out, ", ".join(manifest.outputs)))
    return 0


def _cmd_spacings(args):
    cfg = _build_config_from_args(args)
    _, manifest = run_experiment(cfg, out_dir=args.out, emit=("spacings",))
    s = manifest.summary
    if "ks_d" in s:
        print(
            "spacing KS vs exponential: D = %.4g, threshold %.4g (n = %d): %s"
            % (s["ks_d"], s["ks_threshold_05"], s["ks_n"], "pass" if s["ks_pass"] else "fail")
        )
    print("outputs in %s: %s" % (args.out, ", ".join(manifest.outputs)))
    return 0


def _cmd_sweep(args):
    cfg = _build_config_from_args(args)
    rows = run_convergence_sweep(cfg, args.n_values, out_dir=args.out)
    print("n,rms_dev,max_abs_dev")
    for r in rows:
        print("%d,%.6g,%.6g" % (r["n"], r["rms_dev"], r["max_abs_dev"]))
    return 0


def _cmd_refcurve(args):
    from .runner import emit_reference_curve

    if args.points < 1:
        raise ValueError("--points must be >= 1")
    grid = np.linspace(args.delta_max / args.points, args.delta_max, args.points)
    path = emit_reference_curve(args.kind, grid, args.out, m=args.m)
    print("wrote %s" % path)
    return 0


def _cmd_verify(args):
    from .acceptance import run_criteria

    results = run_criteria(args.criteria, workers=args.workers or _default_workers() or 1)
    failed = 0
    for r in results:
        print("%s  %-2s %s: %s" % ("PASS" if r.passed else "FAIL", r.cid, r.title, r.details))
        failed += 0 if r.passed else 1
    print("%d/%d criteria passed" % (len(results) - failed, len(results)))
    return 0 if failed == 0 else 3


def build_parser():
    parser = argparse.ArgumentParser(
        prog="kronphase",
        description="Eigenphase statistics of tensor products of Haar-random unitaries",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="dump raw phase configurations")
    _add_experiment_args(p)
    p.set_defaults(fn=_cmd_sample)

    p = sub.add_parser("correlate", help="pair correlation and count variance vs an analytic curve")
    _add_experiment_args(p)
    p.set_defaults(fn=_cmd_correlate)

    p = sub.add_parser("spacings", help="nearest-neighbor spacing histogram and KS test")
    _add_experiment_args(p)
    p.set_defaults(fn=_cmd_spacings)

    p = sub.add_parser("sweep", help="convergence sweep over the second factor size")
    _add_experiment_args(p)
    p.add_argument("--n-values", type=_parse_int_list, required=True, metavar="N1,N2,...", dest="n_values")
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("refcurve", help="write an analytic reference curve")
    p.add_argument("--kind", choices=REFERENCE_KINDS, required=True)
    p.add_argument("--m", type=int, help="superposition order for superposed_pair")
    p.add_argument("--delta-max", type=float, default=4.0, dest="delta_max")
    p.add_argument("--points", type=int, default=80)
    p.add_argument("--out", default="refcurve.csv", metavar="FILE")
    p.set_defaults(fn=_cmd_refcurve)

    p = sub.add_parser("verify", help="run the built-in verification suite")
    p.add_argument("--criteria", type=_parse_int_list, metavar="1,2,...", help="subset to run (default: all)")
    p.add_argument("--workers", type=int, help="worker thread count")
    p.set_defaults(fn=_cmd_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (CapacityError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except OSError as exc:
        print("i/o error: %s" % exc, file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print("unexpected error: %r" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
