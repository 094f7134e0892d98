"""Experiment orchestration: parallel sampling, estimation, persistence.

Reproducibility contract: sample index s always uses the random stream
(seed, stream_id = s), whichever worker executes it, and every
accumulator either stores exact integers or is assembled in sample-index
order.  Results (and the CSV bytes written from them) are therefore
identical for any worker count.
"""

from __future__ import annotations

import datetime as _dt
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import __version__
from .combinatorics import rho_superposed_pair, rho_superposed_sine
from .config import ExperimentConfig
from .estimators import (
    DEFAULT_TRIPLE_TOL,
    EstimateBundle,
    circular_gaps,
    estimate_pair_correlation,
    interval_counts,
    merge,
    spacing_histogram_from_gaps,
    triple_window_count,
    _variance_from_moments,
)
from .gof import compare_to_curve, ks_against_exponential
from .kernels import rho_sine, sine_q
from .output import write_csv, write_manifest
from .processes import rescale_center, tensor_phases, triple_tensor
from .sampler import RngStream, sample_cue_phases

STREAM_POLICY = "sample index s uses stream_id = s"

# Arc lengths for the count-variance observable; lengths beyond L/2 are
# dropped for small configurations.
COUNT_LENGTHS = (1.0, 2.0, 4.0)

# Gap configuration (0, r1, r2) probed when k_analytic >= 3.
TRIPLE_R1 = 1.0
TRIPLE_R2 = 2.0

DEFAULT_COUNT_OFFSETS = 32


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to reproduce and audit one run."""

    config: dict
    version: str
    started_utc: str
    finished_utc: str
    stream_policy: str
    worker_streams: tuple
    outputs: tuple
    summary: dict

    def to_dict(self):
        return {
            "config": self.config,
            "version": self.version,
            "started_utc": self.started_utc,
            "finished_utc": self.finished_utc,
            "stream_policy": self.stream_policy,
            "worker_streams": list(self.worker_streams),
            "outputs": list(self.outputs),
            "summary": self.summary,
        }


def _utc_now():
    return _dt.datetime.now(_dt.timezone.utc).replace(microsecond=0).isoformat()


def sample_rescaled_config(cfg, sample_index):
    """Draw sample s of the configured process on its rescaled circle."""
    gen = RngStream(cfg.seed, sample_index).generator()
    if cfg.mode == "single":
        phases = sample_cue_phases(cfg.dims[0], gen)
    elif cfg.mode == "pair":
        a = sample_cue_phases(cfg.dims[0], gen)
        b = sample_cue_phases(cfg.dims[1], gen)
        phases = tensor_phases(a, b)
    else:
        a = sample_cue_phases(cfg.dims[0], gen)
        b = sample_cue_phases(cfg.dims[1], gen)
        c = sample_cue_phases(cfg.dims[2], gen)
        phases = triple_tensor(a, b, c)
    return rescale_center(phases, cfg.factor_product)


def target_curve(cfg):
    """(name, callable) analytic pair-correlation target for a config."""
    kind = cfg.curve
    if kind == "auto":
        kind = {"single": "sine_pair", "pair": "superposed", "triple": "poisson"}[cfg.mode]
    if kind == "sine_pair":
        return "sine_pair", lambda d: 1.0 - sine_q(d) ** 2
    if kind == "superposed":
        m = cfg.dims[0]
        return "superposed_pair(m=%d)" % m, lambda d: rho_superposed_pair(m, d)
    return "poisson", lambda d: 1.0


def _worker_chunk(cfg, indices, lengths, n_offsets, want_triple):
    configs = [sample_rescaled_config(cfg, s) for s in indices]
    hist = estimate_pair_correlation(
        configs,
        cfg.delta_max,
        cfg.n_bins,
        sample_indices=indices,
        n_samples_total=cfg.n_samples,
    )
    gaps = {}
    counts = {}
    triples = {}
    npoints = 0
    for s, c in zip(indices, configs):
        npoints += len(c)
        gaps[s] = circular_gaps(c)
        if lengths:
            counts[s] = interval_counts(c, lengths, n_offsets=n_offsets)
        if want_triple:
            triples[s] = triple_window_count(c, TRIPLE_R1, TRIPLE_R2, DEFAULT_TRIPLE_TOL)
    return hist, gaps, counts, triples, npoints


def run_experiment(cfg, out_dir=None, emit=("pair", "spacings", "counts"), n_offsets=DEFAULT_COUNT_OFFSETS):
    """Run one Monte Carlo campaign; optionally persist results.

    Returns (EstimateBundle, RunManifest).  When out_dir is given, one
    CSV per requested observable plus manifest.json are written there.
    """
    if not isinstance(cfg, ExperimentConfig):
        raise ValueError("run_experiment needs an ExperimentConfig")
    started = _utc_now()
    L = float(cfg.factor_product)
    lengths = tuple(ell for ell in COUNT_LENGTHS if ell <= L / 2)
    want_triple = cfg.k_analytic >= 3 and L >= 4 * (TRIPLE_R2 + DEFAULT_TRIPLE_TOL)
    n_workers = min(int(cfg.workers), cfg.n_samples)
    index_chunks = [list(range(w, cfg.n_samples, n_workers)) for w in range(n_workers)]

    if n_workers == 1:
        results = [_worker_chunk(cfg, index_chunks[0], lengths, n_offsets, want_triple)]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            futures = [
                pool.submit(_worker_chunk, cfg, idx, lengths, n_offsets, want_triple)
                for idx in index_chunks
            ]
            results = [f.result() for f in futures]

    hist = results[0][0]
    for part in results[1:]:
        hist = merge(hist, part[0])
    gaps = {}
    counts = {}
    triples = {}
    npoints = 0
    for _, g, c, t, np_ in results:
        gaps.update(g)
        counts.update(c)
        triples.update(t)
        npoints += np_

    intensity = npoints / (cfg.n_samples * L)
    spacings = spacing_histogram_from_gaps(
        [gaps[s] for s in range(cfg.n_samples)], n_bins=cfg.n_bins
    )
    count_var = []
    if lengths:
        m = cfg.n_samples * int(n_offsets)
        for i, ell in enumerate(lengths):
            s1 = sum(int(counts[s][i].sum()) for s in range(cfg.n_samples))
            s2 = sum(int((counts[s][i] * counts[s][i]).sum()) for s in range(cfg.n_samples))
            count_var.append((float(ell), float(_variance_from_moments(s1, s2, m))))
    bundle = EstimateBundle(
        intensity=float(intensity),
        pair=hist,
        spacings=spacings,
        count_var=tuple(count_var),
    )

    curve_name, curve_fn = target_curve(cfg)
    comparison = compare_to_curve(hist, curve_fn)
    ks = ks_against_exponential(spacings) if spacings.n_spacings >= 100 else None
    summary = {
        "intensity": bundle.intensity,
        "curve": curve_name,
        "pair_rms_dev": comparison.rms_dev,
        "pair_max_abs_dev": comparison.max_abs_dev,
        "pair_bins_over_4sigma": comparison.n_bins_over_4sigma,
        "count_variance": [[ell, var] for ell, var in count_var],
        "spacings_skipped": spacings.n_skipped,
    }
    if ks is not None:
        summary["ks_d"] = ks.d_statistic
        summary["ks_n"] = ks.n
        summary["ks_threshold_05"] = ks.threshold_05
        summary["ks_pass"] = ks.passed
    if want_triple:
        total = sum(triples[s] for s in range(cfg.n_samples))
        est3 = total / (cfg.n_samples * L * DEFAULT_TRIPLE_TOL ** 2)
        pts3 = [0.0, TRIPLE_R1, TRIPLE_R2]
        if cfg.mode == "single":
            tgt3 = rho_sine(pts3)
        elif cfg.mode == "pair":
            tgt3 = rho_superposed_sine(cfg.dims[0], pts3)
        else:
            tgt3 = 1.0
        summary["triple_estimate"] = est3
        summary["triple_gaps"] = [TRIPLE_R1, TRIPLE_R2]
        summary["triple_tol"] = DEFAULT_TRIPLE_TOL
        summary["triple_target"] = float(tgt3)

    outputs = []
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        preamble = {
            "seed": int(cfg.seed),
            "dims": "x".join(str(d) for d in cfg.dims),
            "n_samples": int(cfg.n_samples),
        }
        if "pair" in emit:
            se = hist.standard_errors()
            mids = hist.bin_midpoints()
            rows = [
                (
                    float(mids[i]),
                    float(hist.estimate[i]),
                    float(se[i]),
                    float(curve_fn(mids[i])),
                    float(hist.counts[i]),
                )
                for i in range(hist.n_bins)
            ]
            path = os.path.join(out_dir, "pair_correlation.csv")
            write_csv(
                path,
                preamble,
                ("delta", "estimate", "std_error", "target", "ordered_pair_count"),
                rows,
            )
            outputs.append("pair_correlation.csv")
        if "spacings" in emit:
            smids = 0.5 * (spacings.bin_edges[:-1] + spacings.bin_edges[1:])
            dens = spacings.density()
            rows = [
                (float(smids[i]), float(dens[i]), float(np.exp(-smids[i])))
                for i in range(smids.size)
            ]
            path = os.path.join(out_dir, "spacings.csv")
            write_csv(path, preamble, ("s", "density", "poisson_density"), rows)
            outputs.append("spacings.csv")
        if "counts" in emit and count_var:
            rows = [(ell, var, ell) for ell, var in count_var]
            path = os.path.join(out_dir, "count_variance.csv")
            write_csv(path, preamble, ("length", "variance", "poisson_variance"), rows)
            outputs.append("count_variance.csv")

    worker_streams = tuple(
        {
            "worker": w,
            "first_stream_id": w,
            "stride": n_workers,
            "count": len(index_chunks[w]),
        }
        for w in range(n_workers)
    )
    manifest = RunManifest(
        config=cfg.to_dict(),
        version=__version__,
        started_utc=started,
        finished_utc=_utc_now(),
        stream_policy=STREAM_POLICY,
        worker_streams=worker_streams,
        outputs=tuple(outputs),
        summary=summary,
    )
    if out_dir is not None:
        write_manifest(os.path.join(out_dir, "manifest.json"), manifest.to_dict())
    return bundle, manifest


def run_convergence_sweep(cfg, n_values, out_dir=None):
    """Fixed first factor, growing second factor: rms vs the limit curve.

    cfg must be in pair mode; its dims[1] is replaced by each value of
    n_values in turn.  Returns one row dict per n.
    """
    if cfg.mode != "pair":
        raise ValueError("convergence sweep needs a pair-mode config")
    n_values = [int(n) for n in n_values]
    if not n_values:
        raise ValueError("n_values must be nonempty")
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ValueError("n_values must be strictly ascending")
    rows = []
    for n in n_values:
        sub = replace(cfg, dims=(cfg.dims[0], n), curve="superposed")
        _, manifest = run_experiment(sub, out_dir=None)
        rows.append(
            {
                "n": n,
                "rms_dev": manifest.summary["pair_rms_dev"],
                "max_abs_dev": manifest.summary["pair_max_abs_dev"],
                "n_samples": cfg.n_samples,
            }
        )
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        preamble = {
            "seed": int(cfg.seed),
            "dims": "%dxN" % cfg.dims[0],
            "n_samples": int(cfg.n_samples),
        }
        write_csv(
            os.path.join(out_dir, "sweep.csv"),
            preamble,
            ("n", "rms_dev", "max_abs_dev"),
            [(r["n"], r["rms_dev"], r["max_abs_dev"]) for r in rows],
        )
    return rows


REFERENCE_KINDS = ("sine_pair", "superposed_pair", "poisson")


def emit_reference_curve(kind, grid, path, m=None):
    """Write a two-column CSV (delta, rho) of an analytic pair curve."""
    if kind not in REFERENCE_KINDS:
        raise ValueError("kind must be one of %s" % (REFERENCE_KINDS,))
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise ValueError("grid must be a nonempty 1-d sequence")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly ascending")
    if kind == "sine_pair":
        rho = 1.0 - sine_q(grid) ** 2
        preamble = {"kind": kind}
    elif kind == "superposed_pair":
        if m is None or int(m) < 1:
            raise ValueError("superposed_pair needs m >= 1")
        rho = rho_superposed_pair(int(m), grid)
        preamble = {"kind": kind, "m": int(m)}
    else:
        rho = np.ones_like(grid)
        preamble = {"kind": kind}
    write_csv(path, preamble, ("delta", "rho"), zip(grid.tolist(), np.asarray(rho).tolist()))
    return path
