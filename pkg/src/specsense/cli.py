"""Command-line front end.

Commands: `roc`, `cdf`, `curves`, `calibrate`, `validate`.  Each
file-emitting command writes CSV (6 significant digits) whose first line
references the manifest hash, plus a JSON manifest describing the run.
Exit codes: 0 success, 1 configuration error, 2 numeric failure,
3 validation failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__, analysis, montecarlo, svgplot
from .config import ExperimentConfig, load_experiment
from .detectors import detector_def
from .errors import ConfigError, NumericFailure
from .signals import H0, NAKAGAMI, ChannelSpec
from .validation import DEFAULT_SEED, run_validation

_CONVENTION_NOTES = (
    "thresholds live on the statistic scales of specsense.detectors; "
    "scaled-statistic closed forms use tail argument eta*theta/alpha",
    "excess-band CLT detection probability uses the bin-model moments "
    "(analysis.pd_alrd2_clt); the alternative printed moment form is exposed "
    "as proposed_statistic_moments(...).printed for reporting only",
    "prior_k and prior_theta are experiment configuration choices",
)


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _channel_label(ch: ChannelSpec) -> str:
    if ch.kind == NAKAGAMI:
        return f"nakagami(m={ch.nakagami_m:g})"
    return ch.kind


def _manifest(command: str, exp: ExperimentConfig, seed: int) -> tuple[dict, str]:
    stable = {
        "command": command,
        "config": exp.echo,
        "master_seed": seed,
        "notes": list(_CONVENTION_NOTES),
        "tool_version": __version__,
    }
    digest = hashlib.sha256(
        json.dumps(stable, sort_keys=True).encode()).hexdigest()[:16]
    manifest = dict(stable)
    manifest["manifest_hash"] = digest
    return manifest, digest


def _write_csv(path: Path, digest: str, header: list[str],
               rows: list[list[str]]) -> None:
    lines = [f"# manifest: {digest}", ",".join(header)]
    lines.extend(",".join(row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def _finish(manifest: dict, out_dir: Path, stem: str, started: float) -> None:
    manifest["duration_seconds"] = round(time.perf_counter() - started, 3)
    (out_dir / f"{stem}_manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _load(args) -> ExperimentConfig:
    exp = load_experiment(args.config)
    if args.seed is not None:
        exp = replace(exp, master_seed=args.seed,
                      echo={**exp.echo, "master_seed": str(args.seed)})
    if args.trials is not None:
        if args.trials < 1:
            raise ConfigError("--trials must be positive")
        exp = replace(exp, trials=args.trials,
                      echo={**exp.echo, "trials": str(args.trials)})
    return exp


def _check_finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise NumericFailure("non-finite value in command output")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_roc(args) -> int:
    started = time.perf_counter()
    exp = _load(args)
    if not exp.pfa_targets:
        raise ConfigError("roc requires pfa_targets")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.config).stem
    manifest, digest = _manifest("roc", exp, exp.master_seed)

    header = ["detector", "n_samples", "snr_db", "channel", "pfa_target",
              "pfa_emp", "pd_emp", "pd_ci_low", "pd_ci_high", "threshold"]
    rows: list[list[str]] = []
    series = []
    for n, ch in exp.legs():
        cfg = exp.scenario(n, ch)
        points = montecarlo.roc_sweep_multi(cfg, exp.detectors, exp.pfa_targets)
        for name in exp.detectors:
            pts = points[name]
            for pt in pts:
                _check_finite(pt.pfa_empirical, pt.pd_empirical, pt.threshold)
                rows.append([name, str(n), _fmt(exp.snr_db), _channel_label(ch),
                             _fmt(pt.pfa_target), _fmt(pt.pfa_empirical),
                             _fmt(pt.pd_empirical), _fmt(pt.pd_ci_low),
                             _fmt(pt.pd_ci_high), _fmt(pt.threshold)])
            series.append((f"{name} N={n} {_channel_label(ch)}",
                           [pt.pfa_empirical for pt in pts],
                           [pt.pd_empirical for pt in pts]))
    _write_csv(out_dir / f"{stem}_roc.csv", digest, header, rows)
    if args.svg:
        svgplot.write_line_plot(out_dir / f"{stem}_roc.svg", series,
                                "false-alarm probability",
                                "detection probability", f"ROC ({stem})",
                                comment=f"manifest: {digest}")
    _finish(manifest, out_dir, f"{stem}_roc", started)
    print(f"wrote {out_dir / (stem + '_roc.csv')} ({len(rows)} rows)")
    return 0


def cmd_cdf(args) -> int:
    started = time.perf_counter()
    exp = _load(args)
    if len(exp.n_samples) != 1 or len(exp.channels) != 1:
        raise ConfigError("cdf expects a single n_samples value and channel")
    n_points = max(200, exp.cdf_points)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.config).stem
    manifest, digest = _manifest("cdf", exp, exp.master_seed)

    cfg = exp.scenario(exp.n_samples[0], exp.channels[0], hypothesis=H0)
    header = ["detector", "statistic_value", "cdf"]
    rows: list[list[str]] = []
    series = []
    for name in exp.detectors:
        cdf = montecarlo.empirical_cdf(cfg, name)
        lo, hi = float(cdf.values[0]), float(cdf.values[-1])
        grid = np.linspace(lo, hi, n_points)
        vals = [cdf.evaluate(t) for t in grid]
        for t, c in zip(grid, vals):
            _check_finite(t, c)
            rows.append([name, _fmt(t), _fmt(c)])
        series.append((name, list(grid), vals))
    _write_csv(out_dir / f"{stem}_cdf.csv", digest, header, rows)
    if args.svg:
        svgplot.write_line_plot(out_dir / f"{stem}_cdf.svg", series,
                                "statistic value", "cdf",
                                f"H0 statistic CDF ({stem})",
                                comment=f"manifest: {digest}")
    _finish(manifest, out_dir, f"{stem}_cdf", started)
    print(f"wrote {out_dir / (stem + '_cdf.csv')} ({len(rows)} rows)")
    return 0


def cmd_curves(args) -> int:
    started = time.perf_counter()
    exp = _load(args)
    if len(exp.n_samples) != 1:
        raise ConfigError("curves expects a single n_samples value")
    if exp.threshold_grid is None:
        raise ConfigError("curves requires threshold_min/threshold_max/threshold_points")
    n = exp.n_samples[0]
    geom = exp.scenario(n, exp.channels[0]).geometry
    alpha = exp.noise_power if exp.noise_power is not None else exp.prior.mean_noise_power
    snr = exp.snr_linear
    h = exp.pinned_channel if exp.pinned_channel is not None else 1.0 + 0.0j
    s = (exp.pinned_signal if exp.pinned_signal is not None
         else complex(math.sqrt(n * alpha * snr)))

    lo, hi, count = exp.threshold_grid
    grid = np.linspace(lo, hi, count)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.config).stem
    manifest, digest = _manifest("curves", exp, exp.master_seed)

    header = ["detector", "threshold", "pfa_cf", "pd_cf"]
    rows: list[list[str]] = []
    for name in exp.detectors:
        detector_def(name)
        for thr in grid:
            thr = float(thr)
            if name == "optimal":
                pfa = analysis.pfa_opt(n, 1.0, thr)
                pd = analysis.pd_opt(n, 1.0, snr, thr)
            elif name in ("alrd1", "glrd1"):
                pfa = analysis.pfa_alrd1(n, alpha, exp.prior, thr)
                pd = analysis.pd_alrd1(n, alpha, exp.prior, snr, thr)
            else:
                pfa = analysis.pfa_alrd2_clt(geom.l_inband, geom.p_excess, n,
                                             alpha, exp.prior.theta, thr)
                pd = analysis.pd_alrd2_clt(geom.l_inband, geom.p_excess, n,
                                           alpha, exp.prior.theta, thr, h, s)
            _check_finite(pfa, pd)
            point = analysis.PerfPoint(pfa=pfa, pd=pd, threshold=thr,
                                       conditioning=f"alpha={alpha:g}")
            rows.append([name, _fmt(point.threshold), _fmt(point.pfa),
                         _fmt(point.pd)])
    _write_csv(out_dir / f"{stem}_curves.csv", digest, header, rows)
    _finish(manifest, out_dir, f"{stem}_curves", started)
    print(f"wrote {out_dir / (stem + '_curves.csv')} ({len(rows)} rows)")
    return 0


def cmd_calibrate(args) -> int:
    started = time.perf_counter()
    exp = _load(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.config).stem
    manifest, digest = _manifest("calibrate", exp, exp.master_seed)

    header = ["detector", "n_samples", "channel", "pfa_target", "threshold"]
    rows: list[list[str]] = []
    for n, ch in exp.legs():
        cfg = exp.scenario(n, ch, hypothesis=H0)
        for name in exp.detectors:
            thr = montecarlo.calibrate_threshold(cfg, name, args.pfa)
            _check_finite(thr)
            rows.append([name, str(n), _channel_label(ch),
                         _fmt(args.pfa), _fmt(thr)])
            print(f"{name} N={n} {_channel_label(ch)}: "
                  f"threshold {thr:.6g} at target pfa {args.pfa:g}")
    _write_csv(out_dir / f"{stem}_calibrate.csv", digest, header, rows)
    _finish(manifest, out_dir, f"{stem}_calibrate", started)
    return 0


def cmd_validate(args) -> int:
    seed = args.seed if args.seed is not None else DEFAULT_SEED
    results = run_validation(seed)
    all_passed = True
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        all_passed &= res.passed
        print(f"{status} {res.name}: {res.detail}")
    if not all_passed:
        print("validation failed")
        return 3
    print(f"all {len(results)} checks passed (seed {seed})")
    return 0


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specsense",
        description="Spectrum-sensing detector experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_config=True):
        if needs_config:
            p.add_argument("config", help="experiment config file (key = value)")
        p.add_argument("--seed", type=int, default=None,
                       help="override the master seed")
        p.add_argument("--trials", type=int, default=None,
                       help="override the trial count")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--svg", action="store_true",
                       help="also write an SVG figure where supported")

    p_roc = sub.add_parser("roc", help="empirical ROC sweep")
    add_common(p_roc)
    p_roc.set_defaults(fn=cmd_roc)

    p_cdf = sub.add_parser("cdf", help="H0 statistic CDF table")
    add_common(p_cdf)
    p_cdf.set_defaults(fn=cmd_cdf)

    p_curves = sub.add_parser("curves", help="closed-form Pfa/Pd vs threshold")
    add_common(p_curves)
    p_curves.set_defaults(fn=cmd_curves)

    p_cal = sub.add_parser("calibrate", help="empirical threshold at a target Pfa")
    add_common(p_cal)
    p_cal.add_argument("--pfa", type=float, required=True,
                       help="target false-alarm probability")
    p_cal.set_defaults(fn=cmd_calibrate)

    p_val = sub.add_parser("validate", help="run the oracle check battery")
    add_common(p_val, needs_config=False)
    p_val.set_defaults(fn=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except NumericFailure as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
