"""Command-line front end.

    coopic rates --snr-db 20 --inr-db 10 --cb 1 --phases 0,0,0,0
    coopic gap-sweep [--out rows.csv]
    coopic gdof --alpha 1/2,2/3 --kappa 0:1:0.05 [--numeric 40,80,120]
    coopic ldc run fig2_optimal.json
    coopic ldc search --n 3 --m 2 --k 1
    coopic ldc scenario --mode decode_forward --config fig5_scenario.json

Exit status 0 on success, 1 when a checked contract fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import gdof, ldc, sweep

GDOF_COLUMNS = ("alpha", "kappa", "d", "binding", "kappa_star", "phase_caveat")
GDOF_NUMERIC_COLUMNS = GDOF_COLUMNS + ("snr_db", "r_lo", "r_hi")


def _float_list(text):
    try:
        return [float(v) for v in sweep.parse_range(text)]
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(str(e))


def _fraction_list(text):
    try:
        return sweep.parse_range(text)
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(str(e))


def _phases(text):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))
    if len(vals) != 4 or not all(math.isfinite(v) for v in vals):
        raise argparse.ArgumentTypeError("need four finite phases a,b,c,d (radians)")
    return tuple(vals)


def _positive_db(text):
    v = float(text)
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"must be > 0 dB, got {text}")
    return v


def _nonneg(text):
    v = float(text)
    if not (math.isfinite(v) and v >= 0):
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return v


def _seed(text):
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


# --- rates ---

def cmd_rates(args) -> int:
    if args.phases is not None:
        phase_list = [args.phases]
    else:
        rng = np.random.default_rng(args.phase_seed)
        phase_list = [tuple(float(p) for p in row)
                      for row in rng.uniform(0, 2 * math.pi, size=(args.phase_samples, 4))]
    records = [sweep.evaluate(0, args.snr_db, args.inr_db, args.cb, ph) for ph in phase_list]
    if args.format == "json":
        _emit(_dumps([r.as_dict() for r in records]), args.out)
    else:
        _emit(sweep.records_to_csv(records), args.out)
    return 0


# --- gap sweep ---

def build_sweep_spec(args) -> sweep.SweepSpec:
    return sweep.SweepSpec(
        snr_db=tuple(args.snr_db),
        inr_db=tuple(args.inr_db) if args.inr_db is not None else None,
        alpha=tuple(args.alpha) if args.alpha is not None else None,
        cb=tuple(args.cb) if args.cb is not None or args.kappa is None else None,
        kappa=tuple(args.kappa) if args.kappa is not None else None,
        phase_samples=args.phase_samples,
        seed=args.seed,
    )


def cmd_gap_sweep(args) -> int:
    if args.inr_db is None and args.alpha is None:
        args.inr_db = _float_list("5:70:5")
    if args.cb is None and args.kappa is None:
        args.cb = _float_list("0:10:1")
    spec = build_sweep_spec(args)
    records = sweep.run_sweep(spec, workers=args.workers)
    if args.out:
        Path(args.out).write_text(sweep.records_to_csv(records))
    summary = sweep.summarize(records)
    sys.stdout.write(_dumps(summary))
    if not summary["contract_ok"]:
        sys.stderr.write(f"gap contract violated at {summary['violation_count']} rows\n")
        return 1
    return 0


# --- g.d.o.f. ---

def gdof_rows(alphas, kappas, numeric=None, phase_samples=64, seed=0) -> list:
    rows = []
    for a in alphas:
        curve = gdof.gdof_curve(a, sorted(kappas))
        for p in curve.points:
            base = [float(p.alpha), float(p.kappa), float(p.d), p.binding,
                    float(curve.kappa_star), int(p.phase_sensitive)]
            if not numeric:
                rows.append(base)
                continue
            for n in gdof.gdof_numeric(float(a), float(p.kappa), numeric, phase_samples, seed):
                rows.append(base + [n.snr_db, n.r_lo, n.r_hi])
    return rows


def cmd_gdof(args) -> int:
    rows = gdof_rows(args.alpha, args.kappa, args.numeric, args.phase_samples, args.seed)
    header = GDOF_NUMERIC_COLUMNS if args.numeric else GDOF_COLUMNS
    for r in rows:
        if any(isinstance(v, float) and not math.isfinite(v) for v in r):
            raise ValueError(f"non-finite value in row {r}")
    if args.format == "json":
        _emit(_dumps([dict(zip(header, r)) for r in rows]), args.out)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in r])
        _emit(buf.getvalue(), args.out)
    if args.plot_dir:
        out_dir = Path(args.plot_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for a in args.alpha:
            curve = gdof.gdof_curve(a, sorted(args.kappa))
            lines = [f"{float(p.kappa)!r} {float(p.d)!r}" for p in curve.points]
            (out_dir / f"gdof_alpha_{float(a):g}.dat").write_text("\n".join(lines) + "\n")
    return 0


# --- LDC ---

def _config_from_args(args) -> ldc.LdcConfig:
    if getattr(args, "config", None):
        raw = json.loads(Path(_fixture_path(args.config)).read_text())
        return ldc.LdcConfig(**raw["config"])
    if args.n is not None:
        if args.m is None:
            raise SystemExit("--m is required with --n")
        return ldc.LdcConfig.symmetric(args.n, args.m, args.k or 0)
    missing = [f for f in ("n11", "n12", "n21", "n22") if getattr(args, f) is None]
    if missing:
        raise SystemExit("give --n/--m/--k, all of --n11 --n12 --n21 --n22, or --config")
    return ldc.LdcConfig(args.n11, args.n12, args.n21, args.n22, args.k12 or 0, args.k21 or 0)


def _fixture_path(name) -> Path:
    p = Path(name)
    if not p.exists() and (ldc.FIXTURE_DIR / p).exists():
        return ldc.FIXTURE_DIR / p
    return p


def cmd_ldc_run(args) -> int:
    config, scheme, raw = ldc.load_fixture(_fixture_path(args.fixture))
    decodable = ldc.check_decodable(scheme, config)
    report = ldc.simulate(scheme, config, trials=args.trials, seed=args.seed)
    out = {
        "fixture": raw.get("name", Path(args.fixture).stem),
        "config": config.as_dict(),
        "decodable": decodable,
        **report.as_dict(),
    }
    ok = decodable and not any(report.decode_errors)
    expected = raw.get("expected", {})
    if "sum_rate" in expected:
        ok = ok and expected["sum_rate"] == report.sum_rate
    if "rates" in expected:
        ok = ok and list(expected["rates"]) == list(report.achieved_rates)
    out["matches_expected"] = ok
    _emit(_dumps(out), args.out)
    return 0 if ok else 1


def cmd_ldc_search(args) -> int:
    config = _config_from_args(args)
    result = ldc.brute_force_search(config, args.max_r1, args.max_r2, encoders=args.encoders)
    out = result.as_dict(config)
    if config.n11 == config.n22 and config.n12 == config.n21 and config.k12 == config.k21:
        value, caveat = ldc.ldc_sym_capacity_formula(config.n11, config.n12, config.k12)
        out["formula_sym"] = float(value)
        out["formula_phase_caveat"] = caveat
    _emit(_dumps(out), args.out)
    return 0


def cmd_ldc_scenario(args) -> int:
    config = _config_from_args(args)
    r2 = args.r2
    if r2 is None and args.config:
        r2 = json.loads(Path(_fixture_path(args.config)).read_text()).get("r2", 0)
    modes = ldc.SCENARIO_MODES if args.mode == "both" else (args.mode,)
    out = {"config": config.as_dict(), "r2": r2 or 0}
    for mode in modes:
        out[mode] = ldc.scenario_compare(config, mode, r2 or 0)
    _emit(_dumps(out), args.out)
    return 0


def _add_output(p, formats=("csv", "json"), default="csv"):
    p.add_argument("--out", help="write to FILE instead of stdout")
    p.add_argument("--format", choices=formats, default=default)


def _add_ldc_config(p):
    p.add_argument("--config", help="JSON file with a 'config' object (fixture names resolve to bundled files)")
    p.add_argument("--n", type=int, help="direct-link levels (symmetric)")
    p.add_argument("--m", type=int, help="cross-link levels (symmetric)")
    p.add_argument("--k", type=int, help="conference bits per direction (symmetric)")
    for f in ("n11", "n12", "n21", "n22", "k12", "k21"):
        p.add_argument(f"--{f}", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coopic", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rates", help="achievable rate, outer bound and gap at one channel")
    p.add_argument("--snr-db", type=_positive_db, required=True)
    p.add_argument("--inr-db", type=_positive_db, required=True)
    p.add_argument("--cb", type=_nonneg, default=0.0, help="conference capacity, bits per use")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--phases", type=_phases, help="phases of h11,h12,h21,h22 in radians")
    g.add_argument("--phase-seed", type=_seed, default=0)
    p.add_argument("--phase-samples", type=int, default=1)
    _add_output(p)
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("gap-sweep", help="check 0 <= gap <= 3 bits over a grid")
    p.add_argument("--snr-db", type=_float_list, default=_float_list("5:70:5"), help="start:stop:step or list")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--inr-db", type=_float_list)
    g.add_argument("--alpha", type=_fraction_list, help="INR_dB = alpha * SNR_dB")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--cb", type=_float_list)
    g.add_argument("--kappa", type=_fraction_list, help="C^B = kappa * log2 SNR")
    p.add_argument("--phase-samples", type=int, default=16)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="write every row as CSV to FILE")
    p.set_defaults(func=cmd_gap_sweep)

    p = sub.add_parser("gdof", help="generalized degrees of freedom per user")
    p.add_argument("--alpha", type=_fraction_list, required=True)
    p.add_argument("--kappa", type=_fraction_list, default=_fraction_list("0:1:1/20"))
    p.add_argument("--numeric", type=_float_list, help="also evaluate the bounds at these SNRs (dB)")
    p.add_argument("--phase-samples", type=int, default=64)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--plot-dir", help="write two-column kappa/d files per alpha")
    _add_output(p)
    p.set_defaults(func=cmd_gdof)

    p = sub.add_parser("ldc", help="linear deterministic channel tools")
    lsub = p.add_subparsers(dest="ldc_command", required=True)
    q = lsub.add_parser("run", help="simulate a scheme fixture")
    q.add_argument("fixture")
    q.add_argument("--trials", type=int, default=10_000)
    q.add_argument("--seed", type=_seed, default=0)
    q.add_argument("--out")
    q.set_defaults(func=cmd_ldc_run)
    q = lsub.add_parser("search", help="exhaustive search over linear schemes")
    _add_ldc_config(q)
    q.add_argument("--max-r1", type=int)
    q.add_argument("--max-r2", type=int)
    q.add_argument("--encoders", choices=ldc.ENCODER_CLASSES, default="linear")
    q.add_argument("--out")
    q.set_defaults(func=cmd_ldc_search)
    q = lsub.add_parser("scenario", help="best R1 with restricted forwarding at receiver 2")
    _add_ldc_config(q)
    q.add_argument("--mode", choices=ldc.SCENARIO_MODES + ("both",), default="both")
    q.add_argument("--r2", type=int, help="rate user 2 must keep")
    q.add_argument("--out")
    q.set_defaults(func=cmd_ldc_scenario)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
