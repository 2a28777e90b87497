"""Grid sweeps over (SNR, INR, C^B) producing one row per channel realization.

Randomness: grid point ``i`` draws its phases from
``numpy.random.default_rng([seed, i])``, so rows do not depend on evaluation
order or on the number of workers.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence

import numpy as np

from . import rates
from .channel import SymmetricParams, gains_from_symmetric

GAP_CEILING = 3.0
CONTRACT_TOL = 1e-6

# appended to every grid point: all aligned, and cross gain h12 anti-aligned
EXTREME_PHASES = ((0.0, 0.0, 0.0, 0.0), (0.0, math.pi, 0.0, 0.0))


def parse_range(text: str) -> List[Fraction]:
    """``start:stop:step`` (stop inclusive) or a comma list; values may be fractions like 2/3."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (Fraction(p) for p in parts)
        if step <= 0:
            raise ValueError(f"range step must be > 0, got {text!r}")
        if stop < start:
            raise ValueError(f"empty range {text!r}")
        count = math.floor((stop - start) / step) + 1
        return [start + i * step for i in range(count)]
    values = [Fraction(p) for p in text.split(",") if p.strip()]
    if not values:
        raise ValueError("empty value list")
    return values


@dataclass(frozen=True)
class SweepSpec:
    snr_db: tuple
    inr_db: Optional[tuple] = None
    alpha: Optional[tuple] = None
    cb: Optional[tuple] = None
    kappa: Optional[tuple] = None
    phase_samples: int = 16
    seed: int = 0
    extremes: bool = True

    def __post_init__(self):
        if not self.snr_db:
            raise ValueError("empty SNR range")
        if (self.inr_db is None) == (self.alpha is None):
            raise ValueError("give exactly one of inr_db or alpha")
        if (self.cb is None) == (self.kappa is None):
            raise ValueError("give exactly one of cb or kappa")
        for name in ("inr_db", "alpha", "cb", "kappa"):
            v = getattr(self, name)
            if v is not None and len(v) == 0:
                raise ValueError(f"empty {name} list")
        if min(self.snr_db) <= 0 or (self.inr_db is not None and min(self.inr_db) <= 0):
            raise ValueError("SNR and INR must be > 0 dB")
        if self.alpha is not None and min(self.alpha) <= 0:
            raise ValueError("alpha must be > 0 so that INR > 0 dB")
        if (self.cb is not None and min(self.cb) < 0) or (self.kappa is not None and min(self.kappa) < 0):
            raise ValueError("cooperation must be >= 0")
        if self.phase_samples < 0:
            raise ValueError("phase_samples must be >= 0")
        if not (0 <= self.seed < 2 ** 64):
            raise ValueError("seed must be a 64-bit unsigned integer")

    def grid(self) -> list:
        """Grid points ``(snr_db, inr_db, cb)`` in row-major order."""
        points = []
        for s in self.snr_db:
            inrs = self.inr_db if self.inr_db is not None else [a * s for a in self.alpha]
            for i in inrs:
                if self.cb is not None:
                    cbs = list(self.cb)
                else:
                    log_snr = float(s) / 10 * math.log2(10)
                    cbs = [float(k) * log_snr for k in self.kappa]
                for c in cbs:
                    points.append((float(s), float(i), float(c)))
        return points


@dataclass(frozen=True)
class RunRecord:
    index: int
    snr_db: float
    inr_db: float
    cb: float
    phase11: float
    phase12: float
    phase21: float
    phase22: float
    det_sq: float
    r_sym: float
    r_binding: str
    c_bar: float
    c_binding: str
    gap: float

    def check_finite(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, float) and not math.isfinite(v):
                raise ValueError(f"non-finite {f.name} in record {self}")
        return self

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


COLUMNS = tuple(f.name for f in fields(RunRecord))


def evaluate(index: int, snr_db: float, inr_db: float, cb: float, phases: Sequence[float]) -> RunRecord:
    gains = gains_from_symmetric(SymmetricParams.from_db(snr_db, inr_db, cb), phases)
    lo = rates.achievable_sym_rate(gains, cb)
    hi = rates.outer_bound_sym(gains, cb)
    return RunRecord(
        index, snr_db, inr_db, cb, *(float(p) for p in phases), gains.det_sq,
        lo.value, lo.binding, hi.value, hi.binding, hi.value - lo.value,
    ).check_finite()


def point_phases(seed: int, index: int, samples: int, extremes: bool = True) -> list:
    rng = np.random.default_rng([seed, index])
    draws = [tuple(float(p) for p in row) for row in rng.uniform(0.0, 2 * math.pi, size=(samples, 4))]
    return draws + (list(EXTREME_PHASES) if extremes else [])


def _evaluate_point(args):
    index, (snr_db, inr_db, cb), seed, samples, extremes = args
    return [evaluate(index, snr_db, inr_db, cb, ph) for ph in point_phases(seed, index, samples, extremes)]


def run_sweep(spec: SweepSpec, workers: int = 1) -> List[RunRecord]:
    """Rows for every grid point and phase tuple, ordered by grid index."""
    jobs = [(i, p, spec.seed, spec.phase_samples, spec.extremes) for i, p in enumerate(spec.grid())]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_evaluate_point, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        chunks = [_evaluate_point(j) for j in jobs]
    return [r for chunk in chunks for r in chunk]


def summarize(records: Iterable[RunRecord], ceiling: float = GAP_CEILING, tol: float = CONTRACT_TOL) -> dict:
    records = list(records)
    if not records:
        raise ValueError("no records to summarize")
    worst = max(records, key=lambda r: r.gap)
    least = min(records, key=lambda r: r.gap)
    violations = [r for r in records if not (-tol <= r.gap <= ceiling + tol)]
    return {
        "rows": len(records),
        "points": len({r.index for r in records}),
        "max_gap": worst.gap,
        "argmax": worst.as_dict(),
        "min_gap": least.gap,
        "argmin": least.as_dict(),
        "gap_ceiling": ceiling,
        "tolerance": tol,
        "contract_ok": not violations,
        "violations": [r.as_dict() for r in violations[:10]],
        "violation_count": len(violations),
    }


def _fmt(v):
    return repr(v) if isinstance(v, float) else str(v)


def records_to_csv(records: Iterable[RunRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in records:
        w.writerow([_fmt(v) for v in astuple(r)])
    return buf.getvalue()
