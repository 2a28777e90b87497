"""Generalized degrees of freedom of the symmetric channel with conferencing decoders.

``alpha = log INR / log SNR`` and ``kappa = C^B / log SNR``; ``d(alpha, kappa)``
is the high-SNR slope of the symmetric capacity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .channel import db_to_linear, symmetric_gains
from .rates import achievable_sym_rate, outer_bound_sym


@dataclass(frozen=True)
class GdofPoint:
    alpha: float
    kappa: float
    d: float
    binding: str
    # alpha == 1: the value depends on the phases of the channel gains
    phase_sensitive: bool = False


HALF = Fraction(1, 2)


def _branches(alpha, kappa):
    """(label, offset, slope in kappa) for every branch of the min at this alpha."""
    if alpha < 1:
        return (
            ("interference-free", 1, 0),
            ("cooperation-limited", max(alpha, 1 - alpha), 1),
            ("half-sum", 1 - alpha / 2, HALF),
        )
    return (
        ("full-cooperation", alpha, 0),
        ("cooperation-limited", 1, 1),
        ("half-sum", alpha / 2, HALF),
    )


def gdof_formula(alpha, kappa) -> GdofPoint:
    """Piecewise-linear g.d.o.f. per user.

    Accepts floats or :class:`fractions.Fraction` (exact arithmetic).
    """
    if alpha < 0 or kappa < 0:
        raise ValueError(f"alpha and kappa must be >= 0, got ({alpha}, {kappa})")
    values = [(off + slope * kappa, label) for label, off, slope in _branches(alpha, kappa)]
    d, binding = min(values, key=lambda v: v[0])
    return GdofPoint(alpha, kappa, d, binding, phase_sensitive=(alpha == 1))


def saturation_kappa(alpha):
    """Smallest kappa at which d reaches its full-cooperation value d(alpha, inf)."""
    branches = _branches(alpha, 0)
    cap = min(off for _, off, slope in branches if slope == 0)
    return max([0] + [(cap - off) / slope for _, off, slope in branches if slope > 0])


@dataclass(frozen=True)
class GdofCurve:
    alpha: float
    kappa_star: float
    points: tuple


def gdof_curve(alpha, kappa_grid: Sequence) -> GdofCurve:
    grid = list(kappa_grid)
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("kappa grid must be sorted ascending")
    return GdofCurve(alpha, saturation_kappa(alpha), tuple(gdof_formula(alpha, k) for k in grid))


@dataclass(frozen=True)
class NumericPoint:
    snr_db: float
    r_lo: float
    r_hi: float


def gdof_numeric(
    alpha: float,
    kappa: float,
    snr_db_list: Iterable[float],
    phase_samples: int = 64,
    seed: int = 0,
) -> list:
    """Normalized achievable rate and outer bound at finite SNR.

    For each SNR, INR = SNR^alpha and C^B = kappa log2 SNR; returns the median
    over ``phase_samples`` i.i.d. uniform phase draws of rate / log2 SNR.
    """
    rng = np.random.default_rng(seed)
    out = []
    for snr_db in snr_db_list:
        if snr_db <= 0:
            raise ValueError(f"snr_db must be > 0, got {snr_db}")
        log_snr = snr_db / 10 * math.log2(10)
        inr_db = alpha * snr_db
        cb = kappa * log_snr
        lo, hi = [], []
        for phases in rng.uniform(0.0, 2 * math.pi, size=(phase_samples, 4)):
            # alpha = 0 puts INR exactly at 1, which is still a valid evaluation point
            gains = symmetric_gains(db_to_linear(snr_db), db_to_linear(inr_db), phases)
            lo.append(achievable_sym_rate(gains, cb).value / log_snr)
            hi.append(outer_bound_sym(gains, cb).value / log_snr)
        out.append(NumericPoint(snr_db, float(np.median(lo)), float(np.median(hi))))
    return out
