"""Achievable symmetric rate, symmetric-capacity outer bound and their gap.

The coding-theorem constraints are evaluated numerically through
:func:`coopic.channel.gaussian_mi`; the closed-form achievable rate and outer
bound are evaluated directly. Logarithms are base 2 throughout.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

from .channel import ChannelGains, CovarianceModel, build_covariance, gaussian_mi

LOG2_3 = math.log2(3.0)

# coefficient vectors are over (R1c, R2c, R1p, R2p)
_COEFFS = {
    "p": {1: (0, 0, 1, 0), 2: (0, 0, 0, 1)},
    "oc+p": {1: (0, 1, 1, 0), 2: (1, 0, 0, 1)},
    "c+p": {1: (1, 0, 1, 0), 2: (0, 1, 0, 1)},
    "c+oc+p": {1: (1, 1, 1, 0), 2: (1, 1, 0, 1)},
}


def pos(x: float) -> float:
    """(x)^+ = max(x, 0)."""
    return x if x > 0 else 0.0


@dataclass(frozen=True)
class PowerSplit:
    pc: float
    pp: float

    def __post_init__(self):
        if not (0.0 <= self.pc <= 1.0 and 0.0 <= self.pp <= 1.0):
            raise ValueError(f"powers must lie in [0, 1]: {self}")
        if self.pc + self.pp > 1.0 + 1e-12:
            raise ValueError(f"total power exceeds 1: {self}")


@dataclass(frozen=True)
class QuantizerConfig:
    delta1: float
    delta2: float

    def __post_init__(self):
        if not (self.delta1 > 0 and self.delta2 > 0):
            raise ValueError(f"distortions must be > 0: {self}")


@dataclass(frozen=True)
class RateBreakdown:
    """A rate given as the (clamped) minimum of named terms."""

    terms: tuple

    @property
    def raw(self) -> float:
        return min(v for _, v in self.terms)

    @property
    def value(self) -> float:
        return max(0.0, self.raw)

    @property
    def binding(self) -> str:
        return min(self.terms, key=lambda t: t[1])[0]

    def as_dict(self) -> dict:
        return dict(self.terms)


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple
    bound: float
    label: str


@dataclass(frozen=True)
class ConstraintSet:
    constraints: tuple = field(default_factory=tuple)

    def __iter__(self):
        return iter(self.constraints)

    def __len__(self):
        return len(self.constraints)

    def by_label(self, label: str) -> Constraint:
        for c in self.constraints:
            if c.label == label:
                return c
        raise KeyError(label)


def etw_power_split(snr: float, inr: float) -> PowerSplit:
    """Common/private split that puts the private interference at the noise level."""
    if inr >= snr:
        return PowerSplit(pc=1.0, pp=0.0)
    pp = min(1.0, 1.0 / inr)
    return PowerSplit(pc=1.0 - pp, pp=pp)


def quantization_distortion(snr: float, inr: float, split: PowerSplit) -> QuantizerConfig:
    """Distortion = max(noise power, own private signal power at the receiver)."""
    d = max(1.0, snr * split.pp)
    return QuantizerConfig(d, d)


def _labels(receiver: int):
    """Signal labels seen from ``receiver``: own/other common, own private, y, other yh."""
    if receiver == 1:
        return "x1c", "x1p", "x2c", "y1", "y2", "yh2"
    if receiver == 2:
        return "x2c", "x2p", "x1c", "y2", "y1", "yh1"
    raise ValueError(f"receiver must be 1 or 2, got {receiver!r}")


def xi_from_model(cov: CovarianceModel, receiver: int) -> float:
    own_c, own_p, oth_c, y, y_oth, yh_oth = _labels(receiver)
    return gaussian_mi(cov, [yh_oth], [y_oth], [own_c, own_p, oth_c, y])


def xi(
    gains: ChannelGains,
    splits: Sequence[PowerSplit],
    quant: QuantizerConfig,
    receiver: int,
) -> float:
    """Bin-index overhead I(yh_j; y_j | x_ic, x_i, x_jc, y_i) at ``receiver`` i."""
    cov = build_covariance(gains, splits[0], splits[1], quant.delta1, quant.delta2)
    return xi_from_model(cov, receiver)


def _receiver_constraints(cov: CovarianceModel, receiver: int, cb_in: float):
    own_c, own_p, oth_c, y, _, yh_oth = _labels(receiver)
    coop = pos(cb_in - xi_from_model(cov, receiver))
    # (rate label, message labels, conditioning labels)
    groups = [
        ("p", [own_p], [own_c, oth_c]),
        ("oc+p", [oth_c, own_p], [own_c]),
        ("c+p", [own_c, own_p], [oth_c]),
        ("c+oc+p", [own_c, own_p, oth_c], []),
    ]
    out = []
    for name, msg, cond in groups:
        coeffs = _COEFFS[name][receiver]
        bin_bound = gaussian_mi(cov, msg, [y], cond) + coop
        out.append(Constraint(coeffs, bin_bound, f"rx{receiver}:bin:{name}"))
    for name, msg, cond in groups:
        coeffs = _COEFFS[name][receiver]
        q_bound = gaussian_mi(cov, msg, [y, yh_oth], cond)
        out.append(Constraint(coeffs, q_bound, f"rx{receiver}:quant:{name}"))
    return out


def theorem1_region(
    gains: ChannelGains,
    cb12: float,
    cb21: float,
    splits: Sequence[PowerSplit],
    quant: QuantizerConfig,
) -> ConstraintSet:
    """All sixteen rate constraints of the quantize-binning scheme, imposed jointly.

    Labels read ``rx<i>:<bin|quant>:<rates>``; ``cb21`` is the conference
    capacity from receiver 2 to receiver 1, which helps receiver 1.
    """
    cov = build_covariance(gains, splits[0], splits[1], quant.delta1, quant.delta2)
    return ConstraintSet(
        tuple(_receiver_constraints(cov, 1, cb21) + _receiver_constraints(cov, 2, cb12))
    )


def max_symmetric_rate_t1(constraints: ConstraintSet) -> float:
    """max Rc + Rp under R1c = R2c = Rc, R1p = R2p = Rp, solved by vertex enumeration."""
    # half-planes a*Rc + b*Rp <= c, including Rc >= 0 and Rp >= 0
    tightest = {(-1.0, 0.0): 0.0, (0.0, -1.0): 0.0}
    for con in constraints:
        r1c, r2c, r1p, r2p = con.coeffs
        key = (float(r1c + r2c), float(r1p + r2p))
        bound = max(0.0, con.bound)
        tightest[key] = min(bound, tightest.get(key, math.inf))
    planes = sorted((a, b, c) for (a, b), c in tightest.items())
    tol = 1e-9
    best = 0.0
    for (a1, b1, c1), (a2, b2, c2) in itertools.combinations(planes, 2):
        det = a1 * b2 - a2 * b1
        if det == 0:
            continue
        rc = (c1 * b2 - c2 * b1) / det
        rp = (a1 * c2 - a2 * c1) / det
        if all(a * rc + b * rp <= c + tol * max(1.0, abs(c)) for a, b, c in planes):
            best = max(best, rc + rp)
    return best


def prescribed_configuration(snr: float, inr: float):
    """The power split and distortions used by the closed-form achievable rate."""
    split = etw_power_split(snr, inr)
    return (split, split), quantization_distortion(snr, inr, split)


def theorem1_sym_rate(gains: ChannelGains, cb: float) -> float:
    """Symmetric rate of the coding-theorem region under the prescribed configuration."""
    _check_symmetric(gains)
    splits, quant = prescribed_configuration(gains.snr1, gains.inr1)
    return max_symmetric_rate_t1(theorem1_region(gains, cb, cb, splits, quant))


def _check_symmetric(gains: ChannelGains):
    if not gains.is_symmetric():
        raise ValueError(
            "symmetric magnitudes required: "
            f"snr=({gains.snr1}, {gains.snr2}), inr=({gains.inr1}, {gains.inr2})"
        )


def achievable_terms(snr: float, inr: float, det_sq: float, cb: float) -> RateBreakdown:
    lg = math.log2
    full = lg(1 + 2 * snr + 2 * inr + det_sq)
    if snr <= inr:
        terms = (
            ("single-user", lg(1 + snr) + pos(cb - 1)),
            ("mac", lg(1 + snr + inr) - 1),
            ("half-sum", 0.5 * (lg(1 + snr + inr) + pos(cb - 1))),
            ("full-coop", 0.5 * (full - 1)),
        )
    else:
        terms = (
            ("private+interf", lg(1 + snr / inr + inr) + pos(cb - LOG2_3) - 1),
            ("single-user", lg(1 + snr) - 2),
            ("half-sum", 0.5 * (lg(1 + snr + inr) + lg(2 + snr / inr) + pos(cb - LOG2_3) - 2)),
            ("full-coop", 0.5 * (full - 3)),
        )
    return RateBreakdown(terms)


def outer_terms(snr: float, inr: float, det_sq: float, cb: float) -> RateBreakdown:
    lg = math.log2
    terms = (
        ("cut-set", lg(1 + snr) + min(cb, lg(1 + inr / (1 + snr)))),
        ("z-channel", lg(1 + inr + snr / (1 + inr)) + cb),
        ("half-sum", 0.5 * lg(1 + snr + inr) + 0.5 * lg(1 + snr / (1 + inr)) + 0.5 * cb),
        ("full-coop", 0.5 * lg(1 + 2 * snr + 2 * inr + det_sq)),
    )
    return RateBreakdown(terms)


def achievable_sym_rate(gains: ChannelGains, cb: float) -> RateBreakdown:
    """Closed-form achievable symmetric rate (``.value`` is clamped at 0)."""
    _check_symmetric(gains)
    return achievable_terms(gains.snr1, gains.inr1, gains.det_sq, cb)


def outer_bound_sym(gains: ChannelGains, cb: float) -> RateBreakdown:
    """Upper bound on the symmetric capacity."""
    _check_symmetric(gains)
    return outer_terms(gains.snr1, gains.inr1, gains.det_sq, cb)


def gap(gains: ChannelGains, cb: float) -> float:
    return outer_bound_sym(gains, cb).value - achievable_sym_rate(gains, cb).value
