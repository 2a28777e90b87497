"""Channel parameterization and the jointly-Gaussian mutual information engine.

All signals are circularly-symmetric complex Gaussian, noise is normalized to
unit power and every information quantity is returned in bits.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

#: Signal labels of the model built by :func:`build_covariance`, in order.
SIGNALS = ("x1c", "x1p", "x2c", "x2p", "y1", "y2", "yh1", "yh2")

MI_CLAMP_TOL = 1e-9
PSD_TOL = 1e-9
# pivot of a Cholesky factor below this fraction of its diagonal entry => singular
SINGULAR_RTOL = 1e-12


class DegenerateModelError(ValueError):
    """A covariance submatrix needed by an MI evaluation is singular."""

    def __init__(self, labels: Sequence[str], message: str = ""):
        self.labels = tuple(labels)
        super().__init__(message or f"singular covariance over {{{', '.join(self.labels)}}}")


@dataclass(frozen=True)
class ComplexGain:
    re: float
    im: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ValueError(f"non-finite channel gain {self.re!r} + {self.im!r}j")

    @classmethod
    def polar(cls, magnitude: float, phase: float) -> "ComplexGain":
        z = cmath.rect(magnitude, phase)
        return cls(z.real, z.imag)

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    @property
    def power(self) -> float:
        return self.re * self.re + self.im * self.im


@dataclass(frozen=True)
class ChannelGains:
    """The four link coefficients; ``hij`` is the gain from transmitter j to receiver i."""

    h11: ComplexGain
    h12: ComplexGain
    h21: ComplexGain
    h22: ComplexGain

    def __post_init__(self):
        for name in ("h11", "h12", "h21", "h22"):
            if not getattr(self, name).power > 0:
                raise ValueError(f"{name} must have nonzero magnitude")

    @property
    def snr1(self) -> float:
        return self.h11.power

    @property
    def snr2(self) -> float:
        return self.h22.power

    @property
    def inr1(self) -> float:
        return self.h12.power

    @property
    def inr2(self) -> float:
        return self.h21.power

    @property
    def det_sq(self) -> float:
        """|h11 h22 - h12 h21|^2, the power of the 2x2 channel matrix determinant."""
        d = self.h11.value * self.h22.value - self.h12.value * self.h21.value
        return d.real * d.real + d.imag * d.imag

    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.h11.value, self.h12.value], [self.h21.value, self.h22.value]], dtype=complex
        )

    def is_symmetric(self, rtol: float = 1e-9) -> bool:
        return math.isclose(self.snr1, self.snr2, rel_tol=rtol) and math.isclose(
            self.inr1, self.inr2, rel_tol=rtol
        )


@dataclass(frozen=True)
class SymmetricParams:
    snr: float
    inr: float
    cb: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.snr) and self.snr > 1):
            raise ValueError(f"snr must be a finite ratio > 1, got {self.snr!r}")
        if not (math.isfinite(self.inr) and self.inr > 1):
            raise ValueError(f"inr must be a finite ratio > 1, got {self.inr!r}")
        if not (math.isfinite(self.cb) and self.cb >= 0):
            raise ValueError(f"cb must be finite and >= 0, got {self.cb!r}")

    @classmethod
    def from_db(cls, snr_db: float, inr_db: float, cb: float = 0.0) -> "SymmetricParams":
        return cls(db_to_linear(snr_db), db_to_linear(inr_db), cb)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def gains_from_symmetric(
    params: SymmetricParams, phases: Sequence[float] = (0.0, 0.0, 0.0, 0.0)
) -> ChannelGains:
    """Build gains with |h11|^2 = |h22|^2 = snr and |h12|^2 = |h21|^2 = inr.

    ``phases`` are the angles (radians) of h11, h12, h21, h22 in that order.
    """
    return symmetric_gains(params.snr, params.inr, phases)


def symmetric_gains(snr: float, inr: float, phases: Sequence[float]) -> ChannelGains:
    """Like :func:`gains_from_symmetric` but without the snr, inr > 1 restriction."""
    phases = tuple(float(p) for p in phases)
    if len(phases) != 4:
        raise ValueError(f"expected four phases, got {len(phases)}")
    if not all(math.isfinite(p) for p in phases):
        raise ValueError(f"non-finite phase in {phases!r}")
    a, b = math.sqrt(snr), math.sqrt(inr)
    return ChannelGains(
        ComplexGain.polar(a, phases[0]),
        ComplexGain.polar(b, phases[1]),
        ComplexGain.polar(b, phases[2]),
        ComplexGain.polar(a, phases[3]),
    )


@dataclass(frozen=True, eq=False)
class CovarianceModel:
    """Joint covariance of a set of named zero-mean complex Gaussian signals."""

    labels: tuple
    matrix: np.ndarray

    def __post_init__(self):
        labels = tuple(self.labels)
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (len(labels), len(labels)):
            raise ValueError(f"matrix shape {m.shape} does not match {len(labels)} labels")
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate labels")
        if not np.all(np.isfinite(m)):
            raise ValueError("covariance has non-finite entries")
        scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
        if not np.allclose(m, m.conj().T, atol=1e-12 * scale, rtol=0):
            raise ValueError("covariance is not Hermitian")
        m = 0.5 * (m + m.conj().T)
        if m.size:
            if np.any(m.diagonal().real < 0):
                raise ValueError("negative variance on the diagonal")
            if np.linalg.eigvalsh(m)[0] < -PSD_TOL * scale:
                raise ValueError("covariance is not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(labels)})
        object.__setattr__(self, "_logdets", {})

    def index(self, labels: Iterable[str]) -> list:
        try:
            return [self._index[lab] for lab in labels]
        except KeyError as e:
            raise KeyError(f"unknown signal label {e.args[0]!r}") from None

    def variance(self, label: str) -> float:
        i = self._index[label]
        return float(self.matrix[i, i].real)

    def cov(self, a: str, b: str) -> complex:
        """E[a conj(b)]."""
        return complex(self.matrix[self._index[a], self._index[b]])

    def sub(self, labels: Sequence[str]) -> np.ndarray:
        idx = self.index(labels)
        return self.matrix[np.ix_(idx, idx)]

    def log2det(self, labels: Sequence[str]) -> float:
        """log2 det of the covariance of ``labels``; 0 for the empty set."""
        labels = list(labels)
        if not labels:
            return 0.0
        key = frozenset(labels)
        if key not in self._logdets:
            self._logdets[key] = self._log2det(labels)
        return self._logdets[key]

    def _log2det(self, labels):
        sub = self.sub(labels)
        try:
            chol = np.linalg.cholesky(sub)
        except np.linalg.LinAlgError:
            raise DegenerateModelError(labels) from None
        pivots = chol.diagonal().real
        diag = sub.diagonal().real
        if np.any(pivots * pivots <= SINGULAR_RTOL * np.maximum(diag, 1e-300)):
            raise DegenerateModelError(labels)
        return float(2.0 * np.sum(np.log2(pivots)))


def gaussian_mi(
    cov: CovarianceModel, set_a: Iterable[str], set_b: Iterable[str], set_c: Iterable[str] = ()
) -> float:
    """Conditional mutual information I(A; B | C) in bits.

    Labels with exactly zero variance are deterministic (constants) and are
    dropped before evaluation, so an unused zero-power signal never makes a
    submatrix singular. Any other singularity raises DegenerateModelError.
    """
    a, b, c = (list(dict.fromkeys(s)) for s in (set_a, set_b, set_c))
    for lab in a + b + c:
        cov.index([lab])
    if set(a) & set(b) or set(a) & set(c) or set(b) & set(c):
        raise ValueError("label sets must be disjoint")

    def live(labels):
        return [lab for lab in labels if cov.variance(lab) > 0.0]

    a, b, c = live(a), live(b), live(c)
    if not a or not b:
        return 0.0
    joint = cov.log2det(a + b + c)
    value = cov.log2det(a + c) + cov.log2det(b + c) - cov.log2det(c) - joint
    if value < -MI_CLAMP_TOL * max(1.0, abs(joint)):
        raise DegenerateModelError(a + b + c, f"negative mutual information {value!r}")
    return 0.0 if value <= MI_CLAMP_TOL else value


def build_covariance(gains: ChannelGains, split1, split2, delta1: float, delta2: float) -> CovarianceModel:
    """Covariance over :data:`SIGNALS` for the superposition-coded channel.

    ``x_i = x_ic + x_ip`` with independent components of powers
    ``(split_i.pc, split_i.pp)``; ``y_i`` carries unit noise and
    ``yh_i = y_i + q_i`` with an independent quantization noise of power
    ``delta_i``.
    """
    if delta1 < 0 or delta2 < 0:
        raise ValueError("quantization distortions must be >= 0")
    powers = np.array([split1.pc, split1.pp, split2.pc, split2.pp], dtype=float)
    h = gains.matrix()
    # y = A s + z, with s = (x1c, x1p, x2c, x2p)
    a = np.array(
        [
            [h[0, 0], h[0, 0], h[0, 1], h[0, 1]],
            [h[1, 0], h[1, 0], h[1, 1], h[1, 1]],
        ]
    )
    ps = np.diag(powers).astype(complex)
    cov_sy = ps @ a.conj().T  # E[s y^H]
    cov_yy = a @ ps @ a.conj().T + np.eye(2)
    m = np.zeros((8, 8), dtype=complex)
    m[:4, :4] = ps
    for blk_r, blk_c in ((slice(4, 6), slice(4, 6)), (slice(4, 6), slice(6, 8)),
                         (slice(6, 8), slice(4, 6)), (slice(6, 8), slice(6, 8))):
        m[blk_r, blk_c] = cov_yy
    m[6, 6] += delta1
    m[7, 7] += delta2
    m[:4, 4:6] = m[:4, 6:8] = cov_sy
    m[4:6, :4] = m[6:8, :4] = cov_sy.conj().T
    return CovarianceModel(SIGNALS, m)
