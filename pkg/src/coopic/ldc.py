"""Linear deterministic model of the interference channel with conferencing receivers.

Signals are bit vectors of ``q`` levels, most significant level first. A link
with ``n`` levels passes the top ``n`` levels of its input, shifted down by
``q - n``; superposition at a receiver is bitwise XOR.

Schemes are linear: transmitters put fresh message bits on levels through
``G1``/``G2`` (``q x r_i``), receiver 1 sends ``F12 @ y1`` (``k12`` bits) to
receiver 2 and receiver 2 sends ``F21 @ y2`` to receiver 1, both computed
from the same channel use. A receiver decodes its own message by a linear
solve on its received vector stacked with the incoming conference bits.

Internally a matrix is a list of int rows (see :mod:`coopic.gf2`); bit ``j``
of a level-indexed row is level ``j`` counting from the top.
"""

from __future__ import annotations

import functools
import itertools
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import gf2
from .gdof import gdof_formula

MAX_LEVELS = 32
SEARCH_MAX_LEVELS = 4
SEARCH_MAX_CONFERENCE = 2

FIXTURE_DIR = Path(__file__).parent / "fixtures"


@dataclass(frozen=True)
class LdcConfig:
    n11: int
    n12: int
    n21: int
    n22: int
    k12: int = 0
    k21: int = 0

    def __post_init__(self):
        for name in ("n11", "n12", "n21", "n22", "k12", "k21"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or isinstance(v, bool) or v < 0:
                raise ValueError(f"{name} must be a nonnegative integer, got {v!r}")
        if self.q > MAX_LEVELS:
            raise ValueError(f"at most {MAX_LEVELS} levels supported, got q={self.q}")
        if max(self.k12, self.k21) > MAX_LEVELS:
            raise ValueError("conference rate too large")

    @classmethod
    def symmetric(cls, n: int, m: int, k: int = 0) -> "LdcConfig":
        return cls(n, m, m, n, k, k)

    @property
    def q(self) -> int:
        return max(self.n11, self.n12, self.n21, self.n22)

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("n11", "n12", "n21", "n22", "k12", "k21")}


def shift_down(x: Sequence[int], s: int) -> list:
    """Drop the lowest ``s`` levels of ``x`` and pad the top with zeros."""
    q = len(x)
    s = min(s, q)
    return [0] * s + list(x[: q - s])


def ldc_output(config: LdcConfig, x1: Sequence[int], x2: Sequence[int]):
    """Received vectors ``(y1, y2)`` for transmit vectors ``x1``, ``x2`` (MSB first)."""
    q = config.q
    if len(x1) != q or len(x2) != q:
        raise ValueError(f"transmit vectors must have length q={q}, got {len(x1)} and {len(x2)}")
    for v in (*x1, *x2):
        if v not in (0, 1):
            raise ValueError(f"not a bit: {v!r}")

    def rx(na, xa, nb, xb):
        a, b = shift_down(xa, q - na), shift_down(xb, q - nb)
        return [u ^ v for u, v in zip(a, b)]

    return rx(config.n11, x1, config.n12, x2), rx(config.n21, x1, config.n22, x2)


def _rows_to_ints(rows) -> list:
    return [gf2.from_bits(r) for r in rows]


@dataclass(frozen=True)
class LdcScheme:
    """A linear scheme; matrices are tuples of bit-rows.

    ``G1`` is ``q x r1`` (row = level, column = message bit), ``F12`` is
    ``k12 x q`` (row = conference bit, column = level of ``y1``).
    """

    r1: int
    r2: int
    G1: tuple
    G2: tuple
    F12: tuple = ()
    F21: tuple = ()

    def __post_init__(self):
        for name in ("G1", "G2", "F12", "F21"):
            object.__setattr__(self, name, tuple(tuple(int(b) for b in row) for row in getattr(self, name)))

    def validate(self, config: LdcConfig):
        q = config.q
        shapes = {
            "G1": (q, self.r1),
            "G2": (q, self.r2),
            "F12": (config.k12, q),
            "F21": (config.k21, q),
        }
        for name, (rows, cols) in shapes.items():
            mat = getattr(self, name)
            if len(mat) != rows or any(len(r) != cols for r in mat):
                raise ValueError(f"{name} must be {rows}x{cols} for config {config}")
            if any(b not in (0, 1) for r in mat for b in r):
                raise ValueError(f"{name} has non-binary entries")

    @classmethod
    def level_activation(cls, config: LdcConfig, levels1, levels2, F12=None, F21=None):
        """Fresh message bits on the given 0-based levels (top = 0), in level order."""
        q = config.q
        g = []
        for levels in (levels1, levels2):
            levels = sorted(levels)
            g.append(tuple(tuple(int(lvl == l) for lvl in levels) for l in range(q)))
        F12 = F12 if F12 is not None else tuple((0,) * q for _ in range(config.k12))
        F21 = F21 if F21 is not None else tuple((0,) * q for _ in range(config.k21))
        return cls(len(levels1), len(levels2), g[0], g[1], F12, F21)

    def to_json(self, config: LdcConfig, **extra) -> dict:
        out = {
            "config": config.as_dict(),
            "r1": self.r1,
            "r2": self.r2,
            "G1": [list(r) for r in self.G1],
            "G2": [list(r) for r in self.G2],
            "F12": [list(r) for r in self.F12],
            "F21": [list(r) for r in self.F21],
        }
        out.update(extra)
        return out


def dump_fixture(data: dict) -> str:
    """JSON text for a fixture with one bit-row per line."""
    text = json.dumps(data, indent=2)
    # collapse innermost integer lists onto a single line
    return re.sub(r"\[\s*((?:-?\d+,\s*)*-?\d+)\s*\]",
                  lambda m: "[" + ", ".join(m.group(1).replace(",", " ").split()) + "]", text) + "\n"


def load_fixture(path) -> tuple:
    """Read a scheme fixture; returns ``(config, scheme, raw_dict)``."""
    path = Path(path)
    if not path.exists() and (FIXTURE_DIR / path).exists():
        path = FIXTURE_DIR / path
    raw = json.loads(path.read_text())
    config = LdcConfig(**raw["config"])
    scheme = LdcScheme(raw["r1"], raw["r2"], raw["G1"], raw["G2"], raw.get("F12", []), raw.get("F21", []))
    scheme.validate(config)
    return config, scheme, raw


# --- linear maps over the joint message vector (m1 bits, then m2 bits) ---

def _link_rows(q: int, n: int, g_rows: Sequence[int], offset: int) -> list:
    """Rows of ``shift_down(G m)`` for one link, placed at message-bit ``offset``."""
    s = q - n
    return [0 if j < s else g_rows[j - s] << offset for j in range(q)]


def _received_rows(config: LdcConfig, g1: Sequence[int], g2: Sequence[int], r1: int):
    q = config.q
    y1 = [a ^ b for a, b in zip(_link_rows(q, config.n11, g1, 0), _link_rows(q, config.n12, g2, r1))]
    y2 = [a ^ b for a, b in zip(_link_rows(q, config.n21, g1, 0), _link_rows(q, config.n22, g2, r1))]
    return y1, y2


def observation_maps(scheme: LdcScheme, config: LdcConfig):
    """Rows mapping (m1, m2) to ``[y1; F21 y2]`` and ``[y2; F12 y1]``."""
    g1, g2 = _rows_to_ints(scheme.G1), _rows_to_ints(scheme.G2)
    y1, y2 = _received_rows(config, g1, g2, scheme.r1)
    obs1 = y1 + gf2.compose(_rows_to_ints(scheme.F21), y2)
    obs2 = y2 + gf2.compose(_rows_to_ints(scheme.F12), y1)
    return obs1, obs2


def _own_decodable(obs: Sequence[int], own_mask: int, n_own: int) -> bool:
    other = [r & ~own_mask for r in obs]
    return gf2.rank(obs) == n_own + gf2.rank(other)


def _masks(scheme_r1: int, scheme_r2: int):
    m1 = (1 << scheme_r1) - 1
    return m1, ((1 << scheme_r2) - 1) << scheme_r1


def check_decodable(scheme: LdcScheme, config: LdcConfig) -> bool:
    """True iff each receiver's observations determine its own message uniquely."""
    scheme.validate(config)
    obs1, obs2 = observation_maps(scheme, config)
    own1, own2 = _masks(scheme.r1, scheme.r2)
    return _own_decodable(obs1, own1, scheme.r1) and _own_decodable(obs2, own2, scheme.r2)


@dataclass(frozen=True)
class SimReport:
    trials: int
    decode_errors: tuple
    achieved_rates: tuple
    sum_rate: int

    def as_dict(self) -> dict:
        return {
            "trials": self.trials,
            "decode_errors": list(self.decode_errors),
            "achieved_rates": list(self.achieved_rates),
            "sum_rate": self.sum_rate,
        }


def _bits_matrix(rows: Sequence[int], n_cols: int) -> np.ndarray:
    return np.array([gf2.to_bits(r, n_cols) for r in rows], dtype=np.uint8).reshape(len(rows), n_cols)


def _shift_matrix(q: int, n: int) -> np.ndarray:
    s = q - n
    h = np.zeros((q, q), dtype=np.uint8)
    for j in range(s, q):
        h[j, j - s] = 1
    return h


def simulate(scheme: LdcScheme, config: LdcConfig, trials: int = 10_000, seed: int = 0) -> SimReport:
    """Run the scheme on uniformly random messages and count decoding errors per user.

    The channel and the forwarding are applied to the sampled signals; each
    decoder returns one solution of its linear observation system, which is
    the true message whenever the scheme is decodable.
    """
    scheme.validate(config)
    q, r1, r2 = config.q, scheme.r1, scheme.r2
    rng = np.random.default_rng(seed)
    m1 = rng.integers(0, 2, size=(trials, r1), dtype=np.uint8)
    m2 = rng.integers(0, 2, size=(trials, r2), dtype=np.uint8)
    G1 = np.array(scheme.G1, dtype=np.uint8).reshape(q, r1)
    G2 = np.array(scheme.G2, dtype=np.uint8).reshape(q, r2)
    F12 = np.array(scheme.F12, dtype=np.uint8).reshape(config.k12, q)
    F21 = np.array(scheme.F21, dtype=np.uint8).reshape(config.k21, q)
    x1 = (m1 @ G1.T) % 2
    x2 = (m2 @ G2.T) % 2
    y1 = (x1 @ _shift_matrix(q, config.n11).T + x2 @ _shift_matrix(q, config.n12).T) % 2
    y2 = (x1 @ _shift_matrix(q, config.n21).T + x2 @ _shift_matrix(q, config.n22).T) % 2
    u12 = (y1 @ F12.T) % 2
    u21 = (y2 @ F21.T) % 2

    obs1, obs2 = observation_maps(scheme, config)
    errors = []
    for obs_rows, observed, own in ((obs1, np.hstack([y1, u21]), slice(0, r1)),
                                    (obs2, np.hstack([y2, u12]), slice(r1, r1 + r2))):
        solver = _bits_matrix(gf2.particular_solver(obs_rows, r1 + r2), len(obs_rows))
        decoded = (observed.astype(np.int64) @ solver.T.astype(np.int64)) % 2
        truth = np.hstack([m1, m2])
        errors.append(int(np.any(decoded[:, own] != truth[:, own], axis=1).sum()))
    return SimReport(trials, tuple(errors), (r1, r2), r1 + r2)


# --- exhaustive search ---
#
# Decodability depends on an encoder only through the column space of G and on
# a forwarding map only through the row space of F, so both are enumerated as
# subspaces (canonical reduced bases), which keeps the search exact.

ENCODER_CLASSES = ("activation", "linear")


def _popcount(x: int) -> int:
    return bin(x).count("1")


@functools.lru_cache(maxsize=None)
def subspaces(n_bits: int, max_dim: int, allowed: Optional[int] = None) -> tuple:
    """All subspaces of GF(2)^n_bits inside ``allowed`` with dimension <= max_dim.

    Each is a canonical basis (tuple of ints); ordered by dimension, then basis.
    """
    allowed = (1 << n_bits) - 1 if allowed is None else allowed
    vectors = [v for v in range(1, 1 << n_bits) if v & ~allowed == 0]
    layer = {()}
    out = [()]
    for _ in range(max_dim):
        nxt = set()
        for basis in layer:
            for v in vectors:
                if not gf2.in_rowspan(v, basis):
                    reduced, _, _ = gf2.rref(list(basis) + [v], n_bits)
                    nxt.add(tuple(sorted(reduced)))
        if not nxt:
            break
        out.extend(sorted(nxt))
        layer = nxt
    return tuple(out)


def _activation_encoders(q: int) -> list:
    """Level-activation encoders, by level mask ascending; columns are unit level vectors."""
    return [tuple(1 << j for j in range(q) if mask >> j & 1) for mask in range(1 << q)]


def _linear_encoders(q: int) -> list:
    return list(subspaces(q, q))


def _encoder_rows(q: int, columns: Sequence[int]) -> list:
    """Level-indexed rows of G from its columns (level masks)."""
    return [sum(((c >> j) & 1) << i for i, c in enumerate(columns)) for j in range(q)]


def _forwarding_spaces(q: int, k: int, allowed: Optional[int] = None) -> list:
    """Forwarding maps as bases of dimension <= k, zero-padded to k rows."""
    return [basis + (0,) * (k - len(basis)) for basis in subspaces(q, k, allowed)]


def _guard(config: LdcConfig):
    if config.q > SEARCH_MAX_LEVELS or max(config.k12, config.k21) > SEARCH_MAX_CONFERENCE:
        size = (2 ** config.q) ** 2 * ((2 ** config.q) ** config.k12 + (2 ** config.q) ** config.k21)
        raise ValueError(
            f"search space too large for {config}: need q <= {SEARCH_MAX_LEVELS} and "
            f"k <= {SEARCH_MAX_CONFERENCE} (about {size} candidate checks)"
        )


def _first_forwarding(obs_own: list, helper_rows: list, own_mask: int, n_own: int, candidates):
    for fwd in candidates:
        if _own_decodable(obs_own + gf2.compose(fwd, helper_rows), own_mask, n_own):
            return fwd
    return None


@dataclass(frozen=True)
class _Found:
    cols1: tuple
    cols2: tuple
    f12: tuple
    f21: tuple

    @property
    def point(self) -> tuple:
        return len(self.cols1), len(self.cols2)

    def scheme(self, config: LdcConfig) -> "LdcScheme":
        q = config.q

        def g(cols):
            return tuple(tuple((c >> j) & 1 for c in cols) for j in range(q))

        def f(rows):
            return tuple(tuple(gf2.to_bits(r, q)) for r in rows)

        return LdcScheme(len(self.cols1), len(self.cols2), g(self.cols1), g(self.cols2),
                         f(self.f12), f(self.f21))


def _search(config, enc1, enc2, *, max_r1=None, max_r2=None, r2_min=0,
            fwd21=None, skip=None) -> list:
    """Every decodable (encoder1, encoder2) pair, in enumeration order, with forwarding.

    ``fwd21(cols1, cols2, y2_rows)`` may restrict receiver 2's forwarding
    candidates; ``skip(point)`` prunes rate pairs that need no search.
    """
    q = config.q
    fwd12_all = _forwarding_spaces(q, config.k12)
    fwd21_all = _forwarding_spaces(q, config.k21)
    found = []
    for cols1 in enc1:
        r1 = len(cols1)
        if max_r1 is not None and r1 > max_r1:
            continue
        g1 = _encoder_rows(q, cols1)
        for cols2 in enc2:
            r2 = len(cols2)
            if (max_r2 is not None and r2 > max_r2) or r2 < r2_min:
                continue
            if skip is not None and skip((r1, r2)):
                continue
            y1, y2 = _received_rows(config, g1, _encoder_rows(q, cols2), r1)
            own1, own2 = _masks(r1, r2)
            cands = fwd21_all if fwd21 is None else fwd21(cols1, cols2, y2)
            f21 = _first_forwarding(y1, y2, own1, r1, cands)
            if f21 is None:
                continue
            f12 = _first_forwarding(y2, y1, own2, r2, fwd12_all)
            if f12 is None:
                continue
            found.append(_Found(cols1, cols2, tuple(f12), tuple(f21)))
    return found


def symmetric_point(points) -> tuple:
    """Largest R with (R, R) in the time-sharing hull of a downward-closed point set.

    Returns ``(R, [(weight, point), ...])``.
    """
    best = (Fraction(0), [(Fraction(1), (0, 0))])
    pts = sorted(set(points))
    for p in pts:
        if min(p) > best[0]:
            best = (Fraction(min(p)), [(Fraction(1), p)])
    for p, s in itertools.combinations(pts, 2):
        # t p + (1 - t) s on the diagonal
        denom = (p[0] - p[1]) - (s[0] - s[1])
        if denom == 0:
            continue
        t = Fraction(s[1] - s[0], denom)
        if 0 < t < 1:
            r = t * p[0] + (1 - t) * s[0]
            if r > best[0]:
                best = (r, [(t, p), (1 - t, s)])
    return best


@dataclass(frozen=True)
class SearchResult:
    best_sum: int
    best_sym: Fraction
    witness: LdcScheme
    # schemes time-shared (with weights) to reach best_sym
    sym_witnesses: tuple
    region: tuple  # achieved (r1, r2) pairs, sorted

    def as_dict(self, config: LdcConfig) -> dict:
        return {
            "config": config.as_dict(),
            "best_sum": self.best_sum,
            "best_sym": float(self.best_sym),
            "best_sym_exact": str(self.best_sym),
            "witness": self.witness.to_json(config),
            "sym_witnesses": [
                {"weight": str(w), "scheme": s.to_json(config)} for w, s in self.sym_witnesses
            ],
            "region": [list(p) for p in self.region],
        }


def brute_force_search(
    config: LdcConfig,
    max_r1: Optional[int] = None,
    max_r2: Optional[int] = None,
    encoders: str = "linear",
) -> SearchResult:
    """Best sum rate and symmetric rate over linear one-shot schemes.

    Level-activation encoders are searched first (masks ascending), so
    witnesses look like the usual level diagrams whenever such a scheme is
    optimal. With ``encoders="linear"`` every GF(2) precoder is then tried for
    rate pairs not already reached. The symmetric rate allows time sharing,
    so it can be a half-integer.
    """
    _guard(config)
    if encoders not in ENCODER_CLASSES:
        raise ValueError(f"encoders must be one of {ENCODER_CLASSES}, got {encoders!r}")
    q = config.q
    act = _activation_encoders(q)
    found = _search(config, act, act, max_r1=max_r1, max_r2=max_r2)
    if encoders == "linear":
        reached = {f.point for f in found}

        def dominated(point):
            return any(p[0] >= point[0] and p[1] >= point[1] for p in reached)

        lin = _linear_encoders(q)
        for cols1 in lin:
            # one pass per user-1 encoder so `reached` tightens as we go
            more = _search(config, [cols1], lin, max_r1=max_r1, max_r2=max_r2, skip=dominated)
            found.extend(more)
            reached.update(f.point for f in more)

    by_point = {}
    witness = None
    for f in found:
        by_point.setdefault(f.point, f)
        if witness is None or sum(f.point) > sum(witness.point):
            witness = f
    sym, combo = symmetric_point(by_point)
    return SearchResult(
        best_sum=sum(witness.point),
        best_sym=sym,
        witness=witness.scheme(config),
        sym_witnesses=tuple((w, by_point[p].scheme(config)) for w, p in combo),
        region=tuple(sorted(by_point)),
    )


def ldc_sym_capacity_formula(n: int, m: int, k: int):
    """``n * d(m/n, k/n)``; returns ``(value, phase_caveat)`` with exact arithmetic."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    point = gdof_formula(Fraction(m, n), Fraction(k, n))
    return n * point.d, point.phase_sensitive


# --- one-round quantization vs decode-and-forward at receiver 2 ---

SCENARIO_MODES = ("one_round_quantize", "decode_forward")


def quantizer_levels(config: LdcConfig) -> int:
    """Levels of ``y2`` above receiver 2's private-signal level, as a mask.

    User 2's private levels are the ones receiver 1 does not hear; they land on
    the bottom ``n22 - n12`` levels of ``y2`` and are quantized away.
    """
    q = config.q
    private = max(0, config.n22 - config.n12)
    keep = q - private
    return (1 << keep) - 1


def _decode_forward_candidates(config: LdcConfig):
    k = config.k21

    def candidates(cols1, cols2, y2_rows):
        n_msg = len(cols1) + len(cols2)
        decodable = 0
        for j in range(n_msg):
            if gf2.in_rowspan(1 << j, y2_rows):
                decodable |= 1 << j
        for basis in subspaces(n_msg, k, decodable):
            # each decoded-bit function is also a linear function of the levels of y2
            rows = tuple(gf2.first_combination(r, y2_rows) for r in basis)
            yield rows + (0,) * (k - len(rows))

    return candidates


def scenario_compare(config: LdcConfig, mode: str, r2: int = 0) -> int:
    """Largest R1 over level activations when receiver 2's forwarding is restricted.

    User 2 must still be served at rate at least ``r2``. ``one_round_quantize``
    lets receiver 2 forward linear functions of its levels above the private
    signal level only; ``decode_forward`` lets it forward linear functions of
    the message bits it can decode from ``y2`` by itself.
    """
    _guard(config)
    q = config.q
    if mode == "one_round_quantize":
        allowed = _forwarding_spaces(q, config.k21, quantizer_levels(config))

        def cands(cols1, cols2, y2_rows):
            return allowed

    elif mode == "decode_forward":
        cands = _decode_forward_candidates(config)
    else:
        raise ValueError(f"mode must be one of {SCENARIO_MODES}, got {mode!r}")
    act = _activation_encoders(q)
    found = _search(config, act, act, r2_min=r2, fwd21=cands)
    return max((f.point[0] for f in found), default=0)
