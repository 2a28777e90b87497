"""Independent reference computations used as test oracles.

These deliberately avoid the package's code paths: the closed-form bounds are
re-evaluated in 50-digit arithmetic and LDC decodability is decided by
enumerating every message pair.
"""

import itertools

from mpmath import log, mp, mpf

mp.dps = 50


def _lg(x):
    return log(x, 2)


def _pos(x):
    return x if x > 0 else mpf(0)


def lemma1_terms(snr, inr, det_sq, cb):
    S, I, D, C = (mpf(v) for v in (snr, inr, det_sq, cb))
    if S <= I:
        return [
            _lg(1 + S) + _pos(C - 1),
            _lg(1 + S + I) - 1,
            (_lg(1 + S + I) + _pos(C - 1)) / 2,
            (_lg(1 + 2 * S + 2 * I + D) - 1) / 2,
        ]
    return [
        _lg(1 + S / I + I) + _pos(C - _lg(3)) - 1,
        _lg(1 + S) - 2,
        (_lg(1 + S + I) + _lg(2 + S / I) + _pos(C - _lg(3)) - 2) / 2,
        (_lg(1 + 2 * S + 2 * I + D) - 3) / 2,
    ]


def lemma2_terms(snr, inr, det_sq, cb):
    S, I, D, C = (mpf(v) for v in (snr, inr, det_sq, cb))
    return [
        _lg(1 + S) + min(C, _lg(1 + I / (1 + S))),
        _lg(1 + I + S / (1 + I)) + C,
        _lg(1 + S + I) / 2 + _lg(1 + S / (1 + I)) / 2 + C / 2,
        _lg(1 + 2 * S + 2 * I + D) / 2,
    ]


def ldc_receive(q, n_direct, x_direct, n_cross, x_cross):
    """One receiver of the deterministic channel on MSB-first integers."""
    return (x_direct >> (q - n_direct)) ^ (x_cross >> (q - n_cross))


def bits_to_int(bits):
    out = 0
    for b in bits:
        out = (out << 1) | b
    return out


def decodable_by_enumeration(config, scheme):
    """Each receiver's own message is a function of what it observes (all message pairs)."""
    q = config.q

    def encode(G, m):
        return bits_to_int([sum(g * b for g, b in zip(row, m)) % 2 for row in G])

    def forward(F, y):
        ybits = [(y >> (q - 1 - j)) & 1 for j in range(q)]
        return tuple(sum(f * b for f, b in zip(row, ybits)) % 2 for row in F)

    seen1, seen2 = {}, {}
    for m1 in itertools.product((0, 1), repeat=scheme.r1):
        for m2 in itertools.product((0, 1), repeat=scheme.r2):
            x1, x2 = encode(scheme.G1, m1), encode(scheme.G2, m2)
            y1 = ldc_receive(q, config.n11, x1, config.n12, x2)
            y2 = ldc_receive(q, config.n22, x2, config.n21, x1)
            o1 = (y1, forward(scheme.F21, y2))
            o2 = (y2, forward(scheme.F12, y1))
            if seen1.setdefault(o1, m1) != m1 or seen2.setdefault(o2, m2) != m2:
                return False
    return True
