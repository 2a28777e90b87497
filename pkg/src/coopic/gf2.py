"""Small GF(2) linear algebra on int bitsets.

A matrix is a list of ints, one per row; bit ``j`` of a row is column ``j``.
"""

from __future__ import annotations

from typing import List, Optional, Sequence


def rank(rows: Sequence[int]) -> int:
    """Rank over GF(2) by elimination on the lowest set bit."""
    basis = []  # reduced rows, each with a distinct lowest set bit
    for r in rows:
        for b in basis:
            if r & (b & -b):
                r ^= b
        if r:
            basis.append(r)
    return len(basis)


def rref(rows: Sequence[int], n_cols: int):
    """Reduced row echelon form with the row operations that produced it.

    Returns ``(reduced, pivots, ops)`` where ``reduced[i]`` has its pivot at
    column ``pivots[i]`` and ``ops[i]`` is the bitmask of input rows whose XOR
    equals ``reduced[i]``.
    """
    work = list(rows)
    ops = [1 << i for i in range(len(work))]
    pivots: List[int] = []
    r = 0
    for col in range(n_cols):
        bit = 1 << col
        pivot = next((i for i in range(r, len(work)) if work[i] & bit), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        ops[r], ops[pivot] = ops[pivot], ops[r]
        for i in range(len(work)):
            if i != r and work[i] & bit:
                work[i] ^= work[r]
                ops[i] ^= ops[r]
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots, ops[:r]


def in_rowspan(vec: int, rows: Sequence[int]) -> bool:
    return rank(list(rows) + [vec]) == rank(rows)


def particular_solver(rows: Sequence[int], n_cols: int) -> List[int]:
    """Linear map from observations to one solution of ``M m = obs``.

    Returns ``P`` as a list of ``n_cols`` ints over the observation bits: for
    every consistent ``obs``, ``m_j = parity(P[j] & obs)`` solves the system
    (free variables set to 0).
    """
    _, pivots, ops = rref(rows, n_cols)
    solver = [0] * n_cols
    for col, op in zip(pivots, ops):
        solver[col] = op
    return solver


def parity(x: int) -> int:
    return bin(x).count("1") & 1


def mat_vec(rows: Sequence[int], vec: int) -> int:
    """``rows @ vec``; output bit ``i`` is row ``i``."""
    out = 0
    for i, r in enumerate(rows):
        if parity(r & vec):
            out |= 1 << i
    return out


def compose(outer: Sequence[int], inner: Sequence[int]) -> List[int]:
    """Rows of ``outer @ inner``: each outer row picks and XORs rows of ``inner``."""
    out = []
    for row in outer:
        acc = 0
        i = 0
        while row:
            if row & 1:
                acc ^= inner[i]
            row >>= 1
            i += 1
        out.append(acc)
    return out


def to_bits(x: int, n: int) -> List[int]:
    return [(x >> j) & 1 for j in range(n)]


def from_bits(bits: Sequence[int]) -> int:
    out = 0
    for j, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError(f"not a bit: {b!r}")
        out |= b << j
    return out


def first_combination(target: int, rows: Sequence[int]) -> Optional[int]:
    """Bitmask of ``rows`` XOR-ing to ``target``, or None if not in the span."""
    n_cols = max([target.bit_length()] + [r.bit_length() for r in rows])
    reduced, pivots, ops = rref(rows, n_cols)
    combo = 0
    for red, col, op in zip(reduced, pivots, ops):
        if target >> col & 1:
            target ^= red
            combo ^= op
    return combo if target == 0 else None
