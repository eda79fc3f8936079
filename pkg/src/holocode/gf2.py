"""Dense GF(2) linear algebra on uint8 bit-matrices."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np


def as_bits(M) -> np.ndarray:
    A = np.asarray(M, dtype=np.uint8)
    if A.ndim == 1:
        A = A[None, :]
    return A & 1


def rref(M, columns: Sequence[int] | None = None) -> tuple[np.ndarray, int, list[int]]:
    """Reduced row echelon form over GF(2).

    Pivots are searched only in ``columns`` (in the given order) when supplied,
    so the rank returned is the rank of the column restriction. The full rows
    are carried along, which keeps the row space intact.

    Returns ``(R, rank, pivots)``; the first ``rank`` rows of ``R`` carry the
    pivots in order.
    """
    R = as_bits(M).copy()
    m, n = R.shape
    cols = range(n) if columns is None else columns
    pivots: list[int] = []
    r = 0
    for c in cols:
        if r == m:
            break
        hits = np.flatnonzero(R[r:, c]) + r
        if hits.size == 0:
            continue
        p = hits[0]
        if p != r:
            R[[r, p]] = R[[p, r]]
        mask = R[:, c].astype(bool)
        mask[r] = False
        R[mask] ^= R[r]
        pivots.append(int(c))
        r += 1
    return R, r, pivots


def rank(M, columns: Sequence[int] | None = None) -> int:
    A = as_bits(M)
    if A.size == 0:
        return 0
    if columns is not None:
        A = A[:, list(columns)]
    return rref(A)[1]


def row_space_equal(A, B) -> bool:
    A, B = as_bits(A), as_bits(B)
    if A.shape[1] != B.shape[1]:
        return False
    ra = rank(A)
    return ra == rank(B) == rank(np.vstack([A, B]))


def in_row_space(M, v) -> bool:
    M = as_bits(M)
    return rank(M) == rank(np.vstack([M, as_bits(v)]))


def nullspace(M) -> np.ndarray:
    """Basis (rows) of the right nullspace {v : M v = 0}."""
    A = as_bits(M)
    m, n = A.shape
    R, r, piv = rref(A)
    free = [c for c in range(n) if c not in set(piv)]
    basis = np.zeros((len(free), n), dtype=np.uint8)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, p in enumerate(piv):
            basis[k, p] = R[i, f]
    return basis


def left_nullspace(M) -> np.ndarray:
    """Basis (rows) of {c : c M = 0}."""
    return nullspace(as_bits(M).T)


def solve(M, b) -> np.ndarray | None:
    """One solution x of M x = b, free variables set to zero; None if inconsistent."""
    A = as_bits(M)
    b = np.asarray(b, dtype=np.uint8).reshape(-1) & 1
    m, n = A.shape
    R, r, piv = rref(np.hstack([A, b[:, None]]), columns=range(n))
    if R[r:, n].any():
        return None
    x = np.zeros(n, dtype=np.uint8)
    for i, p in enumerate(piv):
        x[p] = R[i, n]
    return x


def pack_rows(M) -> np.ndarray:
    """Pack bit rows into uint64 words (little-endian bit order within words)."""
    A = as_bits(M)
    m, n = A.shape
    words = (n + 63) // 64
    padded = np.zeros((m, words * 64), dtype=np.uint8)
    padded[:, :n] = A
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").reshape(m, words)
