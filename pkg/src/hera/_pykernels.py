"""Table-driven dense linear algebra over a small finite field (numpy fallback).

Field elements are their canonical integer encodings. Every routine takes the
field's addition, multiplication, negation and inversion tables, so the same
code serves every GF(p^k) the package builds.
"""

from __future__ import annotations

import numpy as np


def matmul(a: np.ndarray, b: np.ndarray, add: np.ndarray, mul: np.ndarray) -> np.ndarray:
    n, inner = a.shape
    cols = b.shape[1]
    out = np.zeros((n, cols), dtype=np.int64)
    for t in range(inner):
        out = add[out, mul[a[:, t, None], b[None, t, :]]]
    return out


def rref(
    m: np.ndarray,
    add: np.ndarray,
    mul: np.ndarray,
    neg: np.ndarray,
    inv: np.ndarray,
    pivot_cols: int,
) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form, pivoting on the first nonzero entry of each column.

    Only the leading ``pivot_cols`` columns are eligible as pivots; trailing
    columns (an augmented right-hand side) are carried along.
    """
    work = np.array(m, dtype=np.int64, copy=True)
    rows = work.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(pivot_cols):
        if r == rows:
            break
        nz = np.flatnonzero(work[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            work[[r, p]] = work[[p, r]]
        work[r] = mul[inv[work[r, c]], work[r]]
        factors = work[:, c].copy()
        factors[r] = 0
        hit = np.flatnonzero(factors)
        if hit.size:
            scaled = mul[neg[factors[hit]][:, None], work[r][None, :]]
            work[hit] = add[work[hit], scaled]
        pivots.append(c)
        r += 1
    return work, pivots


def rank_many(
    stack: np.ndarray,
    add: np.ndarray,
    mul: np.ndarray,
    neg: np.ndarray,
    inv: np.ndarray,
) -> np.ndarray:
    """Rank of every matrix in a (count, rows, cols) stack."""
    count, _, cols = stack.shape
    out = np.empty(count, dtype=np.int64)
    for idx in range(count):
        _, piv = rref(stack[idx], add, mul, neg, inv, cols)
        out[idx] = len(piv)
    return out
