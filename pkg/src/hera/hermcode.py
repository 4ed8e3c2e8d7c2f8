"""One-point Hermitian codes C(m P_inf) and brute-force checks on them."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from hera import kernels
from hera.curve import CurveTable, curve_enumerate
from hera.errors import EnumerationError, ParameterError, ShapeError
from hera.field import FieldMatrix, FieldSpec, mat_rank, rref
from hera.rrspace import Monomial, eval_matrix, max_design, monomial_basis, rr_dim

ENUMERATION_BITS = 24


def dual_m(q: int, m: int) -> int:
    s = max_design(q)
    if not 0 <= m <= s:
        raise ParameterError("range", f"m={m} outside [0, {s}] for q={q}")
    return s - m


@dataclass(frozen=True)
class HermitianCode:
    q: int
    m: int
    table: CurveTable
    basis: tuple[Monomial, ...]
    gen: FieldMatrix

    @property
    def spec(self) -> FieldSpec:
        return self.table.spec

    @property
    def n(self) -> int:
        return self.q**3

    @property
    def s(self) -> int:
        return max_design(self.q)

    @property
    def d_star(self) -> int:
        return self.n - self.m

    @property
    def dim(self) -> int:
        return rr_dim(self.q, self.m)

    @property
    def m_perp(self) -> int | None:
        return self.s - self.m if 0 <= self.m <= self.s else None

    @property
    def self_orthogonal(self) -> bool:
        return 2 * self.m <= self.s

    @property
    def self_dual(self) -> bool:
        return 2 * self.m == self.s

    def info(self) -> dict:
        return {
            "q": self.q,
            "m": self.m,
            "n": self.n,
            "k": self.dim,
            "d_star": self.d_star,
            "m_perp": self.m_perp,
            "genus": self.table.genus,
            "self_orthogonal": self.self_orthogonal,
            "self_dual": self.self_dual,
        }


def code_build(spec: FieldSpec, m: int, table: CurveTable | None = None) -> HermitianCode:
    """Generator rows are the I(m) monomials evaluated at every affine point.

    Rows stay the raw monomial evaluations even when they become dependent
    (m >= q^3); use ``mat_rank(code.gen)`` or ``code.dim`` for the dimension.
    """
    table = table or curve_enumerate(spec)
    basis = tuple(monomial_basis(table.q, m))
    gen = eval_matrix(spec, basis, table.points).T
    return HermitianCode(table.q, m, table, basis, gen)


def dual_check(code_a: HermitianCode, code_b: HermitianCode) -> bool:
    if code_a.q != code_b.q or code_a.spec != code_b.spec:
        raise ShapeError("codes over different curves")
    if code_a.table.points != code_b.table.points:
        raise ShapeError("codes use different point orders")
    if not code_a.basis or not code_b.basis:
        return True
    return (code_a.gen @ code_b.gen.T).is_zero()


def _independent_rows(gen: FieldMatrix) -> np.ndarray:
    if gen.rows == 0:
        return gen.data
    if mat_rank(gen) == gen.rows:
        return gen.data
    reduced, pivots = rref(gen)
    return reduced.data[: len(pivots)]


def min_weight_codeword(code: HermitianCode, chunk: int = 1 << 15) -> tuple[int, np.ndarray]:
    """Minimum Hamming weight over nonzero codewords, with the first witness.

    Messages are enumerated lexicographically (first coordinate most
    significant); the witness is the first message reaching the minimum.
    """
    spec = code.spec
    rows = _independent_rows(code.gen)
    k = rows.shape[0]
    if k == 0:
        raise ValueError("the zero code has no nonzero codeword")
    bits = k * math.log2(spec.order)
    if bits > ENUMERATION_BITS:
        raise EnumerationError(f"{spec.order}^{k} messages exceeds 2^{ENUMERATION_BITS}")
    total = spec.order**k
    place = spec.order ** np.arange(k - 1, -1, -1, dtype=np.int64)
    best, witness = code.n + 1, None
    for start in range(1, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        msgs = (idx[:, None] // place[None, :]) % spec.order
        words = kernels.matmul(msgs, rows, spec.add, spec.mul)
        weights = np.count_nonzero(words, axis=1)
        pos = int(np.argmin(weights))
        if weights[pos] < best:
            best, witness = int(weights[pos]), words[pos].copy()
    return best, witness


def min_distance_bruteforce(code: HermitianCode) -> int:
    return min_weight_codeword(code)[0]
