"""Monomial bases of the Riemann-Roch spaces L(m P_inf) and their evaluation.

Functions are stored as one coefficient block per basis monomial, so a
function whose coefficients are a x c blocks evaluates to an a x c matrix.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from hera import kernels
from hera.curve import CurvePoint
from hera.errors import FieldError, ShapeError
from hera.field import FieldMatrix, FieldSpec, format_element


@dataclass(frozen=True)
class Monomial:
    i: int
    j: int
    q: int

    @property
    def pole_order(self) -> int:
        return self.i * self.q + self.j * (self.q + 1)

    def __str__(self) -> str:
        parts = []
        for var, e in (("x", self.i), ("y", self.j)):
            if e == 1:
                parts.append(var)
            elif e > 1:
                parts.append(f"{var}^{e}")
        return "".join(parts) or "1"


def monomial_basis(q: int, m: int) -> list[Monomial]:
    """I(m) sorted by pole order (distinct for the basis, so the order is total)."""
    if m < 0:
        return []
    basis = [
        Monomial(i, j, q)
        for j in range(q)
        for i in range((m - j * (q + 1)) // q + 1)
        if i * q + j * (q + 1) <= m
    ]
    return sorted(basis, key=lambda mo: (mo.pole_order, mo.j))


def code_length(q: int) -> int:
    return q**3


def max_design(q: int) -> int:
    """s = q^3 + q^2 - q - 2; C(m P_inf) is the whole space beyond it."""
    return q**3 + q**2 - q - 2


def rr_dim(q: int, m: int) -> int:
    """Dimension of the evaluation code C(m P_inf) on all q^3 affine points.

    |I(m)| below q^3, q^3 - |I(s - m)| from q^3 up to s (at m = q^3 the
    function x^(q^2) - x vanishes on every point, so |I(q^3)| overcounts by one),
    0 for m < 0 and q^3 beyond s.
    """
    n, s = q**3, max_design(q)
    if m < 0:
        return 0
    if m < n:
        return len(monomial_basis(q, m))
    if m <= s:
        return n - len(monomial_basis(q, s - m))
    return n


def eval_matrix(spec: FieldSpec, basis: Sequence[Monomial], points: Sequence[CurvePoint]) -> FieldMatrix:
    """Rows are points, columns basis monomials: entry = x^i y^j at the point."""
    if not basis or not points:
        return FieldMatrix.zeros(spec, len(points), len(basis))
    alphas = np.array([p.alpha.value for p in points], dtype=np.int64)
    betas = np.array([p.beta.value for p in points], dtype=np.int64)
    max_i = max(mo.i for mo in basis)
    max_j = max(mo.j for mo in basis)
    xp = [np.ones_like(alphas)]
    for _ in range(max_i):
        xp.append(spec.mul[xp[-1], alphas])
    yp = [np.ones_like(betas)]
    for _ in range(max_j):
        yp.append(spec.mul[yp[-1], betas])
    cols = [spec.mul[xp[mo.i], yp[mo.j]] for mo in basis]
    return FieldMatrix._wrap(spec, np.stack(cols, axis=1))


@dataclass(frozen=True)
class RRFunction:
    """Element of L(m P_inf): coefficient block per monomial of I(m)."""

    spec: FieldSpec
    q: int
    m: int
    basis: tuple[Monomial, ...]
    coeffs: tuple[FieldMatrix, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != len(self.basis):
            raise ShapeError(f"{len(self.coeffs)} coefficients for {len(self.basis)} monomials")
        shapes = {c.shape for c in self.coeffs}
        if len(shapes) > 1:
            raise ShapeError(f"coefficient blocks disagree in shape: {sorted(shapes)}")
        if any(c.spec != self.spec for c in self.coeffs):
            raise FieldError("coefficient blocks over different fields")

    @classmethod
    def from_stacked(
        cls, spec: FieldSpec, q: int, m: int, stacked: np.ndarray, block: tuple[int, int] = (1, 1)
    ) -> RRFunction:
        """Build from an array of shape (|I(m)|, rows*cols)."""
        basis = tuple(monomial_basis(q, m))
        coeffs = tuple(FieldMatrix._wrap(spec, row.reshape(block)) for row in np.asarray(stacked))
        return cls(spec, q, m, basis, coeffs)

    @classmethod
    def scalar(cls, spec: FieldSpec, q: int, m: int, values: Sequence[int]) -> RRFunction:
        return cls.from_stacked(spec, q, m, np.asarray(values, dtype=np.int64).reshape(-1, 1))

    @property
    def block_shape(self) -> tuple[int, int]:
        return self.coeffs[0].shape if self.coeffs else (1, 1)

    @property
    def stacked(self) -> np.ndarray:
        r, c = self.block_shape
        if not self.coeffs:
            return np.zeros((0, r * c), dtype=np.int64)
        return np.stack([b.data.reshape(-1) for b in self.coeffs])

    def scalar_coeffs(self) -> list[int]:
        if self.block_shape != (1, 1):
            raise ShapeError("not a scalar function")
        return [int(b.data[0, 0]) for b in self.coeffs]

    def __call__(self, point: CurvePoint) -> FieldMatrix:
        return rr_eval(self, point)

    def evaluate_many(self, points: Sequence[CurvePoint]) -> np.ndarray:
        """Values at several points as an array of shape (len(points), rows, cols)."""
        r, c = self.block_shape
        ev = eval_matrix(self.spec, self.basis, points)
        flat = kernels.matmul(ev.data, self.stacked, self.spec.add, self.spec.mul)
        return flat.reshape(len(points), r, c)

    def display(self, var: str = "z") -> str:
        """Sum of ``coefficient*monomial`` terms for scalar functions."""
        terms = []
        for mo, v in zip(self.basis, self.scalar_coeffs()):
            if not v:
                continue
            coef = format_element(self.spec.element(v), var)
            mono = str(mo)
            if mono == "1":
                terms.append(coef)
            elif v == 1:
                terms.append(mono)
            else:
                terms.append(f"({coef}){mono}" if "+" in coef else f"{coef}{mono}")
        return " + ".join(terms) or "0"


def rr_eval(f: RRFunction, point: CurvePoint) -> FieldMatrix:
    if point.alpha.spec != f.spec:
        raise FieldError("point and function over different fields")
    r, c = f.block_shape
    return FieldMatrix._wrap(f.spec, f.evaluate_many([point])[0].reshape(r, c))


def dump_rrfunction(f: RRFunction) -> str:
    r, c = f.block_shape
    pairs = " ".join(f"{mo.i}:{mo.j}" for mo in f.basis)
    lines = [
        f"# rrfunction q={f.q} m={f.m} block={r}x{c} field={f.spec.header()}",
        f"# basis {pairs}",
    ]
    for mo, block in zip(f.basis, f.coeffs):
        lines.append(f"# {mo.i}:{mo.j}")
        lines += [",".join(str(v) for v in row) for row in block.tolist()]
    return "\n".join(lines) + "\n"


def load_rrfunction(text: str) -> RRFunction:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    head = dict(tok.split("=", 1) for tok in lines[0].lstrip("# ").split()[1:])
    spec = FieldSpec.from_header(head["field"])
    q, m = int(head["q"]), int(head["m"])
    r, c = (int(v) for v in head["block"].split("x"))
    basis = tuple(monomial_basis(q, m))
    declared = [tuple(int(v) for v in tok.split(":")) for tok in lines[1].split()[2:]]
    if declared != [(mo.i, mo.j) for mo in basis]:
        raise ValueError("basis header does not match the canonical I(m) order")
    rows = [ln for ln in lines[2:] if not ln.startswith("#")]
    data = np.array([[int(v) for v in ln.split(",")] for ln in rows], dtype=np.int64)
    data = data.reshape(len(basis), r * c) if len(basis) else np.zeros((0, r * c), dtype=np.int64)
    return RRFunction.from_stacked(spec, q, m, data, (r, c))
