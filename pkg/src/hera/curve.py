"""Affine rational points of the Hermitian curve y^q + y = x^(q+1) over GF(q^2)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache

from hera.errors import FieldError
from hera.field import FieldElement, FieldSpec


@dataclass(frozen=True)
class CurvePoint:
    alpha: FieldElement
    beta: FieldElement

    @property
    def key(self) -> tuple[int, int]:
        return (self.alpha.value, self.beta.value)

    def __lt__(self, other: CurvePoint) -> bool:
        return self.key < other.key

    def on_curve(self) -> bool:
        q = self.alpha.spec.q
        return self.beta**q + self.beta == self.alpha ** (q + 1)

    def __repr__(self) -> str:
        return f"P({self.alpha.value},{self.beta.value})"


def _require_q(spec: FieldSpec) -> int:
    if spec.k % 2:
        raise FieldError(
            f"the Hermitian curve needs GF(q^2); GF({spec.p}^{spec.k}) has odd degree"
        )
    return spec.q


def gamma_set(spec: FieldSpec, alpha: FieldElement | int) -> list[FieldElement]:
    """All beta with beta^q + beta = alpha^(q+1), in encoding order."""
    q = _require_q(spec)
    a = spec.element(alpha)
    target = a ** (q + 1)
    return [b for b in spec.elements() if b**q + b == target]


@dataclass(frozen=True)
class CurveTable:
    spec: FieldSpec
    q: int
    points: tuple[CurvePoint, ...]

    @property
    def genus(self) -> int:
        return self.q * (self.q - 1) // 2

    @property
    def n(self) -> int:
        return len(self.points)

    def index_of(self, point: CurvePoint | tuple[int, int]) -> int:
        """Zero-based canonical index of a point."""
        key = point.key if isinstance(point, CurvePoint) else tuple(int(v) for v in point)
        return self._index[key]

    @property
    def _index(self) -> dict[tuple[int, int], int]:
        cache = self.__dict__.get("_index_cache")
        if cache is None:
            cache = {p.key: i for i, p in enumerate(self.points)}
            object.__setattr__(self, "_index_cache", cache)
        return cache

    def point(self, alpha: int, beta: int) -> CurvePoint:
        return self.points[self.index_of((alpha, beta))]

    def dump(self) -> str:
        lines = [f"# hermitian q={self.q} field={self.spec.header()} points={self.n}"]
        lines += [f"{p.alpha.value},{p.beta.value}" for p in self.points]
        return "\n".join(lines) + "\n"


@cache
def curve_enumerate(spec: FieldSpec) -> CurveTable:
    """All q^3 affine points, sorted by (enc(alpha), enc(beta))."""
    q = _require_q(spec)
    qth = [spec.pow_int(v, q) for v in range(spec.order)]
    trace = {}
    for b in range(spec.order):
        trace.setdefault(int(spec.add[qth[b], b]), []).append(b)
    points = []
    for a in range(spec.order):
        norm = spec.pow_int(a, q + 1)
        for b in trace.get(norm, []):
            points.append(CurvePoint(spec.element(a), spec.element(b)))
    return CurveTable(spec, q, tuple(points))
