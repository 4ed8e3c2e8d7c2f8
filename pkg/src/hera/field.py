"""Exact arithmetic in GF(p^k) and dense matrices over it.

An element c0 + c1*z + ... + c_{k-1}*z^{k-1} (z a root of the field modulus)
is encoded as the integer sum(c_i * p**i). Arithmetic runs on precomputed
tables indexed by these encodings, which keeps both scalar and matrix code
exact and cheap at the sizes this package targets (order <= 1024).
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cache

import numpy as np

from hera import kernels
from hera.errors import FieldError, ShapeError, SingularMatrixError

MAX_ORDER = 1024

# Conway polynomials, coefficients listed from the constant term up.
CONWAY: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (3, 2): (2, 2, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (5, 2): (2, 4, 1),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(n**0.5) + 1):
        if n % d == 0:
            return False
    return True


def _poly_mod(num: list[int], den: Sequence[int], p: int) -> list[int]:
    """Remainder of ``num`` by the monic polynomial ``den`` over GF(p)."""
    num = list(num)
    d = len(den) - 1
    for top in range(len(num) - 1, d - 1, -1):
        c = num[top] % p
        if c:
            for i in range(d + 1):
                num[top - d + i] = (num[top - d + i] - c * den[i]) % p
    return [c % p for c in num[:d]] + [0] * max(0, d - len(num))


def is_irreducible(p: int, modulus: Sequence[int]) -> bool:
    """Trial division by every monic polynomial of degree 1..k//2."""
    k = len(modulus) - 1
    for deg in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            divisor = list(low) + [1]
            if not any(_poly_mod(list(modulus), divisor, p)):
                return False
    return True


def _digits(value: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        value, r = divmod(value, p)
        out.append(r)
    return out


def _undigits(digits: Iterable[int], p: int) -> int:
    return sum(int(c) * p**i for i, c in enumerate(digits))


def _poly_mulmod(x: list[int], y: list[int], modulus: Sequence[int], p: int) -> list[int]:
    prod = [0] * (len(x) + len(y) - 1)
    for i, a in enumerate(x):
        if a:
            for j, b in enumerate(y):
                prod[i + j] += a * b
    return _poly_mod(prod, modulus, p)


def _element_order(e: int, p: int, k: int, modulus: Sequence[int]) -> int:
    base = _digits(e, p, k)
    cur = base
    one = _digits(1, p, k)
    n = 1
    while cur != one:
        cur = _poly_mulmod(cur, base, modulus, p)
        n += 1
        if n > p**k:
            return 0
    return n


def _first_primitive_modulus(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically first monic modulus whose root z is primitive."""
    for low in itertools.product(range(p), repeat=k):
        modulus = (*low[::-1], 1)
        if modulus[0] == 0 or not is_irreducible(p, modulus):
            continue
        if k == 1 or _element_order(p, p, k, modulus) == p**k - 1:
            return modulus
    raise FieldError(f"no primitive modulus found for GF({p}^{k})")


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^k) realised as GF(p)[z] / (modulus)."""

    p: int
    k: int
    modulus: tuple[int, ...]
    add: np.ndarray = field(init=False, repr=False, compare=False)
    mul: np.ndarray = field(init=False, repr=False, compare=False)
    neg: np.ndarray = field(init=False, repr=False, compare=False)
    inv: np.ndarray = field(init=False, repr=False, compare=False)
    generator: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        p, k = self.p, self.k
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if k < 1:
            raise FieldError("extension degree must be >= 1")
        if len(self.modulus) != k + 1 or self.modulus[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {k}")
        if any(not 0 <= c < p for c in self.modulus):
            raise FieldError(f"modulus coefficients must lie in [0, {p})")
        if not is_irreducible(p, self.modulus):
            raise FieldError(f"modulus {self.modulus} is reducible over GF({p})")
        order = p**k
        if order > MAX_ORDER:
            raise FieldError(f"field order {order} exceeds supported maximum {MAX_ORDER}")

        digits = np.array([_digits(v, p, k) for v in range(order)], dtype=np.int64)
        weights = p ** np.arange(k, dtype=np.int64)
        add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        neg = ((-digits) % p) @ weights

        gen = next(
            e for e in range(1, order) if order == 2 or _element_order(e, p, k, self.modulus) == order - 1
        )
        exp = np.zeros(order - 1, dtype=np.int64)
        cur = _digits(1, p, k)
        gd = _digits(gen, p, k)
        for n in range(order - 1):
            exp[n] = _undigits(cur, p)
            cur = _poly_mulmod(cur, gd, self.modulus, p)
        log = np.zeros(order, dtype=np.int64)
        log[exp] = np.arange(order - 1)
        mul = np.zeros((order, order), dtype=np.int64)
        nz = np.arange(1, order)
        mul[1:, 1:] = exp[(log[nz][:, None] + log[nz][None, :]) % (order - 1)]
        inv = np.zeros(order, dtype=np.int64)
        inv[nz] = exp[(-log[nz]) % (order - 1)]

        for name, table in (("add", add), ("mul", mul), ("neg", neg), ("inv", inv)):
            table = np.ascontiguousarray(table, dtype=np.int64)
            table.setflags(write=False)
            object.__setattr__(self, name, table)
        object.__setattr__(self, "generator", int(gen))

    @property
    def order(self) -> int:
        return self.p**self.k

    @property
    def q(self) -> int:
        """Size of the subfield GF(q) with q^2 = order; requires even k."""
        if self.k % 2:
            raise FieldError(f"GF({self.p}^{self.k}) is not of the form GF(q^2)")
        return self.p ** (self.k // 2)

    def __call__(self, value: int | FieldElement) -> FieldElement:
        return self.element(value)

    def element(self, value: int | FieldElement) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.spec != self:
                raise FieldError("element belongs to a different field")
            return value
        value = int(value)
        if not 0 <= value < self.order:
            raise FieldError(f"encoding {value} outside [0, {self.order})")
        return FieldElement(self, value)

    def from_coeffs(self, coeffs: Sequence[int]) -> FieldElement:
        if len(coeffs) > self.k:
            raise FieldError(f"expected at most {self.k} coefficients")
        return FieldElement(self, _undigits([c % self.p for c in coeffs], self.p))

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    @property
    def z(self) -> FieldElement:
        """The root of the modulus (encoding ``p``, or the generator when k = 1)."""
        return FieldElement(self, self.p if self.k > 1 else self.generator)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self, v) for v in range(self.order)]

    def pow_int(self, value: int, e: int) -> int:
        if e < 0:
            if value == 0:
                raise ZeroDivisionError("zero has no inverse")
            value, e = int(self.inv[value]), -e
        result = 1
        base = value
        while e:
            if e & 1:
                result = int(self.mul[result, base])
            base = int(self.mul[base, base])
            e >>= 1
        return result

    def header(self) -> str:
        """``p,k,modulus-digits`` (digits constant term first, colon separated)."""
        return f"{self.p},{self.k},{':'.join(str(c) for c in self.modulus)}"

    @classmethod
    def from_header(cls, text: str) -> FieldSpec:
        p, k, digits = text.strip().split(",")
        return field_make(int(p), int(k), [int(c) for c in digits.split(":")])


@cache
def _build(p: int, k: int, modulus: tuple[int, ...]) -> FieldSpec:
    return FieldSpec(p, k, modulus)


def field_make(p: int, k: int, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Build GF(p^k), verifying the modulus (low-order coefficient first).

    Without a modulus, the Conway polynomial is used for the built-in fields and
    the lexicographically first primitive polynomial otherwise.
    """
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if modulus is None:
        modulus = CONWAY.get((p, k)) or _first_primitive_modulus(p, k)
    return _build(p, k, tuple(int(c) for c in modulus))


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q = p^e, or raise FieldError."""
    for p in range(2, q + 1):
        if q % p == 0:
            e, rest = 0, q
            while rest % p == 0:
                rest //= p
                e += 1
            if rest != 1 or not is_prime(p):
                break
            return p, e
    raise FieldError(f"{q} is not a prime power")


def hermitian_field(q: int) -> FieldSpec:
    """The default GF(q^2) for the Hermitian curve over subfield size q."""
    p, e = prime_power(q)
    return field_make(p, 2 * e)


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    value: int

    @property
    def coeffs(self) -> list[int]:
        return _digits(self.value, self.spec.p, self.spec.k)

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def _other(self, other: FieldElement | int) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldError("elements of different fields")
            return other.value
        if isinstance(other, (int, np.integer)):
            # integers act through the prime subfield
            v = int(other) % self.spec.p
            return v
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.spec, int(self.spec.add[self.value, o]))

    __radd__ = __add__

    def __neg__(self) -> FieldElement:
        return FieldElement(self.spec, int(self.spec.neg[self.value]))

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.spec, int(self.spec.add[self.value, self.spec.neg[o]]))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.spec, int(self.spec.mul[self.value, o]))

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        if self.value == 0:
            raise ZeroDivisionError("division by zero in " + repr(self.spec))
        return FieldElement(self.spec, int(self.spec.inv[self.value]))

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * FieldElement(self.spec, o).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int) -> FieldElement:
        return FieldElement(self.spec, self.spec.pow_int(self.value, int(e)))

    def frobenius_q(self) -> FieldElement:
        """e -> e^q where the field is GF(q^2)."""
        return self ** self.spec.q

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"GF({self.spec.p}^{self.spec.k})({self.value})"

    def __str__(self) -> str:
        return format_element(self)


def format_element(e: FieldElement, var: str = "z") -> str:
    """Polynomial display in the modulus root, e.g. ``2z+1``."""
    terms = []
    for i, c in reversed(list(enumerate(e.coeffs))):
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            mono = var if i == 1 else f"{var}^{i}"
            terms.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(terms) or "0"


def field_arith(x: FieldElement, y: FieldElement | int | None, op: str) -> FieldElement:
    """Apply ``op`` in {add, sub, mul, div, pow, inv, frobenius_q}; ``y`` is the exponent for pow."""
    if op == "frobenius_q":
        return x.frobenius_q()
    if op == "inv":
        return x.inverse()
    if op == "pow":
        return x ** int(y)  # type: ignore[arg-type]
    if isinstance(y, FieldElement) and y.spec != x.spec:
        raise FieldError("elements of different fields")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


class FieldMatrix:
    """Immutable dense matrix of canonical encodings over one field."""

    __slots__ = ("data", "spec")

    def __init__(self, spec: FieldSpec, data) -> None:
        arr = np.array(
            [[int(v) for v in row] for row in data] if not isinstance(data, np.ndarray) else data,
            dtype=np.int64,
        )
        if arr.ndim != 2:
            if arr.size == 0:
                arr = arr.reshape(0, 0)
            else:
                raise ShapeError("matrix data must be two-dimensional")
        if arr.size and (arr.min() < 0 or arr.max() >= spec.order):
            raise FieldError(f"entries must be encodings in [0, {spec.order})")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):
        raise AttributeError("FieldMatrix is immutable")

    @classmethod
    def _wrap(cls, spec: FieldSpec, arr: np.ndarray) -> FieldMatrix:
        out = cls.__new__(cls)
        arr = np.ascontiguousarray(arr, dtype=np.int64)
        arr.setflags(write=False)
        object.__setattr__(out, "spec", spec)
        object.__setattr__(out, "data", arr)
        return out

    @classmethod
    def zeros(cls, spec: FieldSpec, rows: int, cols: int) -> FieldMatrix:
        return cls._wrap(spec, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, spec: FieldSpec, n: int) -> FieldMatrix:
        return cls._wrap(spec, np.eye(n, dtype=np.int64))

    @classmethod
    def random(cls, spec: FieldSpec, rows: int, cols: int, rng: np.random.Generator) -> FieldMatrix:
        return cls._wrap(spec, rng.integers(0, spec.order, size=(rows, cols), dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape  # type: ignore[return-value]

    @property
    def T(self) -> FieldMatrix:
        return FieldMatrix._wrap(self.spec, self.data.T)

    def tolist(self) -> list[list[int]]:
        return self.data.tolist()

    def __getitem__(self, key):
        sub = self.data[key]
        if np.ndim(sub) == 0:
            return FieldElement(self.spec, int(sub))
        if np.ndim(sub) == 1:
            sub = sub[None, :]
        return FieldMatrix._wrap(self.spec, sub)

    def _check(self, other: FieldMatrix) -> None:
        if not isinstance(other, FieldMatrix):
            raise TypeError("expected a FieldMatrix")
        if other.spec != self.spec:
            raise FieldError("matrices over different fields")

    def __add__(self, other: FieldMatrix) -> FieldMatrix:
        self._check(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return FieldMatrix._wrap(self.spec, self.spec.add[self.data, other.data])

    def __neg__(self) -> FieldMatrix:
        return FieldMatrix._wrap(self.spec, self.spec.neg[self.data])

    def __sub__(self, other: FieldMatrix) -> FieldMatrix:
        return self + (-other)

    def __matmul__(self, other: FieldMatrix) -> FieldMatrix:
        self._check(other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        return FieldMatrix._wrap(
            self.spec, kernels.matmul(self.data, other.data, self.spec.add, self.spec.mul)
        )

    def scale(self, e: FieldElement | int) -> FieldMatrix:
        v = self.spec.element(e).value
        return FieldMatrix._wrap(self.spec, self.spec.mul[v, self.data])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldMatrix)
            and other.spec == self.spec
            and other.shape == self.shape
            and bool(np.array_equal(self.data, other.data))
        )

    def __hash__(self) -> int:
        return hash((self.spec, self.shape, self.data.tobytes()))

    def is_zero(self) -> bool:
        return not self.data.any()

    def __repr__(self) -> str:
        return f"FieldMatrix({self.spec.header()}, {self.tolist()})"


def hstack(blocks: Sequence[FieldMatrix]) -> FieldMatrix:
    return FieldMatrix._wrap(blocks[0].spec, np.hstack([b.data for b in blocks]))


def vstack(blocks: Sequence[FieldMatrix]) -> FieldMatrix:
    return FieldMatrix._wrap(blocks[0].spec, np.vstack([b.data for b in blocks]))


def rref(M: FieldMatrix, pivot_cols: int | None = None) -> tuple[FieldMatrix, list[int]]:
    s = M.spec
    cols = M.cols if pivot_cols is None else pivot_cols
    work, pivots = kernels.rref(M.data, s.add, s.mul, s.neg, s.inv, cols)
    return FieldMatrix._wrap(s, work), pivots


def mat_rank(M: FieldMatrix) -> int:
    if M.data.size == 0:
        return 0
    return len(rref(M)[1])


def mat_solve(M: FieldMatrix, rhs: FieldMatrix) -> FieldMatrix:
    """Solve M X = rhs for square invertible M by Gauss-Jordan elimination."""
    M._check(rhs)
    n = M.rows
    if M.cols != n:
        raise ShapeError(f"coefficient matrix must be square, got {M.shape}")
    if rhs.rows != n:
        raise ShapeError(f"right-hand side has {rhs.rows} rows, expected {n}")
    reduced, pivots = rref(hstack([M, rhs]), pivot_cols=n)
    if len(pivots) < n:
        raise SingularMatrixError(f"matrix is singular (rank {len(pivots)} < {n})")
    return FieldMatrix._wrap(M.spec, reduced.data[:, n:])


def mat_inverse(M: FieldMatrix) -> FieldMatrix:
    return mat_solve(M, FieldMatrix.identity(M.spec, M.rows))


def ranks(spec: FieldSpec, stack: np.ndarray) -> np.ndarray:
    """Ranks of a (count, rows, cols) stack of encoded matrices."""
    stack = np.ascontiguousarray(stack, dtype=np.int64)
    if stack.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    return kernels.rank_many(stack, spec.add, spec.mul, spec.neg, spec.inv)
