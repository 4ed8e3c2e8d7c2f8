"""Reference arithmetic that shares no code with the package.

Tables are rebuilt from schoolbook polynomial arithmetic on digit vectors, so
agreement with the package is evidence rather than tautology.
"""

import itertools
from functools import cache

import numpy as np


def _digits(v, p, k):
    return [(v // p**i) % p for i in range(k)]


def _pack(d, p):
    return sum(c * p**i for i, c in enumerate(d))


@cache
def tables(p, k, modulus):
    """(add, mul) tables for GF(p)[z]/(modulus), modulus low-order first."""
    n = p**k
    add = np.zeros((n, n), dtype=np.int64)
    mul = np.zeros((n, n), dtype=np.int64)
    lead_inv = pow(modulus[-1], p - 2, p)
    for x, y in itertools.product(range(n), repeat=2):
        xd, yd = _digits(x, p, k), _digits(y, p, k)
        add[x, y] = _pack([(a + b) % p for a, b in zip(xd, yd)], p)
        prod = [0] * (2 * k - 1)
        for i, a in enumerate(xd):
            for j, b in enumerate(yd):
                prod[i + j] = (prod[i + j] + a * b) % p
        for deg in range(2 * k - 2, k - 1, -1):
            c = prod[deg] * lead_inv % p
            for t in range(k + 1):
                prod[deg - k + t] = (prod[deg - k + t] - c * modulus[t]) % p
        mul[x, y] = _pack(prod[:k], p)
    return add, mul


def spec_tables(spec):
    return tables(spec.p, spec.k, tuple(spec.modulus))


def matmul(a, b, spec):
    add, mul = spec_tables(spec)
    a, b = np.asarray(a), np.asarray(b)
    acc = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for t in range(a.shape[1]):
        acc = add[acc, mul[a[:, t][:, None], b[t][None, :]]]
    return acc


def neg_table(spec):
    add, _ = spec_tables(spec)
    return np.argmin(add, axis=1)  # the unique zero is the row minimum


def det2(m, spec):
    add, mul = spec_tables(spec)
    neg = neg_table(spec)
    return int(add[mul[m[0][0], m[1][1]], neg[mul[m[0][1], m[1][0]]]])


def curve_points(spec, q):
    """Affine points of y^q + y = x^(q+1), found by scanning all pairs."""
    add, mul = spec_tables(spec)

    def power(v, e):
        acc = 1
        for _ in range(e):
            acc = int(mul[acc, v])
        return acc

    return [
        (a, b)
        for a, b in itertools.product(range(spec.order), repeat=2)
        if add[power(b, q), b] == power(a, q + 1)
    ]


def power_table(spec, e_max):
    _, mul = spec_tables(spec)
    pw = np.ones((spec.order, e_max + 1), dtype=np.int64)
    for e in range(1, e_max + 1):
        pw[:, e] = mul[pw[:, e - 1], np.arange(spec.order)]
    return pw


def generator(spec, q, m):
    """Rows x^i y^j (j < q, iq + j(q+1) <= m) evaluated at the scanned points, rows by pole order."""
    _, mul = spec_tables(spec)
    monos = sorted(
        (i * q + j * (q + 1), i, j) for j in range(q) for i in range(max(m, 0) // q + 1) if i * q + j * (q + 1) <= m
    )
    pts = curve_points(spec, q)
    pw = power_table(spec, max([i for _, i, _ in monos] + [q]))
    rows = [[int(mul[pw[a, i], pw[b, j]]) for a, b in pts] for _, i, j in monos]
    return np.array(rows, dtype=np.int64).reshape(len(monos), len(pts))


def rank(m, spec):
    """Row echelon form with inverses found by table search."""
    add, mul = spec_tables(spec)
    neg = neg_table(spec)
    inv = {x: int(np.flatnonzero(mul[x] == 1)[0]) for x in range(1, spec.order)}
    w = np.array(m, dtype=np.int64)
    r = 0
    for c in range(w.shape[1]):
        nz = [i for i in range(r, w.shape[0]) if w[i, c]]
        if not nz:
            continue
        w[[r, nz[0]]] = w[[nz[0], r]]
        w[r] = mul[inv[int(w[r, c])], w[r]]
        for i in range(r + 1, w.shape[0]):
            if w[i, c]:
                w[i] = add[w[i], mul[neg[w[i, c]], w[r]]]
        r += 1
        if r == w.shape[0]:
            break
    return r
