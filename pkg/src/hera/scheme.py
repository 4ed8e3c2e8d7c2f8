"""HerA protocol core: parameters, point roles, interpolating encoders, decoding, audits.

Positions are 1-based throughout the public surface: ``assignment.point(1)``
is P_1. Roles along the assignment order are

    1..L                  data points   (f = A_i, g = B_i)
    L+1..L+T              mask points   (f = R_i, g = S_i; these are servers)
    L+T+1..q^3-L-T        zero points   (g vanishes)
    q^3-L-T+1..q^3        tail points   (servers)
"""

from __future__ import annotations

import itertools
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from hera import kernels
from hera.curve import CurvePoint, CurveTable, curve_enumerate
from hera.errors import (
    AssignmentError,
    EnumerationError,
    FieldError,
    ParameterError,
    ShapeError,
    SingularMatrixError,
)
from hera.field import (
    FieldMatrix,
    FieldSpec,
    hermitian_field,
    mat_solve,
    prime_power,
    ranks,
)
from hera.hermcode import dual_m
from hera.rrspace import RRFunction, eval_matrix, monomial_basis

MAX_TRIES = 1000
LEAKAGE_LIMIT = 4096


@dataclass(frozen=True)
class SchemeParams:
    q: int
    L: int
    T: int
    a: int = 1
    b: int = 1
    c: int = 1

    @property
    def genus(self) -> int:
        return self.q * (self.q - 1) // 2

    @property
    def n(self) -> int:
        return self.q**3

    @property
    def m(self) -> int:
        return self.L + self.T + self.genus - 1

    @property
    def m_perp(self) -> int:
        return dual_m(self.q, self.m)

    @property
    def N(self) -> int:
        return self.L + 2 * self.T

    @property
    def K(self) -> int:
        """Interpolation points carrying data or masks (L + T)."""
        return self.L + self.T

    @property
    def block_cols(self) -> int:
        return self.b // self.L

    @property
    def spec(self) -> FieldSpec:
        return hermitian_field(self.q)


def params_validate(q: int, L: int, T: int, a: int = 1, b: int | None = None, c: int = 1) -> SchemeParams:
    """Check every constraint, naming the first violated one in the error."""
    b = L if b is None else b
    try:
        prime_power(q)
        hermitian_field(q)
    except FieldError as exc:
        raise ParameterError("field", f"q={q} is not a supported prime power ({exc})") from exc
    if L < 1 or T < 1:
        raise ParameterError("range", f"L and T must be >= 1 (got L={L}, T={T})")
    if min(a, b, c) < 1:
        raise ParameterError("dimension", f"matrix dimensions must be positive (a={a}, b={b}, c={c})")
    if b % L:
        raise ParameterError("partition", f"L={L} does not divide b={b}")
    genus = q * (q - 1) // 2
    if 2 * (L + T) > q**3 - genus:
        raise ParameterError(
            "bound", f"2(L+T) = {2 * (L + T)} exceeds q^3 - q(q-1)/2 = {q**3 - genus}"
        )
    if L + T < genus:
        # below 2g-1 the space L(m P_inf) is larger than L+T and interpolation is not unique
        raise ParameterError("genus", f"L+T = {L + T} is below the genus {genus} of the curve")
    params = SchemeParams(q, L, T, a, b, c)
    assert len(monomial_basis(q, params.m)) == params.K
    assert len(monomial_basis(q, params.m_perp)) == params.n - params.K
    return params


@dataclass(frozen=True)
class PointAssignment:
    """A point order with its solved interpolation bases.

    ``f_coeffs[:, i]`` holds the I(m) coefficients of f_{i+1};
    ``g_coeffs[:, i]`` the I(m_perp) coefficients of g_{i+1}.
    """

    params: SchemeParams
    table: CurveTable
    order: tuple[int, ...]
    f_coeffs: np.ndarray = field(repr=False)
    g_coeffs: np.ndarray = field(repr=False)

    @property
    def spec(self) -> FieldSpec:
        return self.table.spec

    def point(self, pos: int) -> CurvePoint:
        return self.table.points[self.order[pos - 1]]

    def points(self, positions: Sequence[int]) -> list[CurvePoint]:
        return [self.point(pos) for pos in positions]

    @property
    def data_positions(self) -> list[int]:
        return list(range(1, self.params.L + 1))

    @property
    def mask_positions(self) -> list[int]:
        p = self.params
        return list(range(p.L + 1, p.K + 1))

    @property
    def zero_positions(self) -> list[int]:
        p = self.params
        return list(range(p.K + 1, p.n - p.K + 1))

    @property
    def tail_positions(self) -> list[int]:
        p = self.params
        return list(range(p.n - p.K + 1, p.n + 1))

    @property
    def servers(self) -> list[int]:
        return self.mask_positions + self.tail_positions

    def summary(self) -> dict:
        def enc(pos):
            pt = self.point(pos)
            return [pt.alpha.value, pt.beta.value]

        return {
            "order": [i + 1 for i in self.order],
            "data": [enc(i) for i in self.data_positions],
            "masks": [enc(i) for i in self.mask_positions],
            "zeros": [enc(i) for i in self.zero_positions],
            "tail": [enc(i) for i in self.tail_positions],
            "servers": self.servers,
        }


def _resolve_order(params: SchemeParams, table: CurveTable, override: Sequence) -> tuple[int, ...]:
    idx = []
    for item in override:
        if isinstance(item, CurvePoint):
            key = item.key
        elif isinstance(item, (tuple, list)) and len(item) == 2:
            key = (int(item[0]), int(item[1]))
        else:
            raise AssignmentError(
                f"override entry {item!r} is neither a point nor an (alpha, beta) pair", {"check": "override"}
            )
        try:
            idx.append(table.index_of(key))
        except KeyError:
            raise AssignmentError(f"override point {key} is not on the curve", {"check": "override"}) from None
    if len(set(idx)) != len(idx):
        raise AssignmentError("override lists a point twice", {"check": "override"})
    n, K = params.n, params.K
    if len(idx) == n:
        return tuple(idx)
    if len(idx) == 2 * K:
        # interpolation points, then tail points; zero points fill in canonical order
        used = set(idx)
        zeros = [i for i in range(n) if i not in used]
        return tuple(idx[:K] + zeros + idx[K:])
    raise AssignmentError(f"override must list {n} or {2 * K} points, got {len(idx)}", {"check": "override"})


def _solve_f(params: SchemeParams, pts: Sequence[CurvePoint]) -> np.ndarray:
    spec = pts[0].alpha.spec
    K = params.K
    vf = eval_matrix(spec, monomial_basis(params.q, params.m), pts[:K])
    try:
        return mat_solve(vf, FieldMatrix.identity(spec, K)).data
    except SingularMatrixError:
        raise AssignmentError(
            "f-interpolation matrix is singular on the data and mask points",
            {"check": "f-interpolation"},
        ) from None


def _solve_g(params: SchemeParams, pts: Sequence[CurvePoint]) -> np.ndarray:
    spec = pts[0].alpha.spec
    n, K = params.n, params.K
    vg = eval_matrix(spec, monomial_basis(params.q, params.m_perp), pts[: n - K])
    rhs = FieldMatrix._wrap(spec, np.eye(n - K, K, dtype=np.int64))
    try:
        return mat_solve(vg, rhs).data
    except SingularMatrixError:
        raise AssignmentError(
            "g-interpolation matrix is singular on the data, mask and zero points",
            {"check": "g-interpolation"},
        ) from None


def build_assignment(params: SchemeParams, table: CurveTable, order: Sequence[int]) -> PointAssignment:
    """Solve both interpolation systems for a point order (0-based canonical indices).

    Raises AssignmentError when either system is singular; does not audit T-MDS.
    """
    if sorted(order) != list(range(params.n)):
        raise AssignmentError("order is not a permutation of the curve points")
    pts = [table.points[i] for i in order]
    f_coeffs = _solve_f(params, pts)
    g_coeffs = _solve_g(params, pts)
    return PointAssignment(params, table, tuple(order), f_coeffs, g_coeffs)


def lagrange_basis_f(params: SchemeParams, assignment: PointAssignment) -> list[RRFunction]:
    """f_1..f_{L+T} in L(m P_inf) with f_i(P_j) = [i == j] on the first L+T points."""
    spec = assignment.spec
    return [RRFunction.scalar(spec, params.q, params.m, col) for col in assignment.f_coeffs.T]


def lagrange_basis_g(params: SchemeParams, assignment: PointAssignment) -> list[RRFunction]:
    """g_1..g_{L+T} in L(m_perp P_inf): Lagrange on the first L+T points, zero on the zero points."""
    spec = assignment.spec
    return [RRFunction.scalar(spec, params.q, params.m_perp, col) for col in assignment.g_coeffs.T]


@dataclass(frozen=True)
class TmdsReport:
    label: str
    subsets: tuple[tuple[int, ...], ...]
    ranks: tuple[int, ...]
    T: int

    @property
    def passed(self) -> bool:
        return all(r == self.T for r in self.ranks)

    @property
    def failures(self) -> list[tuple[int, ...]]:
        return [s for s, r in zip(self.subsets, self.ranks) if r != self.T]

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "T": self.T,
            "subsets": len(self.subsets),
            "full_rank": sum(r == self.T for r in self.ranks),
            "passed": self.passed,
            "failures": [list(s) for s in self.failures],
            "ranks": [{"subset": list(s), "rank": r} for s, r in zip(self.subsets, self.ranks)],
        }


def audit_tmds(
    params: SchemeParams, assignment: PointAssignment, basis: Sequence[RRFunction], label: str = "f"
) -> TmdsReport:
    """Rank of [basis_t(P_i)] for every T-subset of the server positions."""
    servers = assignment.servers
    if len(servers) != params.N:
        raise ShapeError(f"expected {params.N} servers, got {len(servers)}")
    T = len(basis)
    pts = assignment.points(servers)
    values = np.stack([f.evaluate_many(pts).reshape(len(pts)) for f in basis])  # T x N
    combos = list(itertools.combinations(range(len(servers)), T))
    stack = np.stack([values[:, list(c)] for c in combos]) if combos else np.zeros((0, T, T), np.int64)
    rk = ranks(assignment.spec, stack)
    subsets = tuple(tuple(servers[i] for i in c) for c in combos)
    return TmdsReport(label, subsets, tuple(int(r) for r in rk), T)


def mask_bases(params: SchemeParams, assignment: PointAssignment) -> tuple[list[RRFunction], list[RRFunction]]:
    fb = lagrange_basis_f(params, assignment)
    gb = lagrange_basis_g(params, assignment)
    return fb[params.L :], gb[params.L :]


def audit_assignment(params: SchemeParams, assignment: PointAssignment) -> tuple[TmdsReport, TmdsReport]:
    fm, gm = mask_bases(params, assignment)
    return audit_tmds(params, assignment, fm, "f"), audit_tmds(params, assignment, gm, "g")


def assignment_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), 0])))


def mask_rng(seed: int) -> np.random.Generator:
    """Counter-based stream for mask blocks; fixed by the seed."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), 1])))


def assign_points(
    params: SchemeParams,
    table: CurveTable | None = None,
    seed: int = 0,
    override: Sequence | None = None,
    max_tries: int = MAX_TRIES,
    require_tmds: bool = True,
) -> PointAssignment:
    """A point order passing both interpolation checks and the T-MDS audit.

    With ``override`` (q^3 points, or 2(L+T) points: interpolation points then
    tail points) the order is checked and any failure raised. Otherwise seeded
    random permutations are drawn until one passes. ``require_tmds=False``
    skips the audit (decodability only; the result is not T-secure).
    """
    table = table or curve_enumerate(params.spec)
    if override is not None:
        order = _resolve_order(params, table, override)
        assignment = build_assignment(params, table, order)
        if not require_tmds:
            return assignment
        reports = audit_assignment(params, assignment)
        bad = [r for r in reports if not r.passed]
        if bad:
            raise AssignmentError(
                f"override fails the T-MDS audit for the {bad[0].label}-mask basis",
                {"check": "tmds", "failures": {r.label: r.failures for r in bad}},
            )
        return assignment

    rng = assignment_rng(seed)
    tally: Counter = Counter()
    for _ in range(max_tries):
        order = tuple(int(i) for i in rng.permutation(params.n))
        pts = [table.points[i] for i in order]
        try:
            f_coeffs = _solve_f(params, pts)
            if require_tmds:
                # the cheap f-side audit rejects most draws before the large g solve
                partial = PointAssignment(params, table, order, f_coeffs, f_coeffs[:0])
                fm = lagrange_basis_f(params, partial)[params.L :]
                if not audit_tmds(params, partial, fm, "f").passed:
                    tally["tmds"] += 1
                    continue
            g_coeffs = _solve_g(params, pts)
        except AssignmentError as exc:
            tally[exc.diagnostics["check"]] += 1
            continue
        assignment = PointAssignment(params, table, order, f_coeffs, g_coeffs)
        if not require_tmds:
            return assignment
        gm = lagrange_basis_g(params, assignment)[params.L :]
        if audit_tmds(params, assignment, gm, "g").passed:
            return assignment
        tally["tmds"] += 1
    raise AssignmentError(
        f"no valid point assignment after {max_tries} draws (seed={seed})",
        {"check": "retry-cap", "rejections": dict(tally)},
    )


@dataclass(frozen=True)
class EncodedPair:
    f: RRFunction
    g: RRFunction
    masks_R: tuple[FieldMatrix, ...]
    masks_S: tuple[FieldMatrix, ...]


def split_blocks(params: SchemeParams, A: FieldMatrix, B: FieldMatrix) -> tuple[list[FieldMatrix], list[FieldMatrix]]:
    """A into L column blocks, B into L row blocks."""
    if A.shape != (params.a, params.b) or B.shape != (params.b, params.c):
        raise ShapeError(
            f"expected A {params.a}x{params.b} and B {params.b}x{params.c}, got {A.shape} and {B.shape}"
        )
    w = params.block_cols
    As = [A[:, i * w : (i + 1) * w] for i in range(params.L)]
    Bs = [B[i * w : (i + 1) * w, :] for i in range(params.L)]
    return As, Bs


def _interpolant(spec, q, m, coeffs: np.ndarray, blocks: Sequence[FieldMatrix]) -> RRFunction:
    shape = blocks[0].shape
    values = np.stack([b.data.reshape(-1) for b in blocks])
    stacked = kernels.matmul(np.ascontiguousarray(coeffs), values, spec.add, spec.mul)
    return RRFunction.from_stacked(spec, q, m, stacked, shape)


def encode(
    params: SchemeParams,
    assignment: PointAssignment,
    A: FieldMatrix,
    B: FieldMatrix,
    rng: np.random.Generator | None = None,
    masks: tuple[Sequence[FieldMatrix], Sequence[FieldMatrix]] | None = None,
    verify: bool = True,
) -> EncodedPair:
    """Interpolate f through (A_i, R_i) and g through (B_i, S_i, zeros).

    Masks are drawn uniformly from ``rng`` unless given explicitly.
    """
    spec = assignment.spec
    if A.spec != spec or B.spec != spec:
        raise FieldError("matrices are not over the scheme field")
    As, Bs = split_blocks(params, A, B)
    w = params.block_cols
    if masks is None:
        if rng is None:
            raise ValueError("either rng or masks is required")
        R = [FieldMatrix.random(spec, params.a, w, rng) for _ in range(params.T)]
        S = [FieldMatrix.random(spec, w, params.c, rng) for _ in range(params.T)]
    else:
        R, S = list(masks[0]), list(masks[1])
        if len(R) != params.T or len(S) != params.T:
            raise ShapeError(f"expected {params.T} masks on each side")
        if any(r.shape != (params.a, w) for r in R) or any(s.shape != (w, params.c) for s in S):
            raise ShapeError("mask blocks have the wrong shape")
    f = _interpolant(spec, params.q, params.m, assignment.f_coeffs, As + R)
    g = _interpolant(spec, params.q, params.m_perp, assignment.g_coeffs, Bs + S)
    pair = EncodedPair(f, g, tuple(R), tuple(S))
    if verify:
        _verify_encoding(params, assignment, pair, As, Bs)
    return pair


def _verify_encoding(params, assignment, pair: EncodedPair, As, Bs) -> None:
    K = params.K
    fv = pair.f.evaluate_many(assignment.points(range(1, K + 1)))
    expect_f = As + list(pair.masks_R)
    gpos = list(range(1, params.n - K + 1))
    gv = pair.g.evaluate_many(assignment.points(gpos))
    expect_g = Bs + list(pair.masks_S)
    ok = all(np.array_equal(fv[i], expect_f[i].data) for i in range(K))
    ok = ok and all(np.array_equal(gv[i], expect_g[i].data) for i in range(K))
    ok = ok and not gv[K:].any()
    if not ok:
        raise AssertionError("encoded polynomials violate their interpolation constraints")


def decode(params: SchemeParams, responses: Sequence[FieldMatrix]) -> FieldMatrix:
    """Sum of the N responses; each response already carries the minus sign (-h(P))."""
    if len(responses) != params.N:
        raise ShapeError(f"expected {params.N} responses, got {len(responses)}")
    spec = responses[0].spec
    total = FieldMatrix.zeros(spec, params.a, params.c)
    for r in responses:
        if r.shape != (params.a, params.c):
            raise ShapeError(f"response of shape {r.shape}, expected {(params.a, params.c)}")
        total = total + r
    return total


@dataclass(frozen=True)
class SubsetLeak:
    subset: tuple[int, ...]
    outcomes: int
    min_count: int
    max_count: int
    uniform: bool
    identical: bool

    @property
    def passed(self) -> bool:
        return self.uniform and self.identical


@dataclass(frozen=True)
class LeakageReport:
    tuples: int
    f: tuple[SubsetLeak, ...]
    g: tuple[SubsetLeak, ...]

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.f + self.g)

    def to_dict(self) -> dict:
        def side(items):
            return [
                {
                    "subset": list(s.subset),
                    "outcomes": s.outcomes,
                    "min_count": s.min_count,
                    "max_count": s.max_count,
                    "uniform": s.uniform,
                    "identical": s.identical,
                }
                for s in items
            ]

        return {"mask_tuples": self.tuples, "passed": self.passed, "f": side(self.f), "g": side(self.g)}


def _perturbed(M: FieldMatrix) -> FieldMatrix:
    data = M.data.copy()
    data[0, 0] = M.spec.add[data[0, 0], 1]
    return FieldMatrix._wrap(M.spec, data)


def leakage_experiment(
    params: SchemeParams,
    assignment: PointAssignment,
    A: FieldMatrix,
    B: FieldMatrix | None = None,
    alt_A: FieldMatrix | None = None,
    alt_B: FieldMatrix | None = None,
) -> LeakageReport:
    """Exhaustive share distributions of every T-subset of servers at 1x1 block size.

    Every mask tuple in GF(q^2)^T is enumerated; f-shares depend only on R and
    g-shares only on S, so R = S = the tuple covers both sides in one pass.
    Passing means each subset's joint share tuple is exactly uniform and its
    histogram is the same for (A, B) and the alternative inputs.
    """
    spec = assignment.spec
    if (params.a, params.c, params.block_cols) != (1, 1, 1):
        raise ShapeError("leakage experiment needs a = c = 1 and b = L")
    size = spec.order**params.T
    if size > LEAKAGE_LIMIT:
        raise EnumerationError(f"{size} mask tuples exceeds {LEAKAGE_LIMIT}")
    B = B if B is not None else FieldMatrix.zeros(spec, params.b, 1)
    alt_A = alt_A if alt_A is not None else _perturbed(A)
    alt_B = alt_B if alt_B is not None else _perturbed(B)
    servers = assignment.servers
    server_pts = assignment.points(servers)
    combos = list(itertools.combinations(range(len(servers)), params.T))

    def histograms(A_, B_):
        f_hist = [Counter() for _ in combos]
        g_hist = [Counter() for _ in combos]
        for tup in itertools.product(range(spec.order), repeat=params.T):
            blocks = [FieldMatrix._wrap(spec, np.array([[v]], dtype=np.int64)) for v in tup]
            pair = encode(params, assignment, A_, B_, masks=(blocks, blocks), verify=False)
            fs = pair.f.evaluate_many(server_pts).reshape(-1)
            gs = pair.g.evaluate_many(server_pts).reshape(-1)
            for h, c in zip(f_hist, combos):
                h[tuple(int(fs[i]) for i in c)] += 1
            for h, c in zip(g_hist, combos):
                h[tuple(int(gs[i]) for i in c)] += 1
        return f_hist, g_hist

    base_f, base_g = histograms(A, B)
    alt_f, alt_g = histograms(alt_A, alt_B)

    def summarise(base, alt):
        out = []
        for c, h, h2 in zip(combos, base, alt):
            counts = list(h.values())
            out.append(
                SubsetLeak(
                    subset=tuple(servers[i] for i in c),
                    outcomes=len(h),
                    min_count=min(counts),
                    max_count=max(counts),
                    uniform=len(h) == size and set(counts) == {1},
                    identical=h == h2,
                )
            )
        return tuple(out)

    return LeakageReport(size, summarise(base_f, alt_f), summarise(base_g, alt_g))
