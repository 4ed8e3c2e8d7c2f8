"""Acceptance criteria, one test each, with a PASS/FAIL line per criterion.

Each check uses the package and, where a second route exists, the
independent arithmetic in ``oracles``. Runtime budgets are part of the
verdict where a hard bound is stated.
"""

import dataclasses
import itertools
import random
import time
from fractions import Fraction

import numpy as np
import oracles
import pytest

from hera.curve import curve_enumerate
from hera.errors import AssignmentError
from hera.field import FieldMatrix, hermitian_field, mat_rank
from hera.hermcode import code_build, dual_check, dual_m, min_distance_bruteforce
from hera.reference import f4_case, f9_case
from hera.rrspace import monomial_basis, rr_dim
from hera.scheme import (
    SchemeParams,
    assign_points,
    audit_assignment,
    encode,
    lagrange_basis_f,
    lagrange_basis_g,
    leakage_experiment,
    params_validate,
)
from hera.simnet import rate_eval, run_protocol

SWEEP = [(2, 2, 1), (2, 1, 2), (3, 2, 2), (3, 4, 3), (3, 6, 3)]

# Reference bases for the two worked configurations; F4: d = 2, d + 1 = 3. F9: d = 3, d + 1 = 4, 2d = 6, 2d + 2 = 8.
F4_F = [[1, 3, 1], [0, 2, 1], [0, 1, 0]]  # monomials 1, x, y
F4_G = [[1, 3, 1, 2, 1], [0, 1, 1, 1, 1], [0, 1, 0, 2, 1]]  # 1, x, y, x^2, xy
F9_F = [[1, 0, 4, 3], [0, 6, 8, 2], [0, 4, 0, 6], [0, 2, 0, 1]]  # 1, x, y, x^2


def report(log, n, ok, detail, elapsed=None):
    t = f" [{elapsed:.2f}s]" if elapsed is not None else ""
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}{t}"
    log.append(line)
    print(line)
    return ok


def tmds_by_det(assignment, basis, spec):
    """2-MDS via explicit 2x2 determinants in oracle arithmetic."""
    pts = assignment.points(assignment.servers)
    vals = [[int(v) for v in f.evaluate_many(pts).reshape(-1)] for f in basis]
    bad = []
    for i, j in itertools.combinations(range(len(pts)), 2):
        if oracles.det2([[vals[0][i], vals[0][j]], [vals[1][i], vals[1][j]]], spec) == 0:
            bad.append((assignment.servers[i], assignment.servers[j]))
    return bad


@pytest.fixture(scope="module")
def sweep_assignments():
    """One assignment per swept tuple: audited search, else a decodable unaudited one."""
    out = {}
    for q, L, T in SWEEP:
        params = params_validate(q, L, T)
        try:
            out[(q, L, T)] = (assign_points(params, seed=0), True)
        except AssignmentError as exc:
            assert exc.diagnostics["check"] == "retry-cap"
            out[(q, L, T)] = (assign_points(params, seed=0, require_tmds=False), False)
    return out


def test_criterion_1_dual_orthogonality(acceptance_log):
    t0 = time.perf_counter()
    bad = []
    checked = 0
    for q in (2, 3):
        spec = hermitian_field(q)
        s = q**3 + q**2 - q - 2
        for m in range(s + 1):
            mp = dual_m(q, m)
            route1 = dual_check(code_build(spec, m), code_build(spec, mp))
            ga, gb = oracles.generator(spec, q, m), oracles.generator(spec, q, mp)
            route2 = not oracles.matmul(ga, gb.T, spec).any()
            checked += 1
            if not (route1 and route2):
                bad.append((q, m))
    ok = report(acceptance_log, 1, not bad, f"{checked} (q, m) pairs, gen(m) gen(m_perp)^T = 0 by both routes; "
                f"failures {bad}", time.perf_counter() - t0)
    assert ok


def test_criterion_2_dimension_formulas(acceptance_log):
    t0 = time.perf_counter()
    notes = []
    for q in (2, 3, 4):
        spec = hermitian_field(q)
        g = q * (q - 1) // 2
        s = q**3 + q**2 - q - 2
        # clause ii: |I(m)| = m - g + 1 on q^2 - q - 2 < m < q^3
        for m in range(q * q - q - 1, q**3):
            if len(monomial_basis(q, m)) != m - g + 1:
                notes.append(f"q={q} m={m}: |I(m)|={len(monomial_basis(q, m))} vs m-g+1={m - g + 1}")
        # clause i: dim C(m P_inf) (evaluation rank, two routes) against each branch on its stated range
        for m in range(s + 1):
            dim1 = mat_rank(code_build(spec, m).gen)
            dim2 = oracles.rank(oracles.generator(spec, q, m), spec)
            if dim1 != dim2 or dim1 != rr_dim(q, m):
                notes.append(f"q={q} m={m}: rank routes disagree ({dim1}, {dim2}, rr_dim {rr_dim(q, m)})")
            if m <= q**3 and dim1 != len(monomial_basis(q, m)):
                notes.append(f"q={q} m={m}: dim={dim1} but |I(m)|={len(monomial_basis(q, m))}")
            if m >= q**3 and dim1 != q**3 - len(monomial_basis(q, s - m)):
                notes.append(f"q={q} m={m}: dim={dim1} but q^3-|I(m_perp)|={q**3 - len(monomial_basis(q, s - m))}")
    detail = "clause ii exact on its range; clause i checked against the evaluation rank"
    if notes:
        detail += "; mismatches: " + "; ".join(notes)
    ok = report(acceptance_log, 2, not notes, detail, time.perf_counter() - t0)
    assert ok


def test_criterion_3_designed_distance(acceptance_log):
    spec = hermitian_field(2)
    t0 = time.perf_counter()
    got, brute = {}, {}
    for m in range(2, 7):
        got[m] = min_distance_bruteforce(code_build(spec, m))
    elapsed = time.perf_counter() - t0
    for m in range(2, 7):
        gen = oracles.generator(spec, 2, m)
        msgs = np.array(list(itertools.product(range(4), repeat=gen.shape[0]))[1:], dtype=np.int64)
        words = oracles.matmul(msgs, gen, spec)
        brute[m] = int(np.count_nonzero(words, axis=1).min())
    ok = all(got[m] == brute[m] == 8 - m for m in got) and elapsed < 1.0
    report(acceptance_log, 3, ok, f"d(m) for m=2..6: package {list(got.values())}, oracle {list(brute.values())}, "
           f"expected {[8 - m for m in got]}", elapsed)
    assert ok


def test_criterion_4_f4_reproduction(acceptance_log):
    t0 = time.perf_counter()
    params, asg = f4_case()
    fb = [f.scalar_coeffs() for f in lagrange_basis_f(params, asg)]
    gb = [g.scalar_coeffs() for g in lagrange_basis_g(params, asg)]
    bases_ok = fb == F4_F and gb == F4_G
    spec = params.spec
    rng = np.random.default_rng(2024)
    table = curve_enumerate(spec)
    p00, p01 = table.point(0, 0), table.point(0, 1)
    failures = 0
    cases = {}
    for trial in range(1000):
        a, c = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        b = 2 * int(rng.integers(1, 3))
        if (a, b, c) not in cases:
            cases[(a, b, c)] = f4_case(a, b, c)
        p, asg_abc = cases[(a, b, c)]
        A = FieldMatrix.random(spec, a, b, rng)
        B = FieldMatrix.random(spec, b, c, rng)
        pair = encode(p, asg_abc, A, B, rng=rng, verify=False)
        h = pair.f(p00) @ pair.g(p00) + pair.f(p01) @ pair.g(p01)
        w = b // 2
        expect = oracles.matmul(A.data[:, :w], B.data[:w], spec)
        expect = oracles.spec_tables(spec)[0][expect, oracles.matmul(A.data[:, w:], B.data[w:], spec)]
        failures += not np.array_equal(h.data, expect)
    elapsed = time.perf_counter() - t0
    ok = bases_ok and failures == 0 and elapsed < 1.0
    report(acceptance_log, 4, ok, f"f basis {'matches' if fb == F4_F else 'differs'}, g basis "
           f"{'matches' if gb == F4_G else 'differs'}; h(P00)+h(P01) = A1B1+A2B2 in {1000 - failures}/1000 trials",
           elapsed)
    assert ok


def test_criterion_5_f9_reproduction(acceptance_log):
    t0 = time.perf_counter()
    params, asg = f9_case()
    spec = params.spec
    fb = lagrange_basis_f(params, asg)
    gb = lagrange_basis_g(params, asg)
    coeff_ok = [f.scalar_coeffs() for f in fb] == F9_F
    # interpolation identities over all 27 points
    order_pts = asg.points(range(1, 28))
    ident_ok = True
    for i, f in enumerate(fb):
        v = f.evaluate_many(order_pts[:4]).reshape(-1)
        ident_ok &= [int(x) for x in v] == [int(i == j) for j in range(4)]
    for i, g in enumerate(gb):
        v = g.evaluate_many(order_pts).reshape(-1)
        ident_ok &= [int(x) for x in v[:4]] == [int(i == j) for j in range(4)] and not v[4:23].any()
    rng = np.random.default_rng(6)
    dec = 0
    for seed in range(20):
        p2, a2 = f9_case(2, 4, 2)
        A = FieldMatrix.random(spec, 2, 4, rng)
        B = FieldMatrix.random(spec, 4, 2, rng)
        dec += np.array_equal(run_protocol(p2, a2, A, B, seed=seed).decoded.data, oracles.matmul(A.data, B.data, spec))
    f_rep, g_rep = audit_assignment(params, asg)
    f_det, g_det = tmds_by_det(asg, fb[2:], spec), tmds_by_det(asg, gb[2:], spec)
    f_ok = f_rep.passed and not f_det
    g_ok = g_rep.passed and not g_det
    elapsed = time.perf_counter() - t0
    ok = coeff_ok and ident_ok and dec == 20 and f_ok and g_ok and elapsed < 1.0
    report(acceptance_log, 5, ok,
           f"f1..f4 {'match' if coeff_ok else 'differ from'} the reference coefficients; interpolation identities "
           f"{'hold' if ident_ok else 'fail'}; decode {dec}/20; 2-MDS f {15 - len(f_det)}/15, "
           f"g {15 - len(g_det)}/15 (rank-deficient g subsets {g_det})", elapsed)
    assert ok


def test_criterion_6_sweep(acceptance_log, sweep_assignments):
    t0 = time.perf_counter()
    rnd = random.Random(6)
    summary = []
    all_ok = True
    for key in SWEEP:
        q, L, T = key
        base, _ = sweep_assignments[key]
        spec = hermitian_field(q)
        good = 0
        for i in range(100):
            a, c = rnd.randint(1, 6), rnd.randint(1, 6)
            b = L * rnd.randint(1, 6 // L)
            params = params_validate(q, L, T, a, b, c)
            asg = dataclasses.replace(base, params=params)
            rng = np.random.default_rng([i, q, L, T])
            A = FieldMatrix.random(spec, a, b, rng)
            B = FieldMatrix.random(spec, b, c, rng)
            out = run_protocol(params, asg, A, B, seed=i).decoded
            good += np.array_equal(out.data, oracles.matmul(A.data, B.data, spec))
        all_ok &= good == 100
        summary.append(f"{key} N={L + 2 * T}: {good}/100")
    report(acceptance_log, 6, all_ok, "decoded = AB; " + ", ".join(summary), time.perf_counter() - t0)
    assert all_ok


def test_criterion_7_security(acceptance_log, sweep_assignments):
    t0 = time.perf_counter()
    audits = []
    a_ok = True
    for key in SWEEP:
        q, L, T = key
        asg, searched = sweep_assignments[key]
        f_rep, g_rep = audit_assignment(asg.params, asg)
        passed = f_rep.passed and g_rep.passed
        a_ok &= passed
        origin = "audited search" if searched else "no audited assignment within 1000 draws, unaudited fallback"
        audits.append(f"{key} {'pass' if passed else 'FAIL'} ({origin})")
    leaks = []
    b_ok = True
    for q, L, T in [(2, 2, 1), (3, 2, 2)]:
        params = params_validate(q, L, T)
        asg = assign_points(params, seed=0)
        spec = params.spec
        A0 = FieldMatrix.zeros(spec, 1, L)
        A1 = FieldMatrix(spec, np.arange(1, L + 1, dtype=np.int64).reshape(1, L) % spec.order)
        B0 = FieldMatrix.zeros(spec, L, 1)
        B1 = FieldMatrix(spec, np.full((L, 1), spec.order - 1, dtype=np.int64))
        rep = leakage_experiment(params, asg, A0, B0, alt_A=A1, alt_B=B1)
        b_ok &= rep.passed
        leaks.append(f"({q},{L},{T}) {rep.tuples} tuples {'uniform+identical' if rep.passed else 'LEAK'}")
    elapsed = time.perf_counter() - t0
    ok = a_ok and b_ok and elapsed < 5.0
    report(acceptance_log, 7, ok, f"(a) T-MDS of criterion-6 assignments: {'; '.join(audits)}; (b) {', '.join(leaks)}",
           elapsed)
    assert ok


def test_criterion_8_rate(acceptance_log):
    t0 = time.perf_counter()
    rnd = random.Random(8)
    cache = {}
    mismatches = []
    grid = 0
    while grid < 100:
        L, T = rnd.randint(1, 6), rnd.randint(1, 5)
        q = 3
        if not (3 <= L + T <= 12):
            continue
        a, c = rnd.randint(1, 6), rnd.randint(1, 6)
        b = L * rnd.randint(1, 3)
        params = params_validate(q, L, T, a, b, c)
        if (L, T) not in cache:
            cache[(L, T)] = assign_points(params_validate(q, L, T), seed=0, require_tmds=False)
        asg = dataclasses.replace(cache[(L, T)], params=params)
        spec = params.spec
        rng = np.random.default_rng(grid)
        A = FieldMatrix.random(spec, a, b, rng)
        B = FieldMatrix.random(spec, b, c, rng)
        t = run_protocol(params, asg, A, B, seed=grid)
        upload = sum(s.f_share.data.size + s.g_share.data.size for s in t.shares)
        download = sum(r.data.size for _, r in t.responses)
        counted = Fraction(t.decoded.data.size, upload + download)
        if counted != rate_eval(params):
            mismatches.append((a, b, c, L, T))
        grid += 1
    a = b = c = 2
    alt = Fraction(a * c, 4 * a * b + 4 * b * c + 2 * a * c)  # per-server counting without the 1/L block size
    closed = rate_eval(SchemeParams(2, 2, 1, a, b, c))
    ok = not mismatches
    report(acceptance_log, 8, ok, f"closed-form rate equals transcript symbol count on {grid} tuples "
           f"(mismatches {mismatches}); q=2 (L,T)=(2,1) a=b=c=2: closed form {closed}, full-block count {alt}",
           time.perf_counter() - t0)
    assert ok
