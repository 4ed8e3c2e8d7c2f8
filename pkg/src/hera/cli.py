"""Command-line front end.

Exit codes: 0 success, 2 parse error, 3 parameter constraint (bound, partition,
...), 4 singular interpolation system, 5 audit failure (T-MDS, leakage, or no
audit-passing assignment found), 6 self-check mismatch.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from hera.curve import curve_enumerate
from hera.errors import (
    AssignmentError,
    EnumerationError,
    FieldError,
    ParameterError,
    ShapeError,
    SingularMatrixError,
)
from hera.field import FieldMatrix, hermitian_field
from hera.formats import FormatError, load_config, read_matrix, write_matrix
from hera.hermcode import code_build, dual_check, min_weight_codeword
from hera.reference import f4_case, f9_case
from hera.scheme import (
    SchemeParams,
    _resolve_order,
    assign_points,
    audit_assignment,
    build_assignment,
    lagrange_basis_f,
    lagrange_basis_g,
    leakage_experiment,
    params_validate,
)
from hera.simnet import communication_costs, rate_eval, run_protocol

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_BOUND = 3
EXIT_SINGULAR = 4
EXIT_AUDIT = 5
EXIT_SELFCHECK = 6

# older names for the two worked cases
CASE_ALIASES = {"sec3": "f4", "sec6": "f9"}


class CliFailure(Exception):
    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text.rstrip())


def _add_scheme_flags(p: argparse.ArgumentParser, need_matrices: bool = False) -> None:
    p.add_argument("--config", help="key=value file with q, L, T, a, b, c, seed, points")
    p.add_argument("--q", type=int)
    p.add_argument("--L", type=int)
    p.add_argument("--T", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--c", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--points", help="comma-separated 1-based canonical point indices")
    if need_matrices:
        p.add_argument("--A", dest="A", help="CSV file for A")
        p.add_argument("--B", dest="B", help="CSV file for B")
        p.add_argument("--out", help="output directory (default: current directory)")
        p.add_argument("--no-selfcheck", action="store_true", help="skip comparing against A @ B")
        p.add_argument("--allow-insecure", action="store_true",
                       help="accept a decodable assignment that fails the T-MDS audit")
        p.add_argument("--workers", type=int, default=None, help="thread pool size for servers")


def _scheme_config(args) -> dict:
    cfg = load_config(args.config) if args.config else {}
    for key in ("q", "L", "T", "a", "b", "c", "seed"):
        if getattr(args, key, None) is not None:
            cfg[key] = getattr(args, key)
    if getattr(args, "points", None):
        try:
            cfg["points"] = [int(v) for v in args.points.split(",") if v.strip()]
        except ValueError:
            raise FormatError("--points must be comma-separated integers") from None
    missing = [k for k in ("q", "L", "T") if k not in cfg]
    if missing:
        raise FormatError(f"missing required setting(s): {', '.join(missing)}")
    cfg.setdefault("seed", 0)
    return cfg


def _override(params: SchemeParams, cfg: dict):
    if "points" not in cfg:
        return None
    table = curve_enumerate(params.spec)
    out = []
    for i in cfg["points"]:
        if not 1 <= i <= table.n:
            raise FormatError(f"point index {i} outside [1, {table.n}]")
        out.append(table.points[i - 1])
    return out


def cmd_info(args) -> int:
    spec = hermitian_field(args.q)
    code = code_build(spec, args.m)
    info = code.info()
    info["field"] = spec.header()
    text = "\n".join(f"{k}={v}" for k, v in info.items())
    _emit(args, info, text)
    return EXIT_OK


def cmd_curve_dump(args) -> int:
    table = curve_enumerate(hermitian_field(args.q))
    if args.json:
        print(json.dumps({"q": table.q, "field": table.spec.header(),
                          "points": [list(p.key) for p in table.points]}))
    else:
        sys.stdout.write(table.dump())
    return EXIT_OK


def cmd_distance(args) -> int:
    spec = hermitian_field(args.q)
    code = code_build(spec, args.m)
    weight, witness = min_weight_codeword(code)
    payload = {"q": args.q, "m": args.m, "n": code.n, "k": code.dim, "d_star": code.d_star,
               "distance": weight, "witness": witness.tolist()}
    text = "\n".join(f"{k}={v}" for k, v in payload.items())
    _emit(args, payload, text)
    return EXIT_OK


def cmd_rate(args) -> int:
    params = SchemeParams(args.q or 2, args.L, args.T, args.a, args.b, args.c)
    rate = rate_eval(params)
    costs = communication_costs(params)
    payload = {"a": args.a, "b": args.b, "c": args.c, "L": args.L, "T": args.T, "N": params.N,
               "rate": str(rate), "rate_float": float(rate), **costs.to_dict()}
    payload["accounting_matches"] = costs.rate == rate
    text = "\n".join(f"{k}={v}" for k, v in payload.items())
    _emit(args, payload, text)
    return EXIT_OK


def cmd_run(args) -> int:
    cfg = _scheme_config(args)
    if not args.A or not args.B:
        raise FormatError("run needs --A and --B matrix files")
    spec = hermitian_field(cfg["q"])
    for path in (args.A, args.B):
        if not Path(path).exists():
            raise FormatError(f"no such file: {path}")
    A = read_matrix(args.A, spec)
    B = read_matrix(args.B, spec)
    params = params_validate(cfg["q"], cfg["L"], cfg["T"], A.rows, A.cols, B.cols)
    for key, actual in (("a", A.rows), ("b", A.cols), ("c", B.cols)):
        if key in cfg and cfg[key] != actual:
            raise ShapeError(f"config says {key}={cfg[key]} but the matrices give {actual}")
    if B.rows != A.cols:
        raise ShapeError(f"A is {A.shape} but B is {B.shape}")
    assignment = assign_points(params, seed=cfg["seed"], override=_override(params, cfg),
                               require_tmds=not args.allow_insecure)
    transcript = run_protocol(params, assignment, A, B, seed=cfg["seed"], workers=args.workers)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    name = "transcript.json" if args.json else "transcript.txt"
    (out / name).write_text(transcript.to_json() if args.json else transcript.to_text(), encoding="utf-8")
    write_matrix(out / "decoded.csv", transcript.decoded)
    status = "skipped"
    if not args.no_selfcheck:
        status = "ok" if transcript.decoded == A @ B else "mismatch"
    print(f"decoded {params.a}x{params.c} product with N={params.N} servers; selfcheck={status}")
    print(f"wrote {out / name} and {out / 'decoded.csv'}")
    if status == "mismatch":
        raise CliFailure(EXIT_SELFCHECK, "selfcheck: decoded matrix differs from A @ B")
    return EXIT_OK


def _assignment_for_audit(params: SchemeParams, cfg: dict):
    override = _override(params, cfg)
    table = curve_enumerate(params.spec)
    if override is not None:
        return build_assignment(params, table, _resolve_order(params, table, override)), "override"
    try:
        return assign_points(params, table, seed=cfg["seed"]), "search"
    except AssignmentError:
        return assign_points(params, table, seed=cfg["seed"], require_tmds=False), "search-unaudited"


def _audit_payload(params: SchemeParams, assignment, source: str) -> tuple[dict, bool]:
    f_rep, g_rep = audit_assignment(params, assignment)
    spec = params.spec
    f_code, g_code = code_build(spec, params.m), code_build(spec, params.m_perp)
    payload = {
        "q": params.q, "L": params.L, "T": params.T, "N": params.N, "m": params.m,
        "m_perp": params.m_perp, "assignment_source": source, "servers": assignment.servers,
        "tmds_f": f_rep.to_dict(), "tmds_g": g_rep.to_dict(), "dual_check": dual_check(f_code, g_code),
    }
    ok = f_rep.passed and g_rep.passed and payload["dual_check"]
    small = SchemeParams(params.q, params.L, params.T, 1, params.L, 1)
    try:
        A = FieldMatrix.zeros(spec, 1, params.L)
        leak = leakage_experiment(small, dataclasses.replace(assignment, params=small), A)
        payload["leakage"] = leak.to_dict()
        ok = ok and leak.passed
    except EnumerationError as exc:
        payload["leakage"] = {"skipped": str(exc)}
    return payload, ok


def _audit_text(payload: dict, limit: int | None = 10) -> str:
    lines = [(f"q={payload['q']} L={payload['L']} T={payload['T']} N={payload['N']} "
              f"m={payload['m']} m_perp={payload['m_perp']} ({payload['assignment_source']})"),
             f"servers={','.join(map(str, payload['servers']))}"]
    for side in ("tmds_f", "tmds_g"):
        r = payload[side]
        verdict = "pass" if r["passed"] else "FAIL"
        lines.append(f"{r['label']}-mask T-MDS: {r['full_rank']}/{r['subsets']} subsets full rank ... {verdict}")
        shown = r["failures"] if limit is None else r["failures"][:limit]
        lines += [f"  rank-deficient subset {s}" for s in shown]
        if len(shown) < len(r["failures"]):
            lines.append(f"  ... {len(r['failures']) - len(shown)} more (--verbose or --json for all)")
    lines.append(f"dual check: {'pass' if payload['dual_check'] else 'FAIL'}")
    leak = payload["leakage"]
    if "skipped" in leak:
        lines.append(f"leakage: skipped ({leak['skipped']})")
    else:
        bad = [s["subset"] for s in leak["f"] + leak["g"] if not (s["uniform"] and s["identical"])]
        lines.append(f"leakage: {leak['mask_tuples']} mask tuples per input ... {'pass' if leak['passed'] else 'FAIL'}")
        for s in bad:
            lines.append(f"  non-uniform or input-dependent subset {s}")
    return "\n".join(lines)


def cmd_audit(args) -> int:
    cfg = _scheme_config(args)
    L = cfg["L"]
    params = params_validate(cfg["q"], L, cfg["T"], cfg.get("a", 1), cfg.get("b", L), cfg.get("c", 1))
    assignment, source = _assignment_for_audit(params, cfg)
    payload, ok = _audit_payload(params, assignment, source)
    _emit(args, payload, _audit_text(payload, None if args.verbose else 10))
    return EXIT_OK if ok else EXIT_AUDIT


def _repro(args, params, assignment, var: str) -> int:
    spec = params.spec
    lines = [(f"field GF({spec.p}^{spec.k}) modulus {spec.modulus} (root {var}), q={params.q}, "
              f"L={params.L}, T={params.T}, m={params.m}, m_perp={params.m_perp}")]
    for pos in range(1, params.n + 1):
        pt = assignment.point(pos)
        role = ("data" if pos in assignment.data_positions else "mask" if pos in assignment.mask_positions
                else "zero" if pos in assignment.zero_positions else "tail")
        if role != "zero":
            lines.append(f"P{pos} = ({pt.alpha}, {pt.beta}) [{role}]".replace("z", var))
    fb, gb = lagrange_basis_f(params, assignment), lagrange_basis_g(params, assignment)
    for i, f in enumerate(fb, 1):
        lines.append(f"f{i} = {f.display(var)}")
    for i, g in enumerate(gb, 1):
        lines.append(f"g{i} = {g.display(var)}")
    # interpolation identities
    K = params.K
    interp = [(f, i) for i, f in enumerate(fb)]
    ok_f = all(
        int(f.evaluate_many(assignment.points(range(1, K + 1))).reshape(-1)[j]) == (i == j)
        for f, i in interp for j in range(K)
    )
    gvals = [g.evaluate_many(assignment.points(range(1, params.n - K + 1))).reshape(-1) for g in gb]
    ok_g = all(int(v[j]) == (i == j) for i, v in enumerate(gvals) for j in range(K)) and not any(
        v[K:].any() for v in gvals
    )
    rng = np.random.default_rng(args.seed)
    correct = 0
    trials = 100
    for t in range(trials):
        A = FieldMatrix.random(spec, params.a, params.b, rng)
        B = FieldMatrix.random(spec, params.b, params.c, rng)
        correct += run_protocol(params, assignment, A, B, seed=t).decoded == A @ B
    payload, audit_ok = _audit_payload(params, assignment, "worked example")
    lines.append(f"interpolation identities: f {'ok' if ok_f else 'FAIL'}, g {'ok' if ok_g else 'FAIL'}")
    lines.append(f"decode: {correct}/{trials} random instances equal A @ B")
    lines.append(_audit_text(payload))
    payload.update({
        "f_basis": [f.scalar_coeffs() for f in fb], "g_basis": [g.scalar_coeffs() for g in gb],
        "f_display": [f.display(var) for f in fb], "g_display": [g.display(var) for g in gb],
        "interpolation_ok": ok_f and ok_g, "decode_correct": correct, "decode_trials": trials,
    })
    _emit(args, payload, "\n".join(lines))
    if not (ok_f and ok_g) or correct != trials:
        return EXIT_SELFCHECK
    return EXIT_OK if audit_ok else EXIT_AUDIT


def cmd_repro(args) -> int:
    if CASE_ALIASES.get(args.case, args.case) == "f4":
        params, assignment = f4_case(2, 2, 2)
        return _repro(args, params, assignment, "d")
    params, assignment = f9_case(2, 2, 2)
    return _repro(args, params, assignment, "d")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hera", description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        p.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS)
        return p

    p = common(sub.add_parser("info", help="parameters of C(m P_inf)"))
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_info)

    code = sub.add_parser("code", help="code utilities")
    code_sub = code.add_subparsers(dest="action", required=True)
    p = common(code_sub.add_parser("info", help="same as 'hera info'"))
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_info)

    curve = sub.add_parser("curve", help="curve utilities")
    curve_sub = curve.add_subparsers(dest="action", required=True)
    p = common(curve_sub.add_parser("dump", help="list the affine points"))
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_curve_dump)

    p = common(sub.add_parser("distance", help="brute-force minimum distance"))
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_distance)

    p = common(sub.add_parser("rate", help="total communication rate"))
    for k in ("a", "b", "c", "L", "T"):
        p.add_argument(f"--{k}", type=int, required=True)
    p.add_argument("--q", type=int)
    p.set_defaults(func=cmd_rate)

    p = common(sub.add_parser("run", help="run the protocol on matrix files"))
    _add_scheme_flags(p, need_matrices=True)
    p.set_defaults(func=cmd_run)

    p = common(sub.add_parser("audit", help="T-MDS, duality and leakage audit"))
    _add_scheme_flags(p)
    p.set_defaults(func=cmd_audit)

    p = common(sub.add_parser("repro", help="rerun a worked example: f4 (q=2, L=2, T=1) or f9 (q=3, L=2, T=2)"))
    p.add_argument("case", choices=["f4", "f9", *CASE_ALIASES])
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_repro)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CliFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (FormatError, ShapeError) as exc:
        print(f"error: parse: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FieldError as exc:
        print(f"error: bound: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except AssignmentError as exc:
        if exc.diagnostics.get("check") == "override":
            print(f"error: parse: {exc}", file=sys.stderr)
            return EXIT_PARSE
        code =EXIT_SINGULAR if exc.diagnostics.get("check", "").endswith("interpolation") else EXIT_AUDIT
        detail = exc.diagnostics.get("rejections")
        print(f"error: {'singular' if code == EXIT_SINGULAR else 'audit'}: {exc}"
              + (f" {detail}" if detail else ""), file=sys.stderr)
        return code
    except SingularMatrixError as exc:
        print(f"error: singular: {exc}", file=sys.stderr)
        return EXIT_SINGULAR


if __name__ == "__main__":
    sys.exit(main())
