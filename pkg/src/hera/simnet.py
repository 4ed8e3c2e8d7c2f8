"""In-process honest-but-curious server pool and protocol orchestration."""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from hera.curve import CurvePoint
from hera.errors import ParameterError
from hera.field import FieldMatrix
from hera.formats import matrix_to_csv
from hera.scheme import PointAssignment, SchemeParams, decode, encode, mask_rng

RESPONSE_SIGN = "negated"  # servers return -f(P)g(P); the decoder only sums


@dataclass(frozen=True)
class ServerShare:
    server_index: int
    point: CurvePoint
    f_share: FieldMatrix
    g_share: FieldMatrix


class Server:
    """Holds exactly what was uploaded to it and nothing else."""

    def __init__(self, index: int, f_share: FieldMatrix, g_share: FieldMatrix) -> None:
        self.index = index
        self._view = (f_share, g_share)

    @property
    def view(self) -> tuple[FieldMatrix, FieldMatrix]:
        return self._view

    def respond(self) -> FieldMatrix:
        f_share, g_share = self._view
        return -(f_share @ g_share)


@dataclass(frozen=True)
class Costs:
    upload_symbols: Fraction
    download_symbols: int
    retrieved_symbols: int
    symbol_bytes: int

    @property
    def rate(self) -> Fraction:
        return Fraction(self.retrieved_symbols) / (self.upload_symbols + self.download_symbols)

    def to_dict(self) -> dict:
        def num(v):
            v = Fraction(v)
            return v.numerator if v.denominator == 1 else str(v)

        return {
            "upload_symbols": num(self.upload_symbols),
            "download_symbols": self.download_symbols,
            "retrieved_symbols": self.retrieved_symbols,
            "rate": str(self.rate),
            "upload_bytes": num(self.upload_symbols * self.symbol_bytes),
            "download_bytes": self.download_symbols * self.symbol_bytes,
        }


def communication_costs(params: SchemeParams) -> Costs:
    """Symbol counts from first principles: each server gets one A-block and one B-block share."""
    a, b, c, L, N = params.a, params.b, params.c, params.L, params.N
    if min(a, b, c, L) <= 0:
        raise ParameterError("dimension", "a, b, c and L must be positive")
    upload = N * (Fraction(a * b, L) + Fraction(b * c, L))
    symbol_bytes = max(1, math.ceil(math.log2(params.q**2) / 8))
    return Costs(upload, N * a * c, a * c, symbol_bytes)


def rate_eval(params: SchemeParams) -> Fraction:
    """R = (N b / L * (1/a + 1/c) + N)^-1, exactly."""
    a, b, c, L, N = params.a, params.b, params.c, params.L, params.N
    if min(a, b, c, L) <= 0:
        raise ParameterError("dimension", "a, b, c and L must be positive")
    if params.T < 1:
        raise ParameterError("range", "T must be >= 1")
    return 1 / (Fraction(N * b, L) * (Fraction(1, a) + Fraction(1, c)) + N)


@dataclass(frozen=True)
class Transcript:
    params: SchemeParams
    assignment: PointAssignment
    seed: int
    shares: tuple[ServerShare, ...]
    responses: tuple[tuple[int, FieldMatrix], ...]
    decoded: FieldMatrix
    costs: Costs

    def to_dict(self) -> dict:
        p = self.params
        return {
            "field": self.decoded.spec.header(),
            "params": {
                "q": p.q, "L": p.L, "T": p.T, "a": p.a, "b": p.b, "c": p.c,
                "m": p.m, "m_perp": p.m_perp, "N": p.N, "seed": self.seed,
            },
            "assignment": self.assignment.summary(),
            "upload": [
                {
                    "server": s.server_index,
                    "point": [s.point.alpha.value, s.point.beta.value],
                    "f_share": s.f_share.tolist(),
                    "g_share": s.g_share.tolist(),
                }
                for s in self.shares
            ],
            "download": [{"server": i, "response": r.tolist()} for i, r in self.responses],
            "decode": {"response_sign": RESPONSE_SIGN, "decoded": self.decoded.tolist()},
            "costs": self.costs.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        d = self.to_dict()
        out = ["# hera transcript", f"field={d['field']}", "", "[params]"]
        out += [f"{k}={v}" for k, v in d["params"].items()]
        out += ["", "[assignment]"]
        for k, v in d["assignment"].items():
            out.append(f"{k}=" + " ".join(
                ",".join(map(str, x)) if isinstance(x, list) else str(x) for x in v
            ))
        out += ["", "[upload]"]
        for s in self.shares:
            out.append(f"server {s.server_index} point={s.point.alpha.value},{s.point.beta.value}")
            out.append("f_share")
            out.append(matrix_to_csv(s.f_share, header=False).rstrip())
            out.append("g_share")
            out.append(matrix_to_csv(s.g_share, header=False).rstrip())
        out += ["", "[download]"]
        for i, r in self.responses:
            out.append(f"server {i} response")
            out.append(matrix_to_csv(r, header=False).rstrip())
        out += ["", "[decode]", f"response_sign={RESPONSE_SIGN}", "decoded"]
        out.append(matrix_to_csv(self.decoded, header=False).rstrip())
        out += ["", "[costs]"]
        out += [f"{k}={v}" for k, v in d["costs"].items()]
        return "\n".join(out) + "\n"


def run_protocol(
    params: SchemeParams,
    assignment: PointAssignment,
    A: FieldMatrix,
    B: FieldMatrix,
    seed: int = 0,
    workers: int | None = None,
) -> Transcript:
    """Upload shares, collect -h(P) from every server, decode by summation.

    ``workers`` > 1 runs the server computations on a thread pool; responses
    are keyed by server position, so the transcript does not depend on it.
    """
    pair = encode(params, assignment, A, B, rng=mask_rng(seed))
    positions = assignment.servers
    pts = assignment.points(positions)
    f_vals = pair.f.evaluate_many(pts)
    g_vals = pair.g.evaluate_many(pts)
    spec = assignment.spec
    shares = tuple(
        ServerShare(pos, pt, FieldMatrix._wrap(spec, fv), FieldMatrix._wrap(spec, gv))
        for pos, pt, fv, gv in zip(positions, pts, f_vals, g_vals)
    )
    servers = [Server(s.server_index, s.f_share, s.g_share) for s in shares]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            answers = dict(zip(positions, pool.map(Server.respond, servers)))
    else:
        answers = {srv.index: srv.respond() for srv in servers}
    responses = tuple((pos, answers[pos]) for pos in positions)
    decoded = decode(params, [r for _, r in responses])
    return Transcript(params, assignment, seed, shares, responses, decoded, communication_costs(params))
