"""Text formats: matrix CSV files and ``key=value`` scheme configuration."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from hera.errors import HeraError, ShapeError
from hera.field import FieldMatrix, FieldSpec


class FormatError(HeraError, ValueError):
    """Malformed input file."""


def matrix_to_csv(M: FieldMatrix, header: bool = True) -> str:
    lines = [f"# field {M.spec.header()}"] if header else []
    lines.append(f"{M.rows},{M.cols}")
    lines += [",".join(str(v) for v in row) for row in M.tolist()]
    return "\n".join(lines) + "\n"


def matrix_from_csv(text: str, spec: FieldSpec | None = None) -> FieldMatrix:
    """Parse ``rows,cols`` then one CSV line per row; ``# field`` fixes the field if given."""
    declared = None
    body = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "field":
                declared = FieldSpec.from_header(parts[1])
            continue
        body.append(line)
    if spec is None:
        spec = declared
    elif declared is not None and declared != spec:
        raise FormatError(
            f"file is over GF({declared.p}^{declared.k}) {declared.modulus}, expected GF({spec.p}^{spec.k}) {spec.modulus}"
        )
    if spec is None:
        raise FormatError("no field given and no '# field' header")
    if not body:
        raise FormatError("missing 'rows,cols' line")
    try:
        rows, cols = (int(v) for v in body[0].split(","))
        data = [[int(v) for v in line.split(",")] for line in body[1:]]
    except ValueError as exc:
        raise FormatError(f"bad matrix entry: {exc}") from None
    if len(data) != rows or any(len(r) != cols for r in data):
        raise ShapeError(f"declared {rows}x{cols} but found {len(data)} rows")
    arr = np.array(data, dtype=np.int64).reshape(rows, cols)
    try:
        return FieldMatrix(spec, arr)
    except HeraError as exc:
        raise FormatError(str(exc)) from None


def read_matrix(path: str | Path, spec: FieldSpec | None = None) -> FieldMatrix:
    return matrix_from_csv(Path(path).read_text(encoding="utf-8"), spec)


def write_matrix(path: str | Path, M: FieldMatrix) -> None:
    Path(path).write_text(matrix_to_csv(M), encoding="utf-8")


INT_KEYS = ("q", "L", "T", "a", "b", "c", "seed")


def parse_config(text: str) -> dict:
    """``key=value`` lines; ``points`` is a comma list of 1-based canonical point indices."""
    out: dict = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise FormatError(f"line {n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in INT_KEYS and key != "points":
            raise FormatError(f"line {n}: unknown key {key!r}")
        try:
            if key == "points":
                out[key] = [int(v) for v in value.split(",") if v.strip()]
            else:
                out[key] = int(value)
        except ValueError:
            raise FormatError(f"line {n}: {key} must be an integer") from None
    return out


def load_config(path: str | Path) -> dict:
    return parse_config(Path(path).read_text(encoding="utf-8"))
