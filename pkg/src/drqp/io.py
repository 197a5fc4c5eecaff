"""Problem/result file formats and trace logging.

Problems are strict JSON; infinite box bounds travel as the strings "-inf"
and "inf" so plain parsers stay happy. Result files mirror SolveResult
field for field.
"""

from __future__ import annotations

import csv
import json
import warnings
from typing import Optional, Sequence

import numpy as np

from .displacement import IdentityReport
from .engine import SolveResult, TraceRow
from .qp import QpProblem
from .sets import Box, ConvexSet, NonnegOrthant, Product, SecondOrderCone, WholeSpace, Zero

_SYMMETRY_WARN_TOL = 1e-9
_PSD_LOAD_TOL = 1e-8


class ProblemFormatError(ValueError):
    """Schema violation in a problem file; the message names the field."""


def _parse_bound(value, field: str, sign: int) -> float:
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "+inf") and sign > 0:
            return np.inf
        if text == "-inf" and sign < 0:
            return -np.inf
        raise ProblemFormatError(f"field '{field}': invalid bound {value!r}")
    if isinstance(value, (int, float)) and np.isfinite(value):
        return float(value)
    raise ProblemFormatError(f"field '{field}': invalid bound {value!r}")


def _require(obj: dict, key: str, field: str):
    if key not in obj:
        raise ProblemFormatError(f"field '{field}.{key}': missing")
    return obj[key]


def _parse_dim(obj: dict, field: str) -> int:
    dim = _require(obj, "dim", field)
    if not isinstance(dim, int) or dim < 1:
        raise ProblemFormatError(f"field '{field}.dim': expected a positive integer")
    return dim


def parse_set(obj, field: str) -> ConvexSet:
    if not isinstance(obj, dict):
        raise ProblemFormatError(f"field '{field}': expected an object")
    kind = _require(obj, "kind", field)
    if kind == "box":
        lower = _require(obj, "lower", field)
        upper = _require(obj, "upper", field)
        if not isinstance(lower, list) or not isinstance(upper, list):
            raise ProblemFormatError(f"field '{field}': box bounds must be arrays")
        lo = [_parse_bound(v, f"{field}.lower", -1) for v in lower]
        up = [_parse_bound(v, f"{field}.upper", +1) for v in upper]
        try:
            return Box(lo, up)
        except ValueError as exc:
            raise ProblemFormatError(f"field '{field}': {exc}") from exc
    if kind == "nonneg":
        return NonnegOrthant(_parse_dim(obj, field))
    if kind == "zero":
        return Zero(_parse_dim(obj, field))
    if kind == "whole":
        return WholeSpace(_parse_dim(obj, field))
    if kind == "soc":
        return SecondOrderCone(_parse_dim(obj, field))
    if kind == "product":
        blocks = _require(obj, "blocks", field)
        if not isinstance(blocks, list) or not blocks:
            raise ProblemFormatError(f"field '{field}.blocks': expected a nonempty array")
        return Product(
            [parse_set(b, f"{field}.blocks[{i}]") for i, b in enumerate(blocks)]
        )
    raise ProblemFormatError(f"field '{field}.kind': unknown set kind {kind!r}")


def set_to_json(S: ConvexSet) -> dict:
    if isinstance(S, Box):
        def bound(v: float, name: str):
            return name if np.isinf(v) else float(v)

        return {
            "kind": "box",
            "lower": [bound(v, "-inf") for v in S.lower],
            "upper": [bound(v, "inf") for v in S.upper],
        }
    if isinstance(S, NonnegOrthant):
        return {"kind": "nonneg", "dim": S.dim}
    if isinstance(S, Zero):
        return {"kind": "zero", "dim": S.dim}
    if isinstance(S, WholeSpace):
        return {"kind": "whole", "dim": S.dim}
    if isinstance(S, SecondOrderCone):
        return {"kind": "soc", "dim": S.dim}
    if isinstance(S, Product):
        return {"kind": "product", "blocks": [set_to_json(b) for b in S.blocks]}
    raise ValueError(f"set kind {type(S).__name__} has no file representation")


def _parse_matrix(obj, field: str, rows: int, cols: int) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != rows:
        raise ProblemFormatError(f"field '{field}': expected {rows} rows")
    out = np.empty((rows, cols))
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != cols:
            raise ProblemFormatError(f"field '{field}': row {i} must have {cols} entries")
        for j, v in enumerate(row):
            if not isinstance(v, (int, float)) or not np.isfinite(v):
                raise ProblemFormatError(f"field '{field}': entry ({i},{j}) is not a finite number")
            out[i, j] = float(v)
    return out


def _parse_vector(obj, field: str, length: int) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != length:
        raise ProblemFormatError(f"field '{field}': expected {length} entries")
    out = np.empty(length)
    for i, v in enumerate(obj):
        if not isinstance(v, (int, float)) or not np.isfinite(v):
            raise ProblemFormatError(f"field '{field}': entry {i} is not a finite number")
        out[i] = float(v)
    return out


def parse_problem_dict(obj: dict) -> QpProblem:
    if not isinstance(obj, dict):
        raise ProblemFormatError("field '': expected a JSON object")
    n = _require(obj, "n", "")
    m = _require(obj, "m", "")
    if not isinstance(n, int) or n < 1:
        raise ProblemFormatError("field 'n': expected a positive integer")
    if not isinstance(m, int) or m < 1:
        raise ProblemFormatError("field 'm': expected a positive integer")
    Q = _parse_matrix(_require(obj, "Q", ""), "Q", n, n)
    q = _parse_vector(_require(obj, "q", ""), "q", n)
    A = _parse_matrix(_require(obj, "A", ""), "A", m, n)
    B = parse_set(_require(obj, "B", ""), "B")
    C = parse_set(_require(obj, "C", ""), "C")
    if B.dim != n:
        raise ProblemFormatError(f"field 'B': dimension {B.dim} does not match n={n}")
    if C.dim != m:
        raise ProblemFormatError(f"field 'C': dimension {C.dim} does not match m={m}")

    asym = float(np.abs(Q - Q.T).max(initial=0.0))
    if asym > _SYMMETRY_WARN_TOL:
        warnings.warn(f"Q asymmetric by {asym:.2e}; symmetrized as (Q+Q^T)/2")
    Q = 0.5 * (Q + Q.T)
    eigmin = float(np.linalg.eigvalsh(Q).min())
    if eigmin < -_PSD_LOAD_TOL:
        raise ProblemFormatError("Q not positive semidefinite")
    if eigmin < 0.0:
        # within load tolerance: clip the slightly negative eigenvalues
        w, V = np.linalg.eigh(Q)
        Q = (V * np.maximum(w, 0.0)) @ V.T
        Q = 0.5 * (Q + Q.T)
    try:
        return QpProblem(Q=Q, q=q, A=A, B=B, C=C)
    except ValueError as exc:
        raise ProblemFormatError(str(exc)) from exc


def parse_problem(path: str) -> QpProblem:
    """Load and validate a problem file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ProblemFormatError(f"invalid JSON: {exc}") from exc
    return parse_problem_dict(obj)


def problem_to_json(problem: QpProblem) -> dict:
    return {
        "n": problem.n,
        "m": problem.m,
        "Q": problem.Q.tolist(),
        "q": problem.q.tolist(),
        "A": problem.A.tolist(),
        "B": set_to_json(problem.B),
        "C": set_to_json(problem.C),
    }


def result_to_json(result: SolveResult, report: Optional[IdentityReport] = None) -> dict:
    cert = result.certificates
    return {
        "status": result.status.value,
        "iterations": result.iterations,
        "objective": result.objective,
        "z": None if result.z is None else result.z.tolist(),
        "y": None if result.y is None else result.y.tolist(),
        "certificates": {
            "vp_z": cert.vp_z.tolist(),
            "vp_y": cert.vp_y.tolist(),
            "vd_z": cert.vd_z.tolist(),
            "vd_y": cert.vd_y.tolist(),
        },
        "identity_report": {} if report is None else report.to_json(),
        "final_residual": result.final_residual,
    }


def write_trace(rows: Sequence[TraceRow], path: str) -> None:
    """CSV trace with one row per recorded check interval."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iter", "norm_ds", "norm_dx", "norm_dnu", "obj_candidate"])
        for row in rows:
            writer.writerow([row.iter, row.norm_ds, row.norm_dx, row.norm_dnu, row.obj_candidate])
