"""JSON matrix files, spec files, CSV and SVG output.

A matrix file is ``{"rows": r, "cols": c, "data": [[re, im], ...]}`` with
``data`` in row-major order.  Spec files embed matrix objects:

* KMS spec: ``{"m": 3, "A": <matrix>}``
* companion spec: ``{"m": .., "n": .., "diag_blocks": [..], "bottom_blocks": [..]}``
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .companion import GeneralizedCompanionSpec
from .errors import SdlabError
from .kms import KmsSpec
from .numrange import BoundarySample


class ParseError(SdlabError, ValueError):
    pass


def _number(x) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"expected a number, got {x!r}")
    if not math.isfinite(x):
        raise ParseError("non-finite entry")
    return float(x)


def matrix_from_obj(obj) -> np.ndarray:
    if isinstance(obj, list):
        # bare nested list of real numbers
        try:
            rows = [[_number(v) for v in row] for row in obj]
        except TypeError as exc:
            raise ParseError("nested list must contain rows of numbers") from exc
        if not rows or not rows[0] or any(len(r) != len(rows[0]) for r in rows):
            raise ParseError("ragged or empty nested list")
        return np.array(rows, dtype=complex)
    if not isinstance(obj, dict):
        raise ParseError("matrix must be a JSON object")
    try:
        rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    except KeyError as exc:
        raise ParseError(f"missing key {exc}") from None
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 1 or cols < 1:
        raise ParseError("rows and cols must be positive integers")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise ParseError(f"data must hold rows*cols = {rows * cols} entries")
    vals = []
    for entry in data:
        if not isinstance(entry, list) or len(entry) != 2:
            raise ParseError("each entry must be a [re, im] pair")
        vals.append(complex(_number(entry[0]), _number(entry[1])))
    return np.array(vals, dtype=complex).reshape(rows, cols)


def matrix_to_obj(M) -> dict:
    M = np.asarray(M, dtype=complex)
    return {
        "rows": int(M.shape[0]),
        "cols": int(M.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in M.ravel()],
    }


def dumps_matrix(M) -> str:
    """Canonical text: one line of compact JSON plus a newline."""
    return json.dumps(matrix_to_obj(M), separators=(", ", ": ")) + "\n"


def loads_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None


def read_json(source: str):
    """Parse ``source`` as inline JSON if it looks like JSON, else as a path."""
    stripped = source.lstrip()
    if stripped.startswith(("{", "[")):
        return loads_json(stripped)
    return loads_json(Path(source).read_text())


def kms_spec_from_obj(obj) -> KmsSpec:
    if not isinstance(obj.get("m"), int):
        raise ParseError("KMS spec needs integer m")
    return KmsSpec(obj["m"], matrix_from_obj(obj["A"]))


def companion_spec_from_obj(obj) -> GeneralizedCompanionSpec:
    try:
        m, n = obj["m"], obj["n"]
        diag = [matrix_from_obj(b) for b in obj["diag_blocks"]]
        bottom = [matrix_from_obj(b) for b in obj["bottom_blocks"]]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad companion spec: {exc}") from None
    if not (isinstance(m, int) and isinstance(n, int)):
        raise ParseError("m and n must be integers")
    return GeneralizedCompanionSpec(m, n, tuple(diag), tuple(bottom))


def companion_spec_to_obj(spec: GeneralizedCompanionSpec) -> dict:
    return {
        "m": spec.m,
        "n": spec.n,
        "diag_blocks": [matrix_to_obj(b) for b in spec.diag_blocks],
        "bottom_blocks": [matrix_to_obj(b) for b in spec.bottom_blocks],
    }


def kind_of(obj) -> str:
    if isinstance(obj, dict) and "A" in obj and "m" in obj:
        return "kms"
    if isinstance(obj, dict) and "diag_blocks" in obj:
        return "companion"
    return "matrix"


def boundary_csv(samples: list[BoundarySample]) -> str:
    lines = ["theta,support,re,im"]
    lines += [f"{s.theta!r},{s.support!r},{s.point.real!r},{s.point.imag!r}" for s in samples]
    return "\n".join(lines) + "\n"


def boundary_svg(samples: list[BoundarySample], size: int = 400) -> str:
    """Single closed polyline through the boundary points, 5% margin."""
    xs = np.array([s.point.real for s in samples])
    ys = np.array([s.point.imag for s in samples])
    xmin, xmax, ymin, ymax = xs.min(), xs.max(), ys.min(), ys.max()
    span = max(xmax - xmin, ymax - ymin, 1e-12)
    pad = 0.05 * span
    vb = (xmin - pad, -(ymax + pad), span + 2 * pad, span + 2 * pad)
    pts = " ".join(f"{x:.9g},{-y:.9g}" for x, y in zip(np.r_[xs, xs[:1]], np.r_[ys, ys[:1]]))
    stroke = span / 200
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="{vb[0]:.9g} {vb[1]:.9g} {vb[2]:.9g} {vb[3]:.9g}">\n'
        f'<polyline fill="none" stroke="black" stroke-width="{stroke:.9g}" points="{pts}"/>\n'
        "</svg>\n"
    )
