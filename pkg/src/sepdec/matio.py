"""Plain-text matrix files and Holevo-form JSON.

Matrix file format: the first significant line holds the two factor
dimensions "m n"; the following m*n lines hold m*n whitespace-separated
complex literals each.  Literals are "a+bi" / "a-bi" with decimal or
exponent notation ("1.5e-3+2e-4i"); bare reals are accepted on input.
Anything from '#' to the end of a line is a comment.  Values are emitted
with 17 significant digits, so parse and emit round-trip float64 exactly.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

import numpy as np

from .bipartite import BipartiteMatrix
from .channels import HolevoForm
from .errors import ParseError

_NUM = r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_FULL_RE = re.compile(rf"^(?P<re>{_NUM})(?P<im>[+-](?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)i$")
_REAL_RE = re.compile(rf"^(?P<re>{_NUM})$")
_IMAG_RE = re.compile(rf"^(?P<im>{_NUM})i$")


def parse_complex(token: str) -> complex:
    """Parse one "a+bi" literal; bare "a" and "bi" forms are accepted."""
    m = _FULL_RE.match(token)
    if m:
        return complex(float(m.group("re")), float(m.group("im")))
    m = _REAL_RE.match(token)
    if m:
        return complex(float(m.group("re")), 0.0)
    m = _IMAG_RE.match(token)
    if m:
        return complex(0.0, float(m.group("im")))
    raise ParseError(f"bad complex literal {token!r}")


def format_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}i"


def _significant_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_matrix_text(text: str) -> BipartiteMatrix:
    """Parse the matrix file format into a BipartiteMatrix."""
    lines = _significant_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError("empty matrix file") from None
    parts = header.split()
    if len(parts) != 2:
        raise ParseError(f"line {lineno}: header must be 'm n', got {header!r}")
    try:
        m, n = int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError(f"line {lineno}: header must be two integers, got {header!r}") from None
    if m < 1 or n < 1:
        raise ParseError(f"line {lineno}: dimensions must be positive, got {m} {n}")

    d = m * n
    mat = np.zeros((d, d), dtype=np.complex128)
    row = 0
    for lineno, line in lines:
        if row >= d:
            raise ParseError(f"line {lineno}: expected {d} matrix rows, found more")
        tokens = line.split()
        if len(tokens) != d:
            raise ParseError(
                f"line {lineno}: expected {d} entries in row {row + 1}, got {len(tokens)}"
            )
        for col, token in enumerate(tokens):
            try:
                mat[row, col] = parse_complex(token)
            except ParseError as exc:
                raise ParseError(f"line {lineno}, column {col + 1}: {exc}") from None
        row += 1
    if row != d:
        raise ParseError(f"expected {d} matrix rows, got {row}")
    try:
        return BipartiteMatrix(m=m, n=n, mat=mat)
    except ValueError as exc:
        # overflowing literals ("1e999") parse to non-finite floats
        raise ParseError(str(exc)) from None


def parse_matrix_file(path) -> BipartiteMatrix:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return parse_matrix_text(text)


def emit_matrix_text(t: BipartiteMatrix) -> str:
    rows = [f"{t.m} {t.n}"]
    for row in t.mat:
        rows.append(" ".join(format_complex(z) for z in row))
    return "\n".join(rows) + "\n"


def emit_matrix_file(t: BipartiteMatrix, path) -> None:
    Path(path).write_text(emit_matrix_text(t))


def matrix_to_lists(mat: np.ndarray) -> list:
    """Nested lists of complex literals, the JSON encoding of a matrix."""
    return [[format_complex(z) for z in row] for row in np.atleast_2d(mat)]


def matrix_from_lists(rows, what: str = "matrix") -> np.ndarray:
    try:
        return np.array([[parse_complex(tok) for tok in row] for row in rows])
    except (TypeError, ParseError) as exc:
        raise ParseError(f"bad {what} encoding: {exc}") from None


def vector_to_list(vec: np.ndarray) -> list:
    return [format_complex(z) for z in vec]


def vector_from_list(tokens, what: str = "vector") -> np.ndarray:
    try:
        return np.array([parse_complex(tok) for tok in tokens])
    except (TypeError, ParseError) as exc:
        raise ParseError(f"bad {what} encoding: {exc}") from None


def parse_holevo_json(text: str) -> HolevoForm:
    """Holevo form from JSON: {"m", "n", "pairs": [{"f": rows, "r": rows}]}."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("Holevo JSON must be an object")
    try:
        m, n = int(doc["m"]), int(doc["n"])
        raw_pairs = doc["pairs"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"Holevo JSON needs integer 'm', 'n' and a 'pairs' list: {exc}") from None
    pairs = []
    for k, entry in enumerate(raw_pairs):
        if not isinstance(entry, dict) or "f" not in entry or "r" not in entry:
            raise ParseError(f"pair {k}: expected an object with 'f' and 'r'")
        f = matrix_from_lists(entry["f"], what=f"pair {k} 'f'")
        r = matrix_from_lists(entry["r"], what=f"pair {k} 'r'")
        if f.shape != (m, m) or r.shape != (n, n):
            raise ParseError(
                f"pair {k}: shapes {f.shape}, {r.shape} do not match m={m}, n={n}"
            )
        pairs.append((f, r))
    return HolevoForm(m=m, n=n, pairs=pairs)


def parse_holevo_file(path) -> HolevoForm:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return parse_holevo_json(text)


def emit_holevo_json(h: HolevoForm) -> str:
    doc = {
        "m": h.m,
        "n": h.n,
        "pairs": [{"f": matrix_to_lists(f), "r": matrix_to_lists(r)} for f, r in h.pairs],
    }
    return json.dumps(doc, indent=2) + "\n"
