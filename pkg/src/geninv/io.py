"""Dense matrix files: Matrix Market ``array real general`` and headerless CSV.

Values are written with 17 significant digits so every double survives a
write/read cycle unchanged.
"""

import os

import numpy as np

from .errors import GeninvError

MM_HEADER = "%%MatrixMarket matrix array real general"
FORMATS = ("mm", "csv")


class MatrixFormatError(GeninvError, ValueError):
    """A matrix file could not be parsed; the message names the line."""


def _fmt(x):
    return format(float(x), ".17g")


def guess_format(path, text=None):
    ext = os.path.splitext(str(path))[1].lower()
    if ext in (".mtx", ".mm"):
        return "mm"
    if ext == ".csv":
        return "csv"
    if text is not None and text.lstrip().startswith("%%MatrixMarket"):
        return "mm"
    return "csv"


def format_matrix_market(A):
    A = np.atleast_2d(np.asarray(A, dtype=float))
    m, n = A.shape
    lines = [MM_HEADER, f"{m} {n}"]
    lines.extend(_fmt(x) for x in A.ravel(order="F"))
    return "\n".join(lines) + "\n"


def parse_matrix_market(text):
    lines = text.splitlines()
    if not lines or lines[0].strip().lower().split() != MM_HEADER.lower().split():
        raise MatrixFormatError(f"line 1: expected header {MM_HEADER!r}")
    body = [(k, ln.strip()) for k, ln in enumerate(lines[1:], start=2)
            if ln.strip() and not ln.lstrip().startswith("%")]
    if not body:
        raise MatrixFormatError(f"line {len(lines) + 1}: missing dimensions line")
    k, dims = body[0]
    parts = dims.split()
    try:
        m, n = (int(p) for p in parts)
    except ValueError:
        raise MatrixFormatError(f"line {k}: expected 'rows cols', got {dims!r}") from None
    if m < 0 or n < 0:
        raise MatrixFormatError(f"line {k}: negative dimension")
    values = []
    for k, ln in body[1:]:
        for tok in ln.split():
            try:
                values.append(float(tok))
            except ValueError:
                raise MatrixFormatError(f"line {k}: cannot parse value {tok!r}") from None
            if not np.isfinite(values[-1]):
                raise MatrixFormatError(f"line {k}: non-finite value {tok!r}")
    if len(values) != m * n:
        last = body[-1][0]
        raise MatrixFormatError(f"line {last}: expected {m * n} values, found {len(values)}")
    return np.array(values, dtype=float).reshape((m, n), order="F")


def format_csv(A):
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.shape[1] == 0:
        return "\n" * A.shape[0]
    return "".join(",".join(_fmt(x) for x in row) + "\n" for row in A)


def parse_csv(text):
    rows = []
    width = None
    for k, ln in enumerate(text.splitlines(), start=1):
        if not ln.strip():
            continue
        row = []
        for tok in ln.split(","):
            tok = tok.strip()
            try:
                row.append(float(tok))
            except ValueError:
                raise MatrixFormatError(f"line {k}: cannot parse value {tok!r}") from None
            if not np.isfinite(row[-1]):
                raise MatrixFormatError(f"line {k}: non-finite value {tok!r}")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise MatrixFormatError(f"line {k}: expected {width} columns, found {len(row)}")
        rows.append(row)
    if not rows:
        raise MatrixFormatError("line 1: empty CSV file")
    return np.array(rows, dtype=float)


def read_matrix(path, fmt=None):
    """Read a matrix, choosing the format from `fmt`, the extension or the header."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    fmt = fmt or guess_format(path, text)
    if fmt == "mm":
        return parse_matrix_market(text)
    if fmt == "csv":
        return parse_csv(text)
    raise ValueError(f"unknown format {fmt!r}")


def write_matrix(path, A, fmt=None):
    fmt = fmt or guess_format(path)
    text = format_matrix_market(A) if fmt == "mm" else format_csv(A)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
