"""Plain-text matrix files.

Whitespace format: a ``rows cols`` header line followed by ``rows`` lines of
``cols`` numbers. Files ending in ``.csv`` hold comma-separated rows with no
header. Writers use 17 significant digits so values round-trip exactly.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


class MatrixFormatError(ValueError):
    def __init__(self, path, line: int, column: int, message: str):
        super().__init__(f"{path}:{line}:{column}: {message}")
        self.path = path
        self.line = line
        self.column = column


def _parse_row(path, lineno: int, text: str, sep: str | None) -> list[float]:
    fields = text.split(sep)
    row = []
    for col, tok in enumerate(fields, start=1):
        tok = tok.strip()
        try:
            value = float(tok)
        except ValueError:
            raise MatrixFormatError(path, lineno, col, f"not a number: {tok!r}") from None
        if not np.isfinite(value):
            raise MatrixFormatError(path, lineno, col, f"non-finite entry {tok!r}")
        row.append(value)
    return row


def _content_lines(text: str):
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.strip():
            yield lineno, line


def parse_whitespace(text: str, path="<string>") -> np.ndarray:
    lines = list(_content_lines(text))
    if not lines:
        raise MatrixFormatError(path, 1, 1, "empty file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise MatrixFormatError(path, lineno, 1, f"expected header 'rows cols', got {header.strip()!r}")
    rows, cols = int(parts[0]), int(parts[1])
    if rows <= 0 or cols <= 0:
        raise MatrixFormatError(path, lineno, 1, "dimensions must be positive")
    body = lines[1:]
    if len(body) < rows:
        where = (body[-1][0] if body else lineno) + 1
        raise MatrixFormatError(path, where, 1, f"expected {rows} rows, found {len(body)}")
    if len(body) > rows:
        raise MatrixFormatError(path, body[rows][0], 1, f"expected {rows} rows, found {len(body)}")
    out = np.empty((rows, cols))
    for i, (ln, line) in enumerate(body):
        row = _parse_row(path, ln, line, None)
        if len(row) != cols:
            raise MatrixFormatError(path, ln, min(len(row), cols) + 1, f"expected {cols} entries, found {len(row)}")
        out[i] = row
    return out


def parse_csv(text: str, path="<string>") -> np.ndarray:
    rows = []
    width = None
    for ln, line in _content_lines(text):
        row = _parse_row(path, ln, line, ",")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise MatrixFormatError(path, ln, min(len(row), width) + 1, f"expected {width} entries, found {len(row)}")
        rows.append(row)
    if not rows:
        raise MatrixFormatError(path, 1, 1, "empty file")
    return np.array(rows, dtype=np.float64)


def read_matrix(path) -> np.ndarray:
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".csv":
        return parse_csv(text, path)
    return parse_whitespace(text, path)


def format_whitespace(X) -> str:
    X = np.asarray(X, dtype=np.float64)
    lines = [f"{X.shape[0]} {X.shape[1]}"]
    lines += [" ".join(f"{v:.17g}" for v in row) for row in X]
    return "\n".join(lines) + "\n"


def format_csv(X) -> str:
    X = np.asarray(X, dtype=np.float64)
    return "".join(",".join(f"{v:.17g}" for v in row) + "\n" for row in X)


def write_matrix(path, X) -> None:
    path = Path(path)
    text = format_csv(X) if path.suffix.lower() == ".csv" else format_whitespace(X)
    path.write_text(text)
