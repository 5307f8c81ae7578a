"""Text renderings of bit matrices.

All three formats share a header line giving the shape, followed by one line
per row (row 0 first) and optional ``#`` comment lines, which parsing skips.

``txt``
    header ``"rows cols"``, rows as ``cols`` characters of ``0``/``1``.
``csv``
    header ``"rows,cols"``, rows as comma-separated ``0``/``1`` cells.
``hex``
    header ``"rows cols"``, rows as ``ceil(cols/4)`` lowercase hex digits.
    Column 0 is the most significant bit of the first digit; the final
    nibble is zero-padded on the right.
"""

from __future__ import annotations

import numpy as np

FORMATS = ("txt", "csv", "hex")


class MatrixFormatError(ValueError):
    pass


def render(mat, fmt: str = "txt", comments=()) -> str:
    mat = np.asarray(mat, dtype=np.uint8)
    if mat.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    rows, cols = mat.shape
    if fmt == "txt":
        lines = [f"{rows} {cols}"]
        lines += ["".join("1" if b else "0" for b in row) for row in mat]
    elif fmt == "csv":
        lines = [f"{rows},{cols}"]
        lines += [",".join("1" if b else "0" for b in row) for row in mat]
    elif fmt == "hex":
        lines = [f"{rows} {cols}"]
        lines += [_row_to_hex(row) for row in mat]
    else:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    lines += [c if c.startswith("#") else f"# {c}" for c in comments]
    return "\n".join(lines) + "\n"


def _row_to_hex(row: np.ndarray) -> str:
    cols = row.size
    digits = -(-cols // 4)
    padded = np.zeros(digits * 4, dtype=np.uint8)
    padded[:cols] = row
    nibbles = padded.reshape(-1, 4) @ np.array([8, 4, 2, 1])
    return "".join(f"{int(v):x}" for v in nibbles)


def _hex_to_row(text: str, cols: int) -> np.ndarray:
    if len(text) != -(-cols // 4):
        raise MatrixFormatError(f"hex row {text!r} should have {-(-cols // 4)} digits")
    try:
        values = [int(ch, 16) for ch in text]
    except ValueError:
        raise MatrixFormatError(f"bad hex row {text!r}") from None
    bits = np.array([(v >> s) & 1 for v in values for s in (3, 2, 1, 0)], dtype=np.uint8)
    if np.any(bits[cols:]):
        raise MatrixFormatError(f"hex row {text!r} has nonzero padding bits")
    return bits[:cols]


def _parse_bits(text: str, cols: int, sep: str | None) -> np.ndarray:
    cells = (text.split(sep) if text else []) if sep else list(text)
    if len(cells) != cols:
        raise MatrixFormatError(f"row {text!r} should have {cols} cells, found {len(cells)}")
    if any(c not in ("0", "1") for c in cells):
        raise MatrixFormatError(f"row {text!r} contains characters other than 0/1")
    return np.array([c == "1" for c in cells], dtype=np.uint8)


def detect_format(text: str) -> str:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    if not lines:
        raise MatrixFormatError("empty input")
    if "," in lines[0]:
        return "csv"
    try:
        rows, cols = (int(x) for x in lines[0].split())
    except ValueError:
        raise MatrixFormatError(f"malformed header {lines[0]!r}") from None
    body = lines[1 : 1 + rows]
    if body and cols > 1 and all(len(ln.strip()) == -(-cols // 4) for ln in body):
        return "hex"
    if cols == 1 and any(ln.strip() == "8" for ln in body):
        return "hex"
    return "txt"


def parse(text: str, fmt: str | None = None) -> np.ndarray:
    """Parse any rendering back into a uint8 matrix; comments are ignored."""
    if fmt is None:
        fmt = detect_format(text)
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    lines = [ln.rstrip("\r") for ln in text.splitlines() if not ln.startswith("#")]
    if not lines:
        raise MatrixFormatError("empty input")
    header = lines[0].split(",") if fmt == "csv" else lines[0].split()
    try:
        rows, cols = (int(x) for x in header)
    except ValueError:
        raise MatrixFormatError(f"malformed header {lines[0]!r}") from None
    if rows < 0 or cols < 0:
        raise MatrixFormatError("negative matrix dimensions")
    body = lines[1:]
    # trailing blank lines are only meaningful for zero-width rows
    while len(body) > rows and body[-1].strip() == "":
        body.pop()
    if len(body) != rows:
        raise MatrixFormatError(f"expected {rows} rows, found {len(body)}")
    out = np.zeros((rows, cols), dtype=np.uint8)
    for i, line in enumerate(body):
        line = line.strip()
        if fmt == "hex":
            out[i] = _hex_to_row(line, cols)
        else:
            out[i] = _parse_bits(line, cols, "," if fmt == "csv" else None)
    return out
