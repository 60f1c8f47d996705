"""Plain-text matrix files.

Format: a header line ``rows cols`` followed by the entries in row-major
order, separated by arbitrary whitespace. Text after ``#`` is a comment.
"""

import numpy as np

__all__ = ["MatrixFormatError", "read_matrix", "write_matrix", "format_matrix", "parse_matrix"]


class MatrixFormatError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


def parse_matrix(text: str) -> np.ndarray:
    shape = None
    values = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        if shape is None:
            if len(tokens) != 2:
                raise MatrixFormatError("header must be 'rows cols'", lineno)
            try:
                shape = tuple(int(t) for t in tokens)
            except ValueError:
                raise MatrixFormatError("header must hold two integers", lineno) from None
            if min(shape) < 1:
                raise MatrixFormatError("dimensions must be positive", lineno)
            continue
        for tok in tokens:
            try:
                v = float(tok)
            except ValueError:
                raise MatrixFormatError(f"cannot parse {tok!r} as a number", lineno) from None
            if not np.isfinite(v):
                raise MatrixFormatError(f"non-finite entry {tok!r}", lineno)
            values.append(v)
        if len(values) > shape[0] * shape[1]:
            raise MatrixFormatError("more entries than the header declares", lineno)
    if shape is None:
        raise MatrixFormatError("empty file")
    if len(values) != shape[0] * shape[1]:
        raise MatrixFormatError(
            f"expected {shape[0] * shape[1]} entries, found {len(values)}")
    return np.array(values).reshape(shape)


def read_matrix(path) -> np.ndarray:
    with open(path) as fh:
        return parse_matrix(fh.read())


def format_matrix(M) -> str:
    M = np.atleast_2d(np.asarray(M, dtype=float))
    lines = [f"{M.shape[0]} {M.shape[1]}"]
    lines += [" ".join(f"{v:.17g}" for v in row) for row in M]
    return "\n".join(lines) + "\n"


def write_matrix(path, M) -> None:
    with open(path, "w") as fh:
        fh.write(format_matrix(M))
