"""Plain-text matrix, time-series and edge-list formats.

Matrix:      first line ``n``, then n rows of n whitespace-separated numbers.
Time series: first line ``n t_len``, then n rows of t_len numbers.
Edge list:   first line ``n m``, then m lines ``i j`` (0-based, i < j).

Lines starting with ``#`` are comments and may appear anywhere. Floats are
written with ``repr`` so they round-trip exactly.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import ParseError
from .graph import BinaryGraph


def _fmt_row(row) -> str:
    if np.issubdtype(row.dtype, np.integer) or row.dtype == bool:
        return " ".join(str(int(v)) for v in row)
    return " ".join(repr(float(v)) for v in row)


def _write(path, header: str | None, first: str, rows) -> None:
    with open(path, "w") as fh:
        if header:
            fh.write(header.rstrip("\n") + "\n")
        fh.write(first + "\n")
        for row in rows:
            fh.write(row + "\n")


def _content_lines(path):
    """(line number, tokens) for non-blank, non-comment lines."""
    try:
        fh = open(path)
    except OSError as exc:
        raise ParseError(f"cannot open: {exc.strerror}", path=path) from exc
    with fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if s and not s.startswith("#"):
                yield lineno, s.split()


def _ints(tokens, lineno, path, count):
    if len(tokens) != count:
        raise ParseError(f"expected {count} integer(s), got {len(tokens)} token(s)", path=path, line=lineno)
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", path=path, line=lineno) from None


def _float_rows(lines, path, n_rows, n_cols, after_line):
    out = np.empty((n_rows, n_cols))
    k = 0
    for lineno, tokens in lines:
        if k >= n_rows:
            raise ParseError("unexpected extra row", path=path, line=lineno)
        if len(tokens) != n_cols:
            raise ParseError(f"expected {n_cols} values, got {len(tokens)}", path=path, line=lineno)
        try:
            out[k] = [float(t) for t in tokens]
        except ValueError:
            raise ParseError("non-numeric value", path=path, line=lineno) from None
        k += 1
    if k != n_rows:
        raise ParseError(f"expected {n_rows} rows, got {k}", path=path, line=after_line)
    return out


def write_matrix(path, m, header: str | None = None) -> None:
    m = np.asarray(m)
    _write(path, header, str(m.shape[0]), (_fmt_row(r) for r in m))


def read_matrix(path) -> np.ndarray:
    lines = _content_lines(path)
    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise ParseError("empty file", path=path) from None
    (n,) = _ints(tokens, lineno, path, 1)
    if n < 1:
        raise ParseError(f"matrix size must be positive, got {n}", path=path, line=lineno)
    return _float_rows(lines, path, n, n, lineno)


def write_timeseries(path, values, header: str | None = None) -> None:
    values = np.asarray(getattr(values, "values", values))
    n, t_len = values.shape
    _write(path, header, f"{n} {t_len}", (_fmt_row(r) for r in values))


def read_timeseries(path) -> np.ndarray:
    lines = _content_lines(path)
    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise ParseError("empty file", path=path) from None
    n, t_len = _ints(tokens, lineno, path, 2)
    return _float_rows(lines, path, n, t_len, lineno)


def write_edgelist(path, g: BinaryGraph, header: str | None = None) -> None:
    edges = g.edges()
    _write(path, header, f"{g.n} {len(edges)}", (f"{i} {j}" for i, j in edges))


def read_edgelist(path) -> BinaryGraph:
    lines = _content_lines(path)
    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise ParseError("empty file", path=path) from None
    n, m = _ints(tokens, lineno, path, 2)
    edges = []
    seen = set()
    last = lineno
    for last, tokens in lines:
        i, j = _ints(tokens, last, path, 2)
        if not (0 <= i < j < n):
            raise ParseError(f"edge ({i}, {j}) must satisfy 0 <= i < j < {n}", path=path, line=last)
        if (i, j) in seen:
            raise ParseError(f"duplicate edge ({i}, {j})", path=path, line=last)
        seen.add((i, j))
        edges.append((i, j))
    if len(edges) != m:
        raise ParseError(f"header declares {m} edges, found {len(edges)}", path=path, line=last)
    return BinaryGraph.from_edges(n, edges)


def sniff_format(path) -> str:
    """'matrix' if the size line has one integer, 'edges' if it has two."""
    for lineno, tokens in _content_lines(path):
        if len(tokens) == 1:
            return "matrix"
        if len(tokens) == 2:
            return "edges"
        raise ParseError("first line must be 'n' (matrix) or 'n m' (edge list)", path=path, line=lineno)
    raise ParseError("empty file", path=path)


def write_record(path, record: dict, header: str | None = None) -> None:
    """Flat ``key<TAB>value`` record."""
    lines = [header] if header else []
    lines += [f"{k}\t{v}" for k, v in record.items()]
    Path(path).write_text("\n".join(lines) + "\n")


def read_record(path) -> dict:
    out = {}
    for line in Path(path).read_text().splitlines():
        if line and not line.startswith("#"):
            k, _, v = line.partition("\t")
            out[k] = v
    return out
