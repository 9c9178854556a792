"""Reading and writing graph and partition files.

Supported input formats:
  * METIS ``.graph``: 1-indexed adjacency lists, header ``n m [fmt [ncon]]``
    with fmt in {0, 1, 10, 11} (edge weights / vertex weights flags).
  * Matrix Market coordinate: pattern/integer/real, general or symmetric;
    general matrices are symmetrized during preprocessing.

Partition files are plain text, one part id per line; line i holds the
part of vertex i.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ._arrays import I64
from .errors import ParseError
from .graph import Graph, preprocess

_METIS_FMTS = {0, 1, 10, 11}


def _data_lines(path):
    """Yield (lineno, stripped line) skipping comments and blank lines."""
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("%") or line.startswith("#"):
                continue
            yield lineno, line


def _ints(path, lineno, line):
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise ParseError(path, lineno, f"expected integers, got {line!r}") from None


def read_metis(path):
    """Parse a METIS graph file into (edges, n, vertex_weights).

    Edges are returned as directed (u, v, w) triples exactly as listed;
    the caller is expected to run them through preprocessing. A blank
    line is a vertex with an empty adjacency list, so only comment lines
    are skipped here.
    """
    with open(path, "r", encoding="utf-8") as handle:
        lines = [
            (lineno, raw.strip())
            for lineno, raw in enumerate(handle, start=1)
            if not raw.lstrip().startswith("%") and not raw.lstrip().startswith("#")
        ]
    start = 0
    while start < len(lines) and not lines[start][1]:
        start += 1
    if start == len(lines):
        raise ParseError(path, 1, "missing header line")
    lineno, header = lines[start]
    fields = _ints(path, lineno, header)
    if len(fields) < 2 or len(fields) > 4:
        raise ParseError(path, lineno, "header must be 'n m [fmt [ncon]]'")
    n, m = fields[0], fields[1]
    fmt = fields[2] if len(fields) >= 3 else 0
    ncon = fields[3] if len(fields) == 4 else 1
    if n <= 0:
        raise ParseError(path, lineno, "graph must have at least one vertex")
    if fmt not in _METIS_FMTS:
        raise ParseError(path, lineno, f"unsupported fmt code {fmt}")
    if ncon != 1:
        raise ParseError(path, lineno, "multi-constraint vertex weights unsupported")
    has_vweights = fmt >= 10
    has_eweights = fmt % 10 == 1

    edges = []
    vertex_weights = np.ones(n, dtype=I64)
    rows_seen = 0
    for lineno, line in lines[start + 1:]:
        if rows_seen >= n:
            if line:
                raise ParseError(path, lineno, "more vertex lines than header n")
            continue
        tokens = _ints(path, lineno, line)
        pos = 0
        if has_vweights:
            if not tokens:
                raise ParseError(path, lineno, "missing vertex weight")
            if tokens[0] <= 0:
                raise ParseError(path, lineno, f"vertex weight {tokens[0]} <= 0")
            vertex_weights[rows_seen] = tokens[0]
            pos = 1
        rest = tokens[pos:]
        if has_eweights:
            if len(rest) % 2 != 0:
                raise ParseError(path, lineno, "expected neighbor/weight pairs")
            pairs = zip(rest[0::2], rest[1::2])
        else:
            pairs = ((nbr, 1) for nbr in rest)
        for nbr, weight in pairs:
            if nbr < 1 or nbr > n:
                raise ParseError(path, lineno, f"neighbor id {nbr} out of range")
            if weight <= 0:
                raise ParseError(path, lineno, f"edge weight {weight} <= 0")
            edges.append((rows_seen, nbr - 1, weight))
        rows_seen += 1
    # vertices past the last listed line have empty adjacency rows
    if len(edges) != 2 * m:
        raise ParseError(
            path,
            lineno if rows_seen else 1,
            f"header declares {m} edges but {len(edges)} directed entries listed",
        )
    return edges, n, vertex_weights


def read_matrix_market(path):
    """Parse a Matrix Market coordinate file into (edges, n, None)."""
    with open(path, "r", encoding="utf-8") as handle:
        first = handle.readline()
    tokens = first.lower().split()
    if len(tokens) != 5 or tokens[0] != "%%matrixmarket":
        raise ParseError(path, 1, "missing MatrixMarket banner")
    _, obj, layout, field, symmetry = tokens
    if obj != "matrix" or layout != "coordinate":
        raise ParseError(path, 1, "only coordinate matrices are supported")
    if field not in ("pattern", "integer", "real"):
        raise ParseError(path, 1, f"unsupported field {field!r}")
    if symmetry not in ("general", "symmetric"):
        raise ParseError(path, 1, f"unsupported symmetry {symmetry!r}")
    has_values = field != "pattern"

    lines = _data_lines(path)
    try:
        lineno, size_line = next(lines)
    except StopIteration:
        raise ParseError(path, 2, "missing size line") from None
    size_tokens = size_line.split()
    if len(size_tokens) != 3:
        raise ParseError(path, lineno, "size line must be 'rows cols nnz'")
    try:
        rows, cols, nnz = (int(tok) for tok in size_tokens)
    except ValueError:
        raise ParseError(path, lineno, "size line must be integers") from None
    if rows != cols:
        raise ParseError(path, lineno, "adjacency matrix must be square")
    if rows <= 0:
        raise ParseError(path, lineno, "graph must have at least one vertex")

    edges = []
    for lineno, line in lines:
        tokens = line.split()
        if has_values and len(tokens) != 3 or not has_values and len(tokens) != 2:
            raise ParseError(path, lineno, "malformed coordinate entry")
        try:
            i, j = int(tokens[0]), int(tokens[1])
            value = float(tokens[2]) if has_values else 1.0
        except ValueError:
            raise ParseError(path, lineno, "malformed coordinate entry") from None
        if not (1 <= i <= rows and 1 <= j <= cols):
            raise ParseError(path, lineno, f"entry ({i},{j}) out of range")
        weight = int(round(value))
        if weight <= 0:
            raise ParseError(path, lineno, f"edge weight {value} rounds to <= 0")
        edges.append((i - 1, j - 1, weight))
    if len(edges) != nnz:
        raise ParseError(path, lineno if edges else 2, "entry count mismatch")
    return edges, rows, None


def detect_format(path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix in (".mtx", ".mm"):
        return "mtx"
    return "metis"


def load_graph(path, fmt: str = "auto", with_mapping: bool = False):
    """Load and preprocess a graph file.

    Args:
        path: file to read.
        fmt: 'metis', 'mtx', or 'auto' (by file extension).
        with_mapping: also return the original->new vertex id mapping
            produced by preprocessing (-1 marks dropped vertices).
    """
    if fmt == "auto":
        fmt = detect_format(path)
    if fmt == "metis":
        edges, n, vertex_weights = read_metis(path)
    elif fmt in ("mtx", "matrix-market"):
        edges, n, vertex_weights = read_matrix_market(path)
    else:
        raise ValueError(f"unknown graph format {fmt!r}")
    graph, mapping = preprocess(edges, n, vertex_weights)
    if with_mapping:
        return graph, mapping
    return graph


def write_metis(graph: Graph, path) -> None:
    """Write a Graph in METIS format, choosing the minimal fmt code."""
    has_vw = bool(np.any(graph.vertex_weights != 1))
    has_ew = bool(np.any(graph.edge_weights != 1))
    fmt = 10 * has_vw + has_ew
    with open(path, "w", encoding="utf-8") as handle:
        header = f"{graph.n} {graph.m}"
        if fmt:
            header += f" {fmt}"
        if has_vw:
            header += " 1"
        handle.write(header + "\n")
        for v in range(graph.n):
            nbrs, weights = graph.neighbors(v)
            fields = []
            if has_vw:
                fields.append(str(int(graph.vertex_weights[v])))
            for nbr, weight in zip(nbrs, weights):
                fields.append(str(int(nbr) + 1))
                if has_ew:
                    fields.append(str(int(weight)))
            handle.write(" ".join(fields) + "\n")


def write_partition(parts, path) -> None:
    parts = np.asarray(parts)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(str(int(p)) for p in parts))
        handle.write("\n")


def read_partition(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as handle:
        return np.array([int(line) for line in handle if line.strip()], dtype=I64)
