"""Immutable undirected simple graph with a CSR adjacency view, plus edge-list IO."""

from __future__ import annotations

import logging
import re
import sys
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Optional, Union

import numpy as np

logger = logging.getLogger(__name__)

_NODES_RE = re.compile(r"nodes:?\s*(\d+)", re.IGNORECASE)


def _canonical_edges(n: int, edges) -> np.ndarray:
    """Sort, orient ``i < j`` and dedupe an edge array; self-loops must already be gone."""
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if e.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    lo = np.minimum(e[:, 0], e[:, 1])
    hi = np.maximum(e[:, 0], e[:, 1])
    keys = np.unique(lo * n + hi)
    return np.column_stack((keys // n, keys % n))


class Graph:
    """Undirected simple graph on nodes ``0..n-1``.

    ``edges`` is an ``(E, 2)`` int64 array in canonical form: every row has
    ``i < j`` and rows are sorted lexicographically without duplicates.
    """

    def __init__(self, n: int, edges=()):
        n = int(n)
        if n < 0:
            raise ValueError(f"node count must be nonnegative, got {n}")
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if e.size:
            if e.min() < 0 or e.max() >= n:
                raise ValueError(f"edge endpoint outside [0, {n})")
            if np.any(e[:, 0] == e[:, 1]):
                raise ValueError("self-loops are not allowed")
        self.n = n
        self.edges = _canonical_edges(n, e)
        self.edges.setflags(write=False)

    @classmethod
    def _from_canonical(cls, n: int, edges: np.ndarray) -> "Graph":
        g = cls.__new__(cls)
        g.n = int(n)
        g.edges = edges
        g.edges.setflags(write=False)
        return g

    @classmethod
    def complete(cls, n: int) -> "Graph":
        i, j = np.triu_indices(n, 1)
        return cls._from_canonical(n, np.column_stack((i, j)).astype(np.int64))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.n)

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """``(indptr, indices)`` with each neighbor list sorted ascending."""
        src = np.concatenate((self.edges[:, 0], self.edges[:, 1]))
        dst = np.concatenate((self.edges[:, 1], self.edges[:, 0]))
        order = np.lexsort((dst, src))
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=self.n), out=indptr[1:])
        return indptr, dst[order]

    def neighbors(self, i: int) -> np.ndarray:
        indptr, indices = self.csr
        return indices[indptr[i] : indptr[i + 1]]

    def has_edge(self, i: int, j: int) -> bool:
        nb = self.neighbors(i)
        k = np.searchsorted(nb, j)
        return bool(k < len(nb) and nb[k] == j)

    def edge_keys(self) -> np.ndarray:
        """Sorted scalar keys ``i * n + j`` of the canonical edges."""
        return self.edges[:, 0] * self.n + self.edges[:, 1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __hash__(self):
        return hash((self.n, self.edges.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.num_edges})"


@dataclass
class LoadStats:
    lines: int = 0
    duplicates: int = 0
    self_loops: int = 0


def read_edge_list(
    path: Union[str, Path],
    n: Optional[int] = None,
    stats: Optional[LoadStats] = None,
    relabel: bool = False,
) -> Graph:
    """Read a whitespace-separated ``i j`` edge list with 0-based ids.

    '#' and '%' start comments.  Duplicate edges and reversed pairs collapse;
    self-loops are dropped and counted.  ``n`` defaults to a ``# nodes N``
    header comment when present (SNAP writes ``# Nodes: N ...``), else to
    ``max id + 1``.

    With ``relabel=True`` the distinct ids that appear (self-loop endpoints
    included) are compacted to ``0..k-1`` in ascending order and ``n = k``;
    use this for 1-based or sparse-id datasets.
    """
    stats = stats if stats is not None else LoadStats()
    rows = []
    header_n = None
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            if header_n is None and raw.lstrip().startswith("#"):
                hit = _NODES_RE.search(raw)
                if hit:
                    header_n = int(hit.group(1))
            line = raw.split("#", 1)[0].split("%", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) < 2:
                raise ValueError(f"{path}:{lineno}: expected 'i j', got {raw.rstrip()!r}")
            try:
                i, j = int(parts[0]), int(parts[1])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-integer node id in {raw.rstrip()!r}") from None
            if i < 0 or j < 0:
                raise ValueError(f"{path}:{lineno}: negative node id")
            rows.append((i, j))
    stats.lines = len(rows)
    e = np.array(rows, dtype=np.int64).reshape(-1, 2)
    if relabel:
        ids, inv = np.unique(e, return_inverse=True)
        e = inv.reshape(-1, 2).astype(np.int64)
        if n is None:
            n = len(ids)
        rows = e.tolist()
    loops = e[:, 0] == e[:, 1]
    stats.self_loops = int(loops.sum())
    e = e[~loops]
    max_id = int(np.asarray(rows).max()) if rows else -1
    if n is None:
        n = header_n if header_n is not None and header_n > max_id else max_id + 1
    elif max_id >= n:
        raise ValueError(f"{path}: node id exceeds declared node count {n}")
    g = Graph(n, e)
    stats.duplicates = len(e) - g.num_edges
    if stats.self_loops:
        logger.warning("%s: dropped %d self-loop(s)", path, stats.self_loops)
    if stats.duplicates:
        logger.info("%s: collapsed %d duplicate edge(s)", path, stats.duplicates)
    return g


def write_edge_list(g: Graph, path, header: Iterable[str] = ()) -> None:
    """Write ``g`` as an ``i j`` edge list; ``path`` may be a filename, ``"-"``/None for stdout, or a file object."""
    if path is None or path == "-":
        _write_edges(g, sys.stdout, header)
    elif hasattr(path, "write"):
        _write_edges(g, path, header)
    else:
        with open(path, "w") as fh:
            _write_edges(g, fh, header)


def _write_edges(g: Graph, fh, header: Iterable[str]) -> None:
    for line in header:
        fh.write(f"# {line}\n")
    fh.write(f"# nodes {g.n} edges {g.num_edges}\n")
    if g.num_edges:
        fh.write("\n".join(f"{i} {j}" for i, j in g.edges.tolist()))
        fh.write("\n")
