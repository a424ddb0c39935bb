"""Link / 2-star / triangle census on observed subgraphs, and the edge-partition statistic kappa.

Counts are of (not necessarily induced) subgraphs: a triangle contributes
three 2-stars.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass
from math import comb
from typing import Iterator, Sequence, Union

import numpy as np

from .generator import make_rng
from .graph import Graph

ORACLE_MAX_NODES = 200


@dataclass(frozen=True)
class CensusCounts:
    n0: int
    n_k2: int
    n_s2: int
    n_k3: int

    def __post_init__(self):
        if self.n_k2 > comb(self.n0, 2) or self.n_k3 > comb(self.n0, 3):
            raise ValueError(f"counts exceed the number of node pairs/triples for n0={self.n0}")
        if 3 * self.n_k3 > self.n_s2:
            raise ValueError("every triangle holds three 2-stars: need 3*n_k3 <= n_s2")

    def to_dict(self) -> dict:
        return {"n0": self.n0, "links": self.n_k2, "two_stars": self.n_s2, "triangles": self.n_k3}

    @classmethod
    def from_dict(cls, d: dict) -> "CensusCounts":
        return cls(int(d["n0"]), int(d["links"]), int(d["two_stars"]), int(d["triangles"]))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def induce(g: Graph, n0: int, mode: str = "first", seed=0) -> Graph:
    """Subgraph induced by ``n0`` nodes, relabeled ``0..n0-1``.

    ``mode="first"`` keeps nodes ``0..n0-1``; ``mode="random"`` keeps a uniform
    ``n0``-subset drawn with ``seed`` (relabeled in ascending original order).
    """
    if not 1 <= n0 <= g.n:
        raise ValueError(f"n0 must lie in [1, {g.n}], got {n0}")
    if mode == "first":
        if n0 == g.n:
            return g
        keep = (g.edges[:, 1] < n0)
        return Graph._from_canonical(n0, g.edges[keep])
    if mode == "random":
        chosen = np.sort(make_rng(seed).choice(g.n, size=n0, replace=False))
        return induce_nodes(g, chosen)
    raise ValueError(f"unknown induce mode {mode!r}")


def induce_nodes(g: Graph, nodes: Sequence[int]) -> Graph:
    """Subgraph induced by ``nodes``; node ``nodes[k]`` becomes ``k``."""
    nodes = np.asarray(nodes, dtype=np.int64)
    label = np.full(g.n, -1, dtype=np.int64)
    label[nodes] = np.arange(len(nodes))
    if len(np.unique(nodes)) != len(nodes):
        raise ValueError("induced node list has repeats")
    a, b = label[g.edges[:, 0]], label[g.edges[:, 1]]
    keep = (a >= 0) & (b >= 0)
    return Graph(len(nodes), np.column_stack((a[keep], b[keep])))


def count_triangles(g: Graph) -> int:
    """Exact triangle count by the forward (degree-ordered) method.

    Every edge is oriented from lower to higher ``(degree, id)`` rank, so each
    triangle is seen exactly once as a wedge ``v <- u -> w`` of out-neighbors
    closed by the edge ``{v, w}``.  Out-degrees are at most ``sqrt(2E)``.
    """
    if g.num_edges < 3:
        return 0
    n = g.n
    deg = g.degrees
    rank = np.empty(n, dtype=np.int64)
    rank[np.lexsort((np.arange(n), deg))] = np.arange(n)
    u, v = g.edges[:, 0], g.edges[:, 1]
    flip = rank[u] > rank[v]
    src = np.where(flip, v, u)
    dst = np.where(flip, u, v)
    # out-lists ordered by rank of the head; rows of out-lists grouped by out-degree
    order = np.lexsort((rank[dst], src))
    src, dst = src[order], dst[order]
    outdeg = np.bincount(src, minlength=n)
    start = np.zeros(n, dtype=np.int64)
    np.cumsum(outdeg[:-1], out=start[1:])
    rdst = rank[dst]
    # closing edges keyed by ranks so that (lower, higher) is canonical
    edge_keys = np.sort(rank[src] * n + rdst)
    total = 0
    for d in np.unique(outdeg):
        d = int(d)
        if d < 2:
            continue
        heads = rdst[start[outdeg == d][:, None] + np.arange(d)]
        iu, ju = np.triu_indices(d, 1)
        wedge = (heads[:, iu] * n + heads[:, ju]).ravel()
        hit = np.searchsorted(edge_keys, wedge)
        hit[hit == len(edge_keys)] = 0
        total += int(np.count_nonzero(edge_keys[hit] == wedge))
    return total


def count_motifs(g: Graph) -> CensusCounts:
    """Links, 2-stars (sum of C(deg, 2)) and triangles of ``g``."""
    deg = g.degrees.astype(np.int64)
    n_s2 = int(np.sum(deg * (deg - 1) // 2))
    return CensusCounts(g.n, g.num_edges, n_s2, count_triangles(g))


def count_motifs_oracle(g: Graph) -> CensusCounts:
    """Same contract as :func:`count_motifs`, by scanning every node triple."""
    if g.n > ORACLE_MAX_NODES:
        raise ValueError(f"oracle is O(n^3); refusing n={g.n} > {ORACLE_MAX_NODES}")
    adj = [[False] * g.n for _ in range(g.n)]
    for i, j in g.edges.tolist():
        adj[i][j] = adj[j][i] = True
    links = sum(adj[i][j] for i, j in itertools.combinations(range(g.n), 2))
    stars = triangles = 0
    for a, b, c in itertools.combinations(range(g.n), 3):
        k = adj[a][b] + adj[a][c] + adj[b][c]
        if k == 2:
            stars += 1
        elif k == 3:
            stars += 3
            triangles += 1
    return CensusCounts(g.n, links, stars, triangles)


# -- kappa ---------------------------------------------------------------------


def restricted_growth_strings(k: int) -> Iterator[list[int]]:
    """All set partitions of ``range(k)`` as restricted growth strings.

    ``a[0] = 0`` and ``a[i] <= 1 + max(a[:i])``; element ``i`` lies in block ``a[i]``.
    """
    if k == 0:
        yield []
        return
    a = [0] * k
    b = [0] * k  # b[i] = 1 + max(a[:i]), the largest block index allowed at i
    b[0] = 0
    i = k - 1
    for t in range(1, k):
        b[t] = 1
    while True:
        yield list(a)
        # advance the rightmost position that can still grow
        while i > 0 and a[i] == b[i]:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        nb = max(b[i], a[i] + 1)
        for t in range(i + 1, k):
            a[t] = 0
            b[t] = nb
        i = k - 1


SmallGraphLike = Union[str, Sequence[tuple[int, int]], Graph]


def parse_small_graph(text: str) -> list[tuple[int, int]]:
    """Parse an inline edge list such as ``"0-1,0-2"``."""
    edges = []
    for tok in text.replace(" ", "").split(","):
        if not tok:
            continue
        a, sep, b = tok.partition("-")
        if not sep:
            raise ValueError(f"bad edge token {tok!r}; expected 'i-j'")
        edges.append((int(a), int(b)))
    return edges


def _small_edges(r: SmallGraphLike) -> list[tuple[int, int]]:
    if isinstance(r, str):
        raw = parse_small_graph(r)
    elif isinstance(r, Graph):
        raw = [tuple(e) for e in r.edges.tolist()]
    else:
        raw = [(int(a), int(b)) for a, b in r]
    edges = sorted({(min(a, b), max(a, b)) for a, b in raw})
    if any(a == b for a, b in edges):
        raise ValueError("self-loops are not allowed")
    if len({v for e in edges for v in e}) > 8:
        raise ValueError("small graphs are limited to 8 nodes")
    return edges


def kappa(r: SmallGraphLike) -> int:
    """Minimum over partitions of the edge set of ``sum(|nodes covered by part|) - #parts``."""
    edges = _small_edges(r)
    if not edges:
        raise ValueError("kappa needs at least one edge")
    if len(edges) > 8:
        raise ValueError(f"kappa enumerates Bell(|E|) partitions; |E|={len(edges)} > 8")
    k = len(edges)
    best = None
    for rgs in restricted_growth_strings(k):
        parts = max(rgs) + 1
        covered = [set() for _ in range(parts)]
        for e, blk in zip(edges, rgs):
            covered[blk].update(e)
        val = sum(len(c) for c in covered) - parts
        if best is None or val < best:
            best = val
    return best
