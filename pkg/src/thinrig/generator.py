"""Sampling thinned random intersection graphs.

Each of the ``m`` communities is an independent random node set whose size
follows the community-size law and whose members are uniform given the size.
Every pair inside a community is then kept independently with probability
``q``; the graph is the union of the kept pairs over all communities.

All randomness comes from one ``numpy.random.Generator`` (PCG64) seeded with
the caller's seed, consumed in a fixed order:

1. community membership for all communities,
2. one uniform per candidate pair, communities grouped by ascending size.

Step 2 never depends on ``q``, so two runs with the same seed and ``q1 < q2``
produce nested edge sets.
"""

from __future__ import annotations

from typing import Union

import numpy as np

from .graph import Graph
from .model import Binomial, CommunityDist, Dirac, ModelParams

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator]


def make_rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    seed = int(seed)
    if seed < 0 or seed >= 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


# -- membership ---------------------------------------------------------------


def _bernoulli_positions(total: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Indices of successes among ``total`` independent Bernoulli(p) trials.

    Geometric skipping: cost is proportional to the number of successes.
    """
    if p <= 0.0 or total == 0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(total, dtype=np.int64)
    chunks = []
    pos = -1
    while True:
        expect = (total - 1 - pos) * p
        size = int(expect + 6.0 * np.sqrt(expect) + 16)
        gaps = rng.geometric(p, size=size)
        steps = pos + np.cumsum(gaps)
        inside = steps[steps < total]
        chunks.append(inside)
        if len(inside) < size:
            break
        pos = int(steps[-1])
    return np.concatenate(chunks)


def _uniform_subsets(n: int, x: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` independent uniform ``x``-subsets of ``range(n)``, rows sorted."""
    if x == 0 or count == 0:
        return np.empty((count, x), dtype=np.int64)
    if x == n:
        return np.broadcast_to(np.arange(n, dtype=np.int64), (count, n)).copy()
    if x * (x - 1) <= 2 * n:
        # draw with replacement, redraw rows with a repeat; accepted rows are uniform subsets
        out = np.sort(rng.integers(0, n, size=(count, x)), axis=1)
        bad = np.flatnonzero(np.any(out[:, 1:] == out[:, :-1], axis=1))
        while len(bad):
            redo = np.sort(rng.integers(0, n, size=(len(bad), x)), axis=1)
            out[bad] = redo
            bad = bad[np.any(redo[:, 1:] == redo[:, :-1], axis=1)]
        return out
    # dense case: partial Fisher-Yates on a scratch index array reused across rows
    out = np.empty((count, x), dtype=np.int64)
    scratch = np.arange(n, dtype=np.int64)
    picks = rng.random((count, x))
    for row in range(count):
        for t in range(x):
            s = t + int(picks[row, t] * (n - t))
            scratch[t], scratch[s] = scratch[s], scratch[t]
        out[row] = np.sort(scratch[:x])
    return out


def _draw_sizes(dist: CommunityDist, m: int, rng: np.random.Generator) -> np.ndarray:
    if isinstance(dist, Dirac):
        return np.full(m, dist.d, dtype=np.int64)
    xs, ws = dist.support()
    return xs[rng.choice(len(xs), size=m, p=ws)]


def _memberships(params: ModelParams, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(sizes, members)``: community sizes and the concatenated member lists.

    ``members`` holds community 0's nodes, then community 1's, ..., each block sorted.
    """
    n, m, dist = params.n, params.m, params.dist
    if isinstance(dist, Binomial):
        # independent per-node inclusion over the flattened (community, node) grid
        flat = _bernoulli_positions(m * n, dist.p, rng)
        sizes = np.bincount(flat // n, minlength=m).astype(np.int64)
        return sizes, flat % n
    sizes = _draw_sizes(dist, m, rng)
    members = np.empty(int(sizes.sum()), dtype=np.int64)
    starts = np.concatenate(([0], np.cumsum(sizes)[:-1])) if m else np.empty(0, np.int64)
    for x in np.unique(sizes):
        ks = np.flatnonzero(sizes == x)
        block = _uniform_subsets(n, int(x), len(ks), rng)
        members[(starts[ks][:, None] + np.arange(x)).ravel()] = block.ravel()
    return sizes, members


def sample_community(dist: CommunityDist, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw one community: a size from ``dist``, then a uniform subset of that size.

    Binomial sizes use per-node inclusion, which has the same law.  Returns the
    sorted member array.
    """
    if dist.max_size > n:
        raise ValueError(f"size distribution exceeds node count {n}")
    if isinstance(dist, Binomial):
        return _bernoulli_positions(n, dist.p, rng)
    x = int(_draw_sizes(dist, 1, rng)[0])
    return _uniform_subsets(n, x, 1, rng)[0]


# -- thinning ------------------------------------------------------------------


def thin_pairs(members, q: float, rng: np.random.Generator, method: str = "coin") -> np.ndarray:
    """Keep each pair of ``members`` independently with probability ``q``.

    ``method="coin"`` draws one uniform per pair; ``method="skip"`` jumps
    between kept pairs with geometric gaps over the pair index space, which
    is cheaper when ``q * C(x, 2)`` is small.  Both have the same law.

    Returns an ``(k, 2)`` array of member pairs, first column smaller.
    """
    members = np.sort(np.asarray(members, dtype=np.int64))
    x = len(members)
    if x < 2 or q <= 0.0:
        return np.empty((0, 2), dtype=np.int64)
    iu, ju = np.triu_indices(x, 1)
    if q >= 1.0:
        keep = np.arange(len(iu))
    elif method == "coin":
        keep = np.flatnonzero(rng.random(len(iu)) < q)
    elif method == "skip":
        keep = _bernoulli_positions(len(iu), q, rng)
    else:
        raise ValueError(f"unknown thinning method {method!r}")
    return np.column_stack((members[iu[keep]], members[ju[keep]]))


def _thinned_edge_keys(
    n: int, sizes: np.ndarray, members: np.ndarray, q: float, rng: np.random.Generator
) -> np.ndarray:
    starts = np.concatenate(([0], np.cumsum(sizes)[:-1])) if len(sizes) else sizes
    out = []
    for x in np.unique(sizes):
        x = int(x)
        if x < 2:
            continue
        ks = np.flatnonzero(sizes == x)
        block = members[starts[ks][:, None] + np.arange(x)]
        iu, ju = np.triu_indices(x, 1)
        a, b = block[:, iu], block[:, ju]
        if q < 1.0:
            keep = rng.random(a.shape) < q
            a, b = a[keep], b[keep]
        out.append((a * n + b).ravel())
    if not out:
        return np.empty(0, dtype=np.int64)
    return np.unique(np.concatenate(out))


def generate(params: ModelParams, seed: SeedLike = 0) -> Graph:
    """Sample one graph from the thinned random intersection model.

    ``{i, j}`` is an edge iff some community contains both and its coin for
    that pair came up 1.  Identical ``(params, seed)`` give identical graphs.
    """
    rng = make_rng(seed)
    n = params.n
    if params.m == 0 or params.q == 0.0:
        return Graph._from_canonical(n, np.empty((0, 2), dtype=np.int64))
    sizes, members = _memberships(params, rng)
    keys = _thinned_edge_keys(n, sizes, members, params.q, rng)
    return Graph._from_canonical(n, np.column_stack((keys // n, keys % n)))


def sample_communities(params: ModelParams, seed: SeedLike = 0) -> list[np.ndarray]:
    """Community member lists drawn exactly as :func:`generate` draws them."""
    sizes, members = _memberships(params, make_rng(seed))
    return np.split(members, np.cumsum(sizes)[:-1]) if len(sizes) else []
