"""Model parameters and community-size distributions.

A thinned random intersection graph is parameterized by ``(n, m, dist, q)``:
``n`` nodes, ``m`` independent random communities whose sizes follow
``dist``, and a probability ``q`` that two members of a shared community are
linked through it.  The Bernoulli parameterization ``(lambda, mu, q)`` picks a
binomial size distribution so that ``lambda`` is the mean degree and ``mu``
the mean number of community memberships per node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Union

import numpy as np

PMF_TOL = 1e-12


def falling_factorial(x: float, r: int) -> float:
    """Return ``x (x-1) ... (x-r+1)`` (empty product is 1)."""
    out = 1.0
    for i in range(r):
        out *= x - i
    return out


@dataclass(frozen=True)
class Dirac:
    """Every community has exactly ``d`` members."""

    d: int

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 0:
            raise ValueError(f"Dirac size must be a nonnegative integer, got {self.d!r}")

    @property
    def max_size(self) -> int:
        return int(self.d)

    def factorial_moment(self, r: int) -> float:
        return falling_factorial(self.d, r)

    def support(self) -> tuple[np.ndarray, np.ndarray]:
        return np.array([self.d], dtype=np.int64), np.array([1.0])


@dataclass(frozen=True)
class Binomial:
    """Community sizes ``Binomial(n, p)``: each node joins independently w.p. ``p``."""

    n: int
    p: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"Binomial n must be a nonnegative integer, got {self.n!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"Binomial p must lie in [0, 1], got {self.p!r}")

    @property
    def max_size(self) -> int:
        return int(self.n)

    def factorial_moment(self, r: int) -> float:
        # E[(X)_r] = (n)_r p^r; vanishes automatically for r > n
        return falling_factorial(self.n, r) * self.p**r

    def support(self) -> tuple[np.ndarray, np.ndarray]:
        from scipy.special import gammaln, xlog1py, xlogy

        xs = np.arange(self.n + 1, dtype=np.int64)
        logc = gammaln(self.n + 1) - gammaln(xs + 1) - gammaln(self.n - xs + 1)
        return xs, np.exp(logc + xlogy(xs, self.p) + xlog1py(self.n - xs, -self.p))


@dataclass(frozen=True)
class Explicit:
    """Arbitrary finite size distribution given as ``{size: probability}``."""

    pmf: Mapping[int, float] = field(hash=False)

    def __post_init__(self):
        clean: dict[int, float] = {}
        for x, w in self.pmf.items():
            if int(x) != x or x < 0:
                raise ValueError(f"community sizes must be nonnegative integers, got {x!r}")
            if not 0.0 <= w <= 1.0:
                raise ValueError(f"probability for size {x} outside [0, 1]: {w!r}")
            clean[int(x)] = clean.get(int(x), 0.0) + float(w)
        if not clean:
            raise ValueError("empty pmf")
        total = math.fsum(clean.values())
        if abs(total - 1.0) > PMF_TOL:
            raise ValueError(f"pmf sums to {total!r}, not 1")
        object.__setattr__(self, "pmf", dict(sorted(clean.items())))

    @property
    def max_size(self) -> int:
        return max(x for x, w in self.pmf.items() if w > 0)

    def factorial_moment(self, r: int) -> float:
        return math.fsum(falling_factorial(x, r) * w for x, w in self.pmf.items())

    def support(self) -> tuple[np.ndarray, np.ndarray]:
        xs = np.fromiter(self.pmf.keys(), dtype=np.int64)
        ws = np.fromiter(self.pmf.values(), dtype=float)
        return xs, ws

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "Explicit":
        """Load a two-column ``size probability`` text file ('#' comments allowed)."""
        pmf: dict[int, float] = {}
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'size probability', got {raw!r}")
            x = int(parts[0])
            pmf[x] = pmf.get(x, 0.0) + float(parts[1])
        return cls(pmf)


CommunityDist = Union[Dirac, Binomial, Explicit]


def factorial_moment(dist: CommunityDist, r: int) -> float:
    """Factorial moment ``E[X (X-1) ... (X-r+1)]`` of the size distribution."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    return dist.factorial_moment(r)


@dataclass(frozen=True)
class ModelParams:
    """Full model quadruple: node count, community count, size law, thinning."""

    n: int
    m: int
    dist: CommunityDist
    q: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if int(self.m) != self.m or self.m < 0:
            raise ValueError(f"m must be a nonnegative integer, got {self.m!r}")
        if not 0.0 <= self.q <= 1.0:
            raise ValueError(f"q must lie in [0, 1], got {self.q!r}")
        if self.dist.max_size > self.n:
            raise ValueError(
                f"community size distribution supports sizes up to {self.dist.max_size} > n={self.n}"
            )

    def p_r(self, r: int) -> float:
        return p_r(self, r)


def p_r(params: ModelParams, r: int) -> float:
    """Probability that one community contains a given set of ``r`` nodes."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if r > params.n:
        raise ValueError(f"r={r} exceeds node count n={params.n}")
    return params.dist.factorial_moment(r) / falling_factorial(params.n, r)


@dataclass(frozen=True)
class BernoulliParams:
    """``(lambda, mu, q)`` parameterization on ``n`` nodes.

    ``m = floor(mu^2 q n / lambda)`` communities with Binomial(n, p) sizes,
    ``p = lambda / (mu q n)``.
    """

    lam: float
    mu: float
    q: float
    n: int

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"lambda must be positive, got {self.lam!r}")
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu!r}")
        if not 0.0 < self.q <= 1.0:
            raise ValueError(f"q must lie in (0, 1], got {self.q!r}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")

    @property
    def m(self) -> int:
        return math.floor(self.mu**2 * self.q * self.n / self.lam)

    @property
    def p(self) -> float:
        return self.lam / (self.mu * self.q * self.n)


def bernoulli_to_model(bp: BernoulliParams) -> ModelParams:
    """Translate ``(lambda, mu, q, n)`` into the full model quadruple.

    Raises:
        ValueError: if the implied ``p`` is not in (0, 1) or ``m`` is zero,
            i.e. ``n`` is too small for this ``(lambda, mu, q)``.
    """
    p, m = bp.p, bp.m
    if not 0.0 < p < 1.0:
        raise ValueError(
            f"p out of range: p = lambda/(mu q n) = {p:g} for (lambda={bp.lam}, mu={bp.mu}, "
            f"q={bp.q}, n={bp.n}); n is too small"
        )
    if m < 1:
        raise ValueError(
            f"m = floor(mu^2 q n / lambda) = {m} for (lambda={bp.lam}, mu={bp.mu}, q={bp.q}, "
            f"n={bp.n}); n is too small"
        )
    return ModelParams(n=bp.n, m=m, dist=Binomial(bp.n, p), q=bp.q)
