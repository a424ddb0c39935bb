"""Monte Carlo harness: generate Bernoulli-model graphs, fit, and collect estimates."""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .census import count_motifs, induce
from .estimators import estimate
from .generator import generate
from .model import BernoulliParams, bernoulli_to_model

THREADS_ENV = "THINRIG_THREADS"


@dataclass(frozen=True)
class Replication:
    n: int
    rep: int
    n0: int
    lambda_hat: Optional[float]
    mu_hat: Optional[float]
    q_hat: Optional[float]
    tau_hat: Optional[float]
    runtime_ms: float


def replication_seed(seed: int, n: int, rep: int) -> np.random.SeedSequence:
    """Per-replication stream, independent of scheduling order."""
    return np.random.SeedSequence([int(seed), int(n), int(rep)])


def observed_size(n: int, n0_exponent: Optional[float]) -> int:
    if n0_exponent is None:
        return n
    return min(n, math.ceil(n**n0_exponent))


def run_replication(
    lam: float,
    mu: float,
    q: float,
    n: int,
    rep: int,
    seed: int = 0,
    n0_exponent: Optional[float] = None,
) -> Replication:
    t0 = time.perf_counter()
    params = bernoulli_to_model(BernoulliParams(lam, mu, q, n))
    g = generate(params, replication_seed(seed, n, rep))
    n0 = observed_size(n, n0_exponent)
    sub = induce(g, n0) if n0 < n else g
    est = estimate(count_motifs(sub), n)
    ms = (time.perf_counter() - t0) * 1e3
    return Replication(n, rep, n0, est.lambda_hat, est.mu_hat, est.q_hat, est.tau_hat, ms)


def _run(args):
    return run_replication(*args)


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def sweep(
    lam: float,
    mu: float,
    q: float,
    ns: Sequence[int],
    reps: int,
    seed: int = 0,
    n0_exponent: Optional[float] = None,
    workers: Optional[int] = None,
) -> list[Replication]:
    """Run ``reps`` replications at each ``n``; rows come back sorted by ``(n, rep)``."""
    for n in ns:
        bernoulli_to_model(BernoulliParams(lam, mu, q, n))  # fail fast on bad params
    jobs = [(lam, mu, q, n, r, seed, n0_exponent) for n in ns for r in range(reps)]
    workers = thread_count() if workers is None else workers
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run, jobs))
    else:
        rows = [_run(j) for j in jobs]
    return sorted(rows, key=lambda r: (r.n, r.rep))


def relative_error(est: Optional[float], truth: float) -> float:
    if est is None:
        return math.inf
    return abs(est - truth) / abs(truth)


def median_errors(
    rows: Iterable[Replication], lam: float, mu: float, q: float
) -> dict[int, tuple[float, float, float]]:
    """Median relative errors of ``(lambda, mu, q)`` per ``n``; undefined estimates count as infinite."""
    by_n: dict[int, list[Replication]] = {}
    for r in rows:
        by_n.setdefault(r.n, []).append(r)
    out = {}
    for n in sorted(by_n):
        rs = by_n[n]
        out[n] = (
            float(np.median([relative_error(r.lambda_hat, lam) for r in rs])),
            float(np.median([relative_error(r.mu_hat, mu) for r in rs])),
            float(np.median([relative_error(r.q_hat, q) for r in rs])),
        )
    return out
