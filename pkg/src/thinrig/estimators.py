"""Moment estimators for the Bernoulli parameterization.

From the link, 2-star and triangle counts ``K, S, T`` of an ``n0``-node
induced subgraph of an ``n``-node graph::

    lambda = (n - 1) K / C(n0, 2)
    mu     = 2 K^2 / (n0 S - 2 K^2)
    q      = 3 n0 T / (n0 S - 2 K^2)

Derived outputs invert the parameterization: ``m = floor(mu^2 q n / lambda)``
and ``sigma^2 = lambda (1 + lambda / mu)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional, Union

from .census import CensusCounts, count_motifs, induce
from .graph import Graph


def _ratio(num: int, den: int) -> float:
    # exact integer arithmetic until the final division
    return float(Fraction(num, den))


@dataclass(frozen=True)
class Estimates:
    """Fitted ``(lambda, tau, q, mu, m, sigma)``; ``None`` marks an undefined value."""

    lambda_hat: float
    tau_hat: Optional[float]
    q_hat: Optional[float]
    mu_hat: Optional[float]
    m_hat: Optional[int]
    sigma_hat: Optional[float]
    q_in_range: bool
    denominator_positive: bool
    counts: CensusCounts
    n: int
    guard: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "lambda": self.lambda_hat,
            "tau": self.tau_hat,
            "q": self.q_hat,
            "mu": self.mu_hat,
            "m": self.m_hat,
            "sigma": self.sigma_hat,
            "q_in_range": self.q_in_range,
            "denominator_positive": self.denominator_positive,
            "n": self.n,
            "counts": self.counts.to_dict(),
            "guard": self.guard,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "Estimates":
        return cls(
            lambda_hat=d["lambda"],
            tau_hat=d["tau"],
            q_hat=d["q"],
            mu_hat=d["mu"],
            m_hat=d["m"],
            sigma_hat=d["sigma"],
            q_in_range=d["q_in_range"],
            denominator_positive=d["denominator_positive"],
            counts=CensusCounts.from_dict(d["counts"]),
            n=d["n"],
            guard=d.get("guard"),
        )


def estimate(counts: CensusCounts, n: int) -> Estimates:
    """Moment estimates from census counts of an ``n0``-node subgraph of an ``n``-node graph.

    When ``n0 * S - 2 K^2 <= 0`` the estimates of ``mu`` and ``q`` (and the
    derived ``m``, ``sigma``) are undefined and ``denominator_positive`` is
    False; ``tau`` is undefined when there are no 2-stars.  ``q`` outside
    (0, 1] is returned as is with ``q_in_range=False``.

    Raises:
        ValueError: if ``n0 < 3`` or ``n < n0``.
    """
    n0 = counts.n0
    if n0 < 3:
        raise ValueError(f"need n0 >= 3 to observe triples, got n0={n0}")
    if n < n0:
        raise ValueError(f"graph size n={n} is smaller than observed n0={n0}")
    K, S, T = counts.n_k2, counts.n_s2, counts.n_k3

    lam = _ratio((n - 1) * K, comb(n0, 2))
    tau = _ratio(3 * T, S) if S > 0 else None

    denom = n0 * S - 2 * K * K
    mu = q = sigma = None
    m_hat = None
    if denom > 0:
        mu = _ratio(2 * K * K, denom)
        q = _ratio(3 * n0 * T, denom)
        sigma = math.sqrt(lam * (1.0 + lam / mu)) if mu > 0 else None
        if lam > 0:
            m_hat = math.floor(mu * mu * q * n / lam)

    guard = None
    if m_hat is not None and mu and q:
        p = lam / (mu * q * n)
        guard = m_hat * p * p * q

    return Estimates(
        lambda_hat=lam,
        tau_hat=tau,
        q_hat=q,
        mu_hat=mu,
        m_hat=m_hat,
        sigma_hat=sigma,
        q_in_range=q is not None and 0.0 < q <= 1.0,
        denominator_positive=denom > 0,
        counts=counts,
        n=n,
        guard=guard,
    )


@dataclass(frozen=True)
class FitReport:
    estimates: Estimates
    n: int
    n0: int
    mode: str
    notes: tuple[str, ...]

    def to_dict(self) -> dict:
        d = self.estimates.to_dict()
        d["n0"] = self.n0
        d["mode"] = self.mode
        d["display"] = display_row(self.estimates)
        d["notes"] = list(self.notes)
        return d


def _fmt(x: Optional[float], digits: int = 2) -> str:
    return "undefined" if x is None else f"{x:.{digits}f}"


def display_row(est: Estimates) -> dict:
    """Human-readable values; an out-of-range ``q`` shows as ``- (raw)``."""
    if est.q_hat is None:
        q = "undefined"
    elif est.q_in_range:
        q = _fmt(est.q_hat, 3)
    else:
        q = f"- ({est.q_hat:.2f})"
    return {
        "lambda": _fmt(est.lambda_hat, 1),
        "tau": _fmt(est.tau_hat, 2),
        "q": q,
        "m": "undefined" if est.m_hat is None else str(est.m_hat),
        "sigma": _fmt(est.sigma_hat, 1),
    }


def fit_report(
    g: Graph, n0: Union[int, str] = "all", mode: str = "first", seed: int = 0
) -> FitReport:
    """Induce (when ``n0 < n``), count, and estimate, with diagnostics."""
    if n0 == "all" or n0 is None:
        n0 = g.n
    n0 = int(n0)
    sub = induce(g, n0, mode=mode, seed=seed) if n0 < g.n else g
    est = estimate(count_motifs(sub), g.n)
    notes = []
    if not est.denominator_positive:
        notes.append("n0*N_S2 - 2*N_K2^2 <= 0: mu and q undefined")
    elif not est.q_in_range:
        notes.append(f"q estimate {est.q_hat:.4g} outside (0, 1]")
    if est.tau_hat is None:
        notes.append("no 2-stars observed: tau undefined")
    if est.guard is not None and est.guard >= 0.1:
        notes.append(f"sparse-regime guard m*p2*q = {est.guard:.3g} >= 0.1")
    return FitReport(est, g.n, n0, mode, tuple(notes))
