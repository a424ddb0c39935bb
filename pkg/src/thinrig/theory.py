"""Closed-form and sparse-regime characteristics of the thinned random intersection model."""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass

from .model import ModelParams, falling_factorial, p_r

SPARSE_GUARD = 0.1


class SparseRegimeWarning(UserWarning):
    """Raised (as a warning) when ``m * p_2 * q`` is too large for the asymptotic formulas."""


def sparse_guard(params: ModelParams) -> float:
    """Expected number of communities linking a given pair, ``m * p_2 * q``."""
    if params.n < 2:
        return 0.0
    return params.m * p_r(params, 2) * params.q


def _check_sparse(params: ModelParams) -> bool:
    g = sparse_guard(params)
    ok = g < SPARSE_GUARD
    if not ok:
        warnings.warn(
            f"m*p2*q = {g:.3g} >= {SPARSE_GUARD}: outside the sparse regime, asymptotic "
            "formulas may be off by more than ~10%",
            SparseRegimeWarning,
            stacklevel=3,
        )
    return ok


def _p(params: ModelParams, r: int) -> float:
    return p_r(params, r) if r <= params.n else 0.0


def link_prob_exact(params: ModelParams) -> float:
    """Exact probability that a given node pair is linked: ``1 - (1 - q p_2)^m``."""
    if params.n < 2:
        return 0.0
    x = params.q * p_r(params, 2)
    if x >= 1.0:
        return 1.0 if params.m > 0 else 0.0
    return -math.expm1(params.m * math.log1p(-x))


def link_prob_asymp(params: ModelParams) -> float:
    return params.m * _p(params, 2) * params.q


def twostar_density_asymp(params: ModelParams) -> float:
    """Sparse-regime probability that a given 2-star is present (as any subgraph)."""
    _check_sparse(params)
    m, q = params.m, params.q
    p2, p3 = _p(params, 2), _p(params, 3)
    return q**2 * (m * p3 + falling_factorial(m, 2) * p2**2)


def triangle_density_asymp(params: ModelParams) -> float:
    """Sparse-regime probability that a given triangle is present."""
    _check_sparse(params)
    m, q = params.m, params.q
    p2, p3 = _p(params, 2), _p(params, 3)
    return q**3 * (m * p3 + 3 * falling_factorial(m, 2) * p2 * p3 + falling_factorial(m, 3) * p2**3)


def transitivity_asymp(params: ModelParams) -> float:
    """Leading-order model transitivity ``q p_3 / (p_3 + (m-1) p_2^2)``."""
    _check_sparse(params)
    p2, p3 = _p(params, 2), _p(params, 3)
    denom = p3 + (params.m - 1) * p2**2
    if denom <= 0:
        return 0.0
    return params.q * p3 / denom


def degree_moments_asymp(params: ModelParams) -> tuple[float, float]:
    """Sparse-regime ``(E D, Var D)`` of a node degree."""
    _check_sparse(params)
    n, m, q = params.n, params.m, params.q
    p2, p3 = _p(params, 2), _p(params, 3)
    mean = m * n * p2 * q
    if p2 == 0:
        return 0.0, 0.0
    return mean, mean * (1 + n * q * (p3 / p2 - p2))


def degree_mean_exact(params: ModelParams) -> float:
    """``E D = (n-1) P(link)``, exact."""
    return (params.n - 1) * link_prob_exact(params)


def attainable_bound(lam: float, sigma2: float) -> float:
    """Largest attainable transitivity for mean degree ``lam`` and degree variance ``sigma2``.

    Raises:
        ValueError: if ``sigma2 <= lam``; the model's degree variance is at least its mean.
    """
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    if not sigma2 > lam:
        raise ValueError(f"variance below mean unattainable: sigma^2={sigma2} <= lambda={lam}")
    return 1.0 / (1.0 + lam**2 / (sigma2 - lam))


@dataclass(frozen=True)
class ModelCharacteristics:
    p_link_exact: float
    p_link_asymp: float
    p_2star_asymp: float
    p_triangle_asymp: float
    transitivity_asymp: float
    degree_mean: float
    degree_var: float
    sparse_guard: float
    sparse_ok: bool

    def to_dict(self) -> dict:
        return asdict(self)


def describe(params: ModelParams) -> ModelCharacteristics:
    """All characteristics at once; the sparse-regime warning is folded into ``sparse_ok``."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SparseRegimeWarning)
        mean, var = degree_moments_asymp(params)
        return ModelCharacteristics(
            p_link_exact=link_prob_exact(params),
            p_link_asymp=link_prob_asymp(params),
            p_2star_asymp=twostar_density_asymp(params),
            p_triangle_asymp=triangle_density_asymp(params),
            transitivity_asymp=transitivity_asymp(params),
            degree_mean=mean,
            degree_var=var,
            sparse_guard=sparse_guard(params),
            sparse_ok=sparse_guard(params) < SPARSE_GUARD,
        )
