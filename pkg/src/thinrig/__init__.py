"""Thinned random intersection graphs with a subgraph census and moment estimators."""

from .census import CensusCounts, count_motifs, count_motifs_oracle, induce, kappa
from .estimators import Estimates, estimate, fit_report
from .generator import generate, sample_community, thin_pairs
from .graph import Graph, read_edge_list, write_edge_list
from .model import (
    BernoulliParams,
    Binomial,
    Dirac,
    Explicit,
    ModelParams,
    bernoulli_to_model,
    factorial_moment,
    p_r,
)
from .theory import (
    attainable_bound,
    degree_moments_asymp,
    describe,
    link_prob_exact,
    transitivity_asymp,
    triangle_density_asymp,
    twostar_density_asymp,
)

__version__ = "0.1.0"
