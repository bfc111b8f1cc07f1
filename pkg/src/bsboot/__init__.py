"""Bayesian bootstrap inference for right-censored survival data.

The package computes exact beta-Stacy process posteriors for right-censored
datasets and approximates the posterior law of survival-distribution
summaries (mean, variance, restricted mean survival time, survival
probabilities) by a stick-breaking bootstrap, with one- and two-sample
support and an independent grid simulator for validation.
"""

from .bootstrap import (DEFAULT_DRAWS, DEFAULT_M, SampleResult, WeightedDistribution,
                        bsb_draw, bsb_functional_sample, lo_bootstrap,
                        proper_bayesian_bootstrap, rubin_bootstrap, two_sample_bsb)
from .data import (KaplanMeierEstimate, Observation, SurvivalDataset, counting,
                   kaplan_meier, load_csv)
from .datasets import load_pbc, pbc_path
from .distributions import (ConstantPrecision, Discrete, Exponential,
                            PiecewiseConstantPrecision, PriorSpec, Weibull,
                            exp_with_median, parse_centering, parse_precision, quantile)
from .errors import (BracketingError, BsbootError, DegenerateConfigurationError,
                     DegenerateConfigurationWarning, EvaluationError, IngestionError,
                     NumericDomainError, UnsupportedConfigurationError)
from .functionals import FunctionalSpec, builtin, custom, evaluate, parse_functional
from .numerics import RngStream, beta_sample, bisect, gauss_legendre
from .oracle import (GridPosteriorDraw, GridPosteriorSampler, grid_posterior_draw,
                     ks_two_sample, laplace_discrete, laplace_discrete_mc,
                     sup_distance_to_km)
from .posterior import PosteriorRep, compute_posterior
from .sampler import (FStarDraw, sample_continuous, sample_discrete, sample_fstar,
                      sample_fstar_discrete_prior)

__version__ = "0.1.0"

__all__ = [
    "BracketingError", "BsbootError", "ConstantPrecision", "DEFAULT_DRAWS",
    "DEFAULT_M", "DegenerateConfigurationError", "DegenerateConfigurationWarning",
    "Discrete", "EvaluationError", "Exponential", "FStarDraw", "FunctionalSpec",
    "GridPosteriorDraw", "GridPosteriorSampler", "IngestionError",
    "KaplanMeierEstimate", "NumericDomainError", "Observation",
    "PiecewiseConstantPrecision", "PosteriorRep", "PriorSpec", "RngStream",
    "SampleResult", "SurvivalDataset", "UnsupportedConfigurationError", "Weibull",
    "WeightedDistribution", "beta_sample", "bisect", "bsb_draw",
    "bsb_functional_sample", "builtin", "compute_posterior", "counting", "custom",
    "evaluate", "exp_with_median", "gauss_legendre", "grid_posterior_draw",
    "kaplan_meier", "ks_two_sample", "laplace_discrete", "laplace_discrete_mc",
    "lo_bootstrap", "load_csv", "load_pbc", "parse_centering", "parse_functional",
    "parse_precision", "pbc_path", "proper_bayesian_bootstrap", "quantile",
    "rubin_bootstrap", "sample_continuous", "sample_discrete", "sample_fstar",
    "sample_fstar_discrete_prior", "sup_distance_to_km", "two_sample_bsb",
]
