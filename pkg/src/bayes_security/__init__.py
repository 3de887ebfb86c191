"""Bayes security of discrete channels.

``beta*(C)`` is the smallest ratio, over all priors, between the Bayes risk
of an adversary who observes the channel output and the risk of one who
does not. This package computes it exactly, bounds it, composes channels,
relates it to (local) differential privacy and estimates it from samples.
"""

from .blackbox import (
    BlackboxBoundReport,
    CallableOracle,
    ChannelOracle,
    EstimateReport,
    ProcessOracle,
    SampleBatch,
    blackbox_beta_star_bound,
    plugin_beta,
    plugin_beta_star,
    sample_observations,
)
from .channel import (
    Channel,
    Prior,
    channel_from_rows,
    tv_distance,
    two_point_prior,
    uniform_prior,
)
from .composition import cascade, parallel, parallel_power
from .dp_bridge import (
    DpBoundReport,
    advantage_bounds,
    check_approx_ldp,
    dp_beta_lower_bound,
    dp_capacity_upper_bound,
    extremal_ldp_channel,
    ldp_beta_lower_bound,
    ldp_epsilon,
    min_approx_ldp_delta,
    zero_delta_correspondence,
)
from .errors import BayesSecurityError
from .io import load_channel, load_prior, save_channel, save_prior
from .kernels import BACKEND
from .mechanisms import (
    MechanismSpec,
    discretize_additive_mechanism,
    gaussian_beta_star,
    gaussian_dp_beta_star,
    geometric_channel,
    laplace_beta_star,
    laplace_dp_beta_star,
    rr_beta_star,
    rr_channel,
)
from .metrics import (
    GainFunction,
    MetricReport,
    bayes_risk,
    bayes_vulnerability,
    beta,
    capacity,
    g_leakage,
    guessing_error,
    metric_report,
    mult_leakage,
    pair_beta,
)
from .minimizer import (
    BetaStarReport,
    beta_prior_oracle,
    beta_star,
    beta_star_bounds_centroid,
    beta_star_embedding,
    beta_star_exhaustive,
    beta_star_pruned,
    minimizing_pairs,
    uniform_prior_gap_witness,
)

__version__ = "0.1.0"
