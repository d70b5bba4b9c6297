"""linmax: simulation and verification of heavy-tailed linear-process maxima.

Simulates linear processes with regularly varying innovations and
(possibly random) coefficients, samples their extremal limit process
exactly, computes graph (M2) and monotone-M1 distances between cadlag
step functions, and runs seeded convergence experiments that check the
limit claims statistically.
"""

from .cadlag import (
    CompletedGraph,
    StepFunction,
    completed_graph,
    dumps,
    evaluate,
    from_samples,
    loads,
    pointwise_max,
    running_max,
    scale,
)
from .coefficients import (
    CoefficientRealization,
    ConditionReport,
    Deterministic,
    GeometricRandom,
    PowerDecay,
    c_plus_minus,
    check_moment_conditions,
    order_for_sup_tail,
    sample_coefficients,
    truncation_order,
)
from .config import ExperimentConfig, load_config, parse_config
from .errors import (
    ConfigurationError,
    MonotonicityError,
    NonSummableTailError,
    UnsupportedModelError,
)
from .harness import (
    EXPERIMENTS,
    ConvergenceReport,
    ReportRow,
    evaluate_thresholds,
    replicate_seeds,
    run_envelope_convergence,
    run_marginal_convergence,
    run_metric_shrinkage,
    run_truncation_study,
)
from .innovations import TailLaw, norming_constant, sample_innovations, tail_prob
from .limit_process import (
    CdfEstimate,
    LimitSpec,
    MarkedPointSet,
    default_epsilon,
    limit_bivariate_cdf,
    limit_marginal_cdf,
    marginal_cdf_fn,
    max_functional,
    sample_limit_path,
    sample_poisson_points,
)
from .linear_process import (
    SimulatedPath,
    coupling_gap,
    finite_order_approx,
    innovation_max_process,
    partial_maxima,
    simulate_path,
)
from .skorohod import d_m1_monotone, d_m2, d_product, d_uniform, oscillation
from .stats import empirical_cdf, kolmogorov_sf, ks_test

__version__ = "0.1.0"
