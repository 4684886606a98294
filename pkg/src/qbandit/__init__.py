"""Exact simulation and closed-form analysis of amplitude-amplified best arm
identification, with a classical successive-exploration baseline for speedup
comparisons."""

from __future__ import annotations

__version__ = "0.1.0"

from .bandits import (
    BanditInstance,
    InstanceSummary,
    arm_values,
    average_regret,
    average_reward,
    error_probability,
    summarize,
)
from .comparison import (
    ComparisonReport,
    ScalingResult,
    ScalingRow,
    compare,
    scaling_experiment,
)
from .errors import (
    DegenerateInstance,
    DimensionError,
    InstanceFormatError,
    InsufficientBudget,
    InvalidOperator,
    InvariantViolation,
    NoGoodStates,
    QbanditError,
    RenormalizationWarning,
)
from .hilbert import StateVector, apply, basis_state, densify, marginal_over_y
from .instances import (
    FAMILIES,
    bernoulli_instance,
    load_instance,
    one_good_arm,
    save_instance,
    two_tier,
)
from .qbai import (
    AmplificationParams,
    PeakRecommendation,
    QbaiRun,
    analytic_recommendation,
    build_operators,
    complete_unitary,
    grover_step,
    peak_recommendation,
    run_qbai,
    success_probability,
    uniform_alpha,
)
from .ucbe import (
    RngStream,
    UcbeTrace,
    estimate_error,
    run_ucbe,
    tuned_explore,
    ucbe_error_bound,
    ucbe_min_rounds,
)

__all__ = [
    "AmplificationParams",
    "BanditInstance",
    "ComparisonReport",
    "DegenerateInstance",
    "DimensionError",
    "FAMILIES",
    "InstanceFormatError",
    "InstanceSummary",
    "InsufficientBudget",
    "InvalidOperator",
    "InvariantViolation",
    "NoGoodStates",
    "PeakRecommendation",
    "QbaiRun",
    "QbanditError",
    "RenormalizationWarning",
    "RngStream",
    "ScalingResult",
    "ScalingRow",
    "StateVector",
    "UcbeTrace",
    "analytic_recommendation",
    "apply",
    "arm_values",
    "average_regret",
    "average_reward",
    "basis_state",
    "bernoulli_instance",
    "build_operators",
    "compare",
    "complete_unitary",
    "densify",
    "error_probability",
    "estimate_error",
    "grover_step",
    "load_instance",
    "marginal_over_y",
    "one_good_arm",
    "peak_recommendation",
    "run_qbai",
    "run_ucbe",
    "save_instance",
    "scaling_experiment",
    "success_probability",
    "summarize",
    "tuned_explore",
    "two_tier",
    "ucbe_error_bound",
    "ucbe_min_rounds",
    "uniform_alpha",
    "__version__",
]
