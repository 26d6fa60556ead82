"""Improved x-space algorithm for binary min-max interdiction problems."""

from ixs.core import (
    FollowerSample,
    IxsConfig,
    IxsResult,
    ProblemAdapter,
    SamplePool,
    add_sample,
    format_trace,
    init_pool,
    lb_value_given_w,
    run_ixs,
)
from ixs.cover import CoverProblem, CoverSolution, exact_lb, greedy_cover, verify_cover

__all__ = [
    "CoverProblem",
    "CoverSolution",
    "FollowerSample",
    "IxsConfig",
    "IxsResult",
    "ProblemAdapter",
    "SamplePool",
    "add_sample",
    "exact_lb",
    "format_trace",
    "greedy_cover",
    "init_pool",
    "lb_value_given_w",
    "run_ixs",
    "verify_cover",
]
