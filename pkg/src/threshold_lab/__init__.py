"""Exact desk-scale computation of thresholds for upper sets.

Product measures, critical probabilities, expectation thresholds via exact
minimum-cost covers, conditional epsilon bounds for nested families, and
their transfer to upper sets of finite posets through injections into a
power set.
"""

__version__ = "0.1.0"

from .bounds import (
    ConditionalProblem,
    ConditionalReport,
    EpsilonFloor,
    admissible_intervals,
    bell_bound,
    bell_eps_bound,
    check_basic_bound,
    conditional_report,
    epsilon_floor,
    g_function,
    pp_bound,
    strengthened_upper_case,
)
from .family import (
    GroundSet,
    SetFamily,
    SubsetMask,
    UpperSetFamily,
    ell_stats,
    is_upper_in,
    minimal_elements,
    up_closure,
)
from .kernels import BACKEND
from .measure import (
    CardinalityProfile,
    conditional,
    mu_family,
    mu_subset,
    p_critical,
    r_ratio,
    verify_fraction_identity,
)
from .threshold import Cover, greedy_cover_cost, is_p_small, min_cover_cost, q_threshold
