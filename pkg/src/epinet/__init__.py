"""Epidemics on weighted contact networks.

Exact event-driven simulation of SIS/SIR dynamics on networks whose links
carry discrete weights, the matching pairwise ODE models with two moment
closures, closed-form epidemic-threshold calculators, and endemic
steady-state solvers.
"""

__version__ = "0.1.0"

from .netgen import (
    WeightMode,
    WeightClasses,
    WeightedNetwork,
    NetworkStats,
    build_regular_graph,
    build_erdos_renyi,
    assign_weights_random,
    build_fixed_weight_network,
    network_stats,
    write_edge_list,
    read_edge_list,
)
from .gillespie import (
    EpidemicParams,
    Trajectory,
    run_sis,
    run_sir,
    ensemble_mean,
)
from .pairwise import (
    Closure,
    PairwiseState,
    closure_eval,
    sis_rhs,
    sir_rhs,
    initial_conditions,
    unweighted_reference_rhs,
)
from .ode import integrate, OdeSolution, IntegrationError
from .thresholds import (
    ThresholdReport,
    r0_random,
    r0_fixed,
    r_pairwise_classic,
    r_pairwise_modified,
    check_theorem1,
    check_theorem2,
)
from .equilibria import SteadyStateResult, solve_sis_endemic, sweep_endemic

__all__ = [
    "WeightMode",
    "WeightClasses",
    "WeightedNetwork",
    "NetworkStats",
    "build_regular_graph",
    "build_erdos_renyi",
    "assign_weights_random",
    "build_fixed_weight_network",
    "network_stats",
    "write_edge_list",
    "read_edge_list",
    "EpidemicParams",
    "Trajectory",
    "run_sis",
    "run_sir",
    "ensemble_mean",
    "Closure",
    "PairwiseState",
    "closure_eval",
    "sis_rhs",
    "sir_rhs",
    "initial_conditions",
    "unweighted_reference_rhs",
    "integrate",
    "OdeSolution",
    "IntegrationError",
    "ThresholdReport",
    "r0_random",
    "r0_fixed",
    "r_pairwise_classic",
    "r_pairwise_modified",
    "check_theorem1",
    "check_theorem2",
    "SteadyStateResult",
    "solve_sis_endemic",
    "sweep_endemic",
]
