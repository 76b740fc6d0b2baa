"""Maximum-entropy transport policies on directed graphs.

Solves two-marginal Schrodinger bridge problems over Boltzmann or
Ruelle-Bowen reference chains, trading average path length against
path-space entropy through a temperature parameter, with enumeration-based
oracles for verification and a command line front end.
"""

from .bridge import (
    BridgeSolution,
    SolverConfig,
    as_marginal,
    delta_marginal,
    iterated_bridge_check,
    marginal_flow,
    most_probable_paths,
    path_probability,
    restriction_ratio_check,
    solve_schrodinger,
    support_paths,
)
from .calibrate import (
    CalibrationResult,
    LengthBudget,
    SweepRow,
    TemperatureLimit,
    TransportApproximation,
    calibrate_temperature,
    expected_length_at,
    length_variance,
    omt_approximation,
    temperature_sweep,
)
from .errors import (
    ConvergenceError,
    EnumerationCapError,
    GraphFormatError,
    InfeasibleBudgetError,
    InfeasibleError,
    NetbridgeError,
    PrimitivityError,
)
from .graph import (
    DirectedGraph,
    count_feasible_paths,
    dump_graph,
    enumerate_feasible_paths,
    g9_network,
    load_graph,
    path_length,
    shortest_path_matrix,
)
from .metrics import (
    EfficiencyReport,
    GraphEfficiencyStats,
    PathMeasure,
    average_path_length,
    entropy,
    free_energy,
    graph_efficiency_stats,
    relative_entropy,
    total_variation,
)
from .oracle import (
    EndpointKernel,
    EqualLengthReport,
    boltzmann_path_measure,
    conditioned_boltzmann,
    endpoint_kernel,
    measure_from_bridge,
    measure_from_chain,
    oracle_bridge,
    verify_equal_length_masses,
)
from .prior import (
    PerronTriple,
    PriorChain,
    boltzmann_prior,
    chain_path_mass,
    partition_function,
    perron,
    ruelle_bowen_chain,
)

__version__ = "0.1.0"

__all__ = [
    "BridgeSolution",
    "CalibrationResult",
    "ConvergenceError",
    "DirectedGraph",
    "EfficiencyReport",
    "EndpointKernel",
    "EnumerationCapError",
    "EqualLengthReport",
    "GraphEfficiencyStats",
    "GraphFormatError",
    "InfeasibleBudgetError",
    "InfeasibleError",
    "LengthBudget",
    "NetbridgeError",
    "PathMeasure",
    "PerronTriple",
    "PrimitivityError",
    "PriorChain",
    "SolverConfig",
    "SweepRow",
    "TemperatureLimit",
    "TransportApproximation",
    "as_marginal",
    "average_path_length",
    "boltzmann_path_measure",
    "boltzmann_prior",
    "calibrate_temperature",
    "chain_path_mass",
    "conditioned_boltzmann",
    "count_feasible_paths",
    "delta_marginal",
    "dump_graph",
    "endpoint_kernel",
    "entropy",
    "enumerate_feasible_paths",
    "expected_length_at",
    "free_energy",
    "g9_network",
    "graph_efficiency_stats",
    "iterated_bridge_check",
    "length_variance",
    "load_graph",
    "marginal_flow",
    "measure_from_bridge",
    "measure_from_chain",
    "most_probable_paths",
    "omt_approximation",
    "oracle_bridge",
    "partition_function",
    "path_length",
    "path_probability",
    "perron",
    "relative_entropy",
    "restriction_ratio_check",
    "ruelle_bowen_chain",
    "shortest_path_matrix",
    "solve_schrodinger",
    "support_paths",
    "temperature_sweep",
    "total_variation",
    "verify_equal_length_masses",
]
