"""Version age of information in gossip networks under push, pull and
push-pull protocols: exact subset-recursion solver, event-driven simulator,
topology generators, HTTP service and experiment CLI."""

from .network import (
    GossipNetwork,
    NetworkError,
    NodeSet,
    Protocol,
    ProtocolMode,
    lambda_into,
    lambda_pull_into,
    lambda_push_into,
    lambda_src_total,
    neighbors,
    restrict_protocol,
    superpose_to_push,
    validate,
)
from .simulator import AgeEstimate, SimConfig, SimulationState, estimate, run_replication
from .solver import (
    AgeTable,
    ExactAgeSolver,
    StarAges,
    age_bounds,
    solve_age,
    solve_all_singletons,
    solve_star_reduced,
)

__all__ = [
    "AgeEstimate",
    "AgeTable",
    "ExactAgeSolver",
    "GossipNetwork",
    "NetworkError",
    "NodeSet",
    "Protocol",
    "ProtocolMode",
    "SimConfig",
    "SimulationState",
    "StarAges",
    "age_bounds",
    "estimate",
    "lambda_into",
    "lambda_pull_into",
    "lambda_push_into",
    "lambda_src_total",
    "neighbors",
    "restrict_protocol",
    "run_replication",
    "solve_age",
    "solve_all_singletons",
    "solve_star_reduced",
    "superpose_to_push",
    "validate",
]

__version__ = "0.1.0"
