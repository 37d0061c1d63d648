"""Experiment drivers: solve/simulate/bound arbitrary networks and the two
figure presets (star protocol comparison; ring/complete vs reference curves).

These functions back both the HTTP service and the CLI. All of them are
deterministic given their full argument set including seeds; sweep points
derive their base seeds with a stride larger than any replication count so
replication streams never collide.
"""
from __future__ import annotations

import math
from typing import Iterable, List, Optional, Sequence, Union

from . import topologies
from .network import (
    GossipNetwork,
    NetworkError,
    Protocol,
    ProtocolMode,
    restrict_protocol,
)
from .records import ExperimentRecord
from .simulator import SimConfig, estimate
from .solver import (
    AgeTable,
    ExactAgeSolver,
    age_bounds,
    solve_star_reduced,
)

Target = Union[int, frozenset, str]

_SEED_STRIDE = 7919  # larger than any sane replication count

STAR_VARIANTS = ("star-center-fed", "star-leaf-fed")
TOPOLOGY_KINDS = STAR_VARIANTS + ("ring", "complete", "random")

#: Representative node per role; stars are symmetric in the remaining leaves.
_LEAF_REP = {"star-center-fed": 1, "star-leaf-fed": 2}


def parse_protocol(name: str) -> Protocol:
    key = name.strip().lower().replace("-", "").replace("_", "")
    try:
        return {"push": Protocol.PUSH, "pull": Protocol.PULL,
                "pushpull": Protocol.PUSH_PULL}[key]
    except KeyError:
        raise NetworkError(f"unknown protocol {name!r}") from None


def parse_target(text: str) -> Target:
    t = text.strip()
    if t == "average":
        return "average"
    if t.startswith("{") and t.endswith("}"):
        members = frozenset(int(x) for x in t[1:-1].split(",") if x.strip())
        if not members:
            raise NetworkError(f"empty set literal {text!r}")
        return members
    try:
        return int(t)
    except ValueError:
        raise NetworkError(f"cannot parse target {text!r}") from None


def target_label(target: Target) -> str:
    if target == "average":
        return "average"
    if isinstance(target, frozenset):
        return "{" + ",".join(str(i) for i in sorted(target)) + "}"
    return str(target)


def build_topology(
    kind: str,
    n: int,
    lam: float = 1.0,
    lambda_e: float = 1.0,
    *,
    edge_probability: float = 0.3,
    rate_low: float = 0.1,
    rate_high: float = 1.0,
    src_probability: float = 0.5,
    seed: int = 0,
) -> GossipNetwork:
    if kind == "star-center-fed":
        return topologies.star_center_fed(n, lam, lambda_e)
    if kind == "star-leaf-fed":
        return topologies.star_leaf_fed(n, lam, lambda_e)
    if kind == "ring":
        return topologies.ring(n, lam, lambda_e)
    if kind == "complete":
        return topologies.complete(n, lam, lambda_e)
    if kind == "random":
        return topologies.random_network(
            n, edge_probability, rate_low, rate_high, src_probability, seed,
            lambda_e=lambda_e,
        )
    raise NetworkError(f"unknown topology kind {kind!r}")


def _base_record(topology: str, mode: ProtocolMode, n: int, target: Target,
                 method: str, value: float, **extra) -> ExperimentRecord:
    return ExperimentRecord(
        topology=topology,
        protocol=mode.protocol.value,
        scale=mode.scale,
        n=n,
        target=target_label(target),
        method=method,
        value=value,
        **extra,
    )


def solve_records(
    net: GossipNetwork,
    topology: str,
    mode: ProtocolMode,
    targets: Sequence[Target],
    method: str = "exact",
    lam: Optional[float] = None,
    lambda_e: Optional[float] = None,
) -> List[ExperimentRecord]:
    """Exact subset-recursion ages (or star-reduced ages, or bounds) as records.

    method "reduced" ignores targets and emits the fed/center/leaf-class
    triple for the star variant; "bounds" emits bound-lower/bound-upper rows
    per set target.
    """
    restricted = restrict_protocol(net, mode)
    if method == "reduced":
        if topology not in STAR_VARIANTS:
            raise NetworkError(
                f"reduced method only applies to star topologies, got {topology!r}"
            )
        variant = topology.removeprefix("star-")
        ages = solve_star_reduced(variant, mode, net.n,
                                  lam if lam is not None else 1.0,
                                  lambda_e if lambda_e is not None else net.lambda_e)
        fed = net.n if variant == "center-fed" else 1
        rows = [
            _base_record(topology, mode, net.n, fed, "reduced", ages.fed),
            _base_record(topology, mode, net.n, net.n, "reduced", ages.center),
            _base_record(topology, mode, net.n, _LEAF_REP[topology], "reduced", ages.leaf),
        ]
        # fed == center for the center-fed star; drop the duplicate row
        seen = set()
        out = []
        for r in rows:
            if r.target not in seen:
                seen.add(r.target)
                out.append(r)
        return out

    solver = ExactAgeSolver(restricted)
    records: List[ExperimentRecord] = []
    if method == "exact":
        for target in targets:
            records.append(
                _base_record(topology, mode, net.n, target, "exact",
                             _solve_target(solver, target))
            )
        return records
    if method == "bounds":
        for target in targets:
            if target == "average":
                raise NetworkError("bounds apply to node/set targets, not 'average'")
            s = frozenset([target]) if isinstance(target, int) else target
            table = AgeTable()
            for i in range(1, net.n + 1):
                if i not in s:
                    table.put(s | {i}, solver.solve(s | {i}))
            lo, hi = age_bounds(restricted, s, table)
            records.append(_base_record(topology, mode, net.n, target, "bound-lower", lo))
            records.append(_base_record(topology, mode, net.n, target, "bound-upper", hi))
        return records
    raise NetworkError(f"unknown solve method {method!r}")


def _solve_target(solver: ExactAgeSolver, target: Target) -> float:
    if target == "average":
        vals = [solver.solve((i,)) for i in range(1, solver.net.n + 1)]
        return math.inf if any(math.isinf(v) for v in vals) else sum(vals) / len(vals)
    if isinstance(target, frozenset):
        return solver.solve(target)
    return solver.solve((target,))


def simulate_records(
    net: GossipNetwork,
    topology: str,
    mode: ProtocolMode,
    targets: Sequence[Target],
    config: SimConfig,
) -> List[ExperimentRecord]:
    """Monte Carlo age estimates as records; divergent targets report "inf"."""
    restricted = restrict_protocol(net, mode)
    tracked = tuple(t for t in targets if isinstance(t, frozenset))
    cfg = SimConfig(
        horizon=config.horizon,
        burn_in=config.burn_in,
        replications=config.replications,
        seed=config.seed,
        tracked_sets=tracked,
    )
    est = estimate(restricted, cfg)
    records = []
    for target in targets:
        if target == "average":
            te = est.average
        elif isinstance(target, frozenset):
            te = est.sets[target]
        else:
            te = est.nodes[target]
        records.append(
            _base_record(
                topology, mode, net.n, target, "simulated",
                math.inf if te.divergent else te.value,
                stderr=te.stderr, seed=cfg.seed,
                horizon=cfg.horizon, reps=cfg.replications,
            )
        )
    return records


DEFAULT_SWEEP = tuple(range(100, 1001, 100))
# Horizons picked so each sweep point simulates in seconds at n = 1000.
STAR_FIGURE_HORIZON = 2e4
STAR_FIGURE_REPS = 3
RING_FC_FIGURE_HORIZON = 1e4
RING_FC_FIGURE_REPS = 5


def figure_star_records(
    n_values: Iterable[int] = DEFAULT_SWEEP,
    horizon: float = STAR_FIGURE_HORIZON,
    reps: int = STAR_FIGURE_REPS,
    seed: int = 0,
    lam: float = 1.0,
    lambda_e: float = 1.0,
) -> List[ExperimentRecord]:
    """Star protocol comparison: reduced-solver lines plus simulated markers
    for the leaf-class node, both variants x push/pull/push-pull."""
    records: List[ExperimentRecord] = []
    point = 0
    for topology in STAR_VARIANTS:
        variant = topology.removeprefix("star-")
        for protocol in (Protocol.PUSH, Protocol.PULL, Protocol.PUSH_PULL):
            mode = ProtocolMode(protocol)
            for n in n_values:
                rep_node = _LEAF_REP[topology]
                ages = solve_star_reduced(variant, mode, n, lam, lambda_e)
                records.append(
                    _base_record(topology, mode, n, rep_node, "reduced", ages.leaf)
                )
                net = restrict_protocol(build_topology(topology, n, lam, lambda_e), mode)
                cfg = SimConfig(horizon=horizon, replications=reps,
                                seed=seed + _SEED_STRIDE * point)
                est = estimate(net, cfg)
                te = est.nodes[rep_node]
                records.append(
                    _base_record(
                        topology, mode, n, rep_node, "simulated",
                        math.inf if te.divergent else te.value,
                        stderr=te.stderr, seed=cfg.seed,
                        horizon=horizon, reps=reps,
                    )
                )
                point += 1
    return records


def figure_ring_fc_records(
    n_values: Iterable[int] = DEFAULT_SWEEP,
    horizon: float = RING_FC_FIGURE_HORIZON,
    reps: int = RING_FC_FIGURE_REPS,
    seed: int = 0,
) -> List[ExperimentRecord]:
    """Single-node age of ring/complete networks under half-rate push-pull,
    with the push-protocol reference curves sqrt(pi/2)*sqrt(n) and ln(n)."""
    mode = ProtocolMode(Protocol.PUSH_PULL, scale=0.5)
    records: List[ExperimentRecord] = []
    point = 0
    for topology, curve in (("ring", lambda n: math.sqrt(math.pi / 2.0) * math.sqrt(n)),
                            ("complete", lambda n: math.log(n))):
        for n in n_values:
            net = restrict_protocol(build_topology(topology, n, 1.0, 1.0), mode)
            cfg = SimConfig(horizon=horizon, replications=reps,
                            seed=seed + _SEED_STRIDE * point)
            est = estimate(net, cfg)
            te = est.nodes[1]
            records.append(
                _base_record(
                    topology, mode, n, 1, "simulated",
                    math.inf if te.divergent else te.value,
                    stderr=te.stderr, seed=cfg.seed, horizon=horizon, reps=reps,
                )
            )
            records.append(
                _base_record(topology, mode, n, 1, "reference-curve", curve(n))
            )
            point += 1
    return records
