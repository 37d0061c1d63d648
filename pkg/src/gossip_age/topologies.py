"""Benchmark topology generators and the JSON network file format.

All generators follow the same budget convention: each node spends a total
gossip rate ``lam`` per rate type (push/pull), spread evenly over its
neighbors. ``lambda_e`` is the source self-update rate.

File format (JSON): {"n", "lambda_e", "source_rates", "push_edges",
"pull_edges"} where the edge arrays hold {"from", "to", "rate"} objects.
Rates round-trip exactly as binary64.
"""
from __future__ import annotations

import json
import random
from typing import Dict, List

from .network import Edge, GossipNetwork, NetworkError, validate


def star_center_fed(n: int, lam: float, lambda_e: float) -> GossipNetwork:
    """Star with the source feeding the center (node n) at rate lam.

    Leaves push/pull to the center at rate lam; the center spreads its
    budget as lam/(n-1) per leaf per rate type.
    """
    net = _star_gossip(n, lam, lambda_e, fed_node=n, src_rate=lam)
    return net


def star_leaf_fed(n: int, lam: float, lambda_e: float) -> GossipNetwork:
    """Star with the source feeding leaf 1 at rate lam; gossip rates as in
    star_center_fed."""
    return _star_gossip(n, lam, lambda_e, fed_node=1, src_rate=lam)


def _star_gossip(n: int, lam: float, lambda_e: float, fed_node: int, src_rate: float) -> GossipNetwork:
    if n < 2:
        raise NetworkError(f"star needs n >= 2, got {n}")
    _check_budget(lam, lambda_e)
    center = n
    center_out = lam / (n - 1)
    push: Dict[Edge, float] = {}
    pull: Dict[Edge, float] = {}
    for leaf in range(1, n):
        push[(leaf, center)] = lam
        pull[(leaf, center)] = lam
        push[(center, leaf)] = center_out
        pull[(center, leaf)] = center_out
    src = [0.0] * n
    src[fed_node - 1] = src_rate
    return GossipNetwork(n=n, lambda_e=lambda_e, source_rates=tuple(src),
                         push_rates=push, pull_rates=pull)


def ring(n: int, lam: float, lambda_e: float) -> GossipNetwork:
    """Bidirectional ring; each node pushes/pulls to both neighbors at lam/2.

    The source feeds every node uniformly at lam/n (total source budget lam).
    """
    if n < 3:
        raise NetworkError(f"ring needs n >= 3, got {n}")
    _check_budget(lam, lambda_e)
    half = lam / 2.0
    push: Dict[Edge, float] = {}
    pull: Dict[Edge, float] = {}
    for i in range(1, n + 1):
        for j in (i % n + 1, (i - 2) % n + 1):
            push[(i, j)] = half
            pull[(i, j)] = half
    src = tuple(lam / n for _ in range(n))
    return GossipNetwork(n=n, lambda_e=lambda_e, source_rates=src,
                         push_rates=push, pull_rates=pull)


def complete(n: int, lam: float, lambda_e: float) -> GossipNetwork:
    """Fully connected network; per-pair rate lam/(n-1) per direction per type.

    Source feeds every node uniformly at lam/n.
    """
    if n < 2:
        raise NetworkError(f"complete needs n >= 2, got {n}")
    _check_budget(lam, lambda_e)
    per_edge = lam / (n - 1)
    push: Dict[Edge, float] = {}
    pull: Dict[Edge, float] = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                push[(i, j)] = per_edge
                pull[(i, j)] = per_edge
    src = tuple(lam / n for _ in range(n))
    return GossipNetwork(n=n, lambda_e=lambda_e, source_rates=src,
                         push_rates=push, pull_rates=pull)


def _check_budget(lam: float, lambda_e: float) -> None:
    if lam <= 0:
        raise NetworkError(f"gossip budget lambda must be > 0, got {lam}")
    if lambda_e < 0:
        raise NetworkError(f"lambda_e must be >= 0, got {lambda_e}")


def random_network(
    n: int,
    edge_probability: float,
    rate_low: float,
    rate_high: float,
    src_probability: float,
    seed: int,
    lambda_e: float = 1.0,
) -> GossipNetwork:
    """Seeded random network; push and pull edges are drawn independently.

    Each ordered pair (i, j) gains a push edge with probability
    edge_probability and, independently, a pull edge; rates are uniform in
    [rate_low, rate_high]. Each node is source-fed with probability
    src_probability; at least one fed node is forced. Deterministic in seed.
    """
    if not (0.0 <= edge_probability <= 1.0):
        raise NetworkError(f"edge probability {edge_probability} not in [0, 1]")
    if not (0.0 <= src_probability <= 1.0):
        raise NetworkError(f"source probability {src_probability} not in [0, 1]")
    if not (0.0 <= rate_low <= rate_high):
        raise NetworkError(f"invalid rate range [{rate_low}, {rate_high}]")
    if n < 1:
        raise NetworkError(f"random network needs n >= 1, got {n}")
    rng = random.Random(seed)
    push: Dict[Edge, float] = {}
    pull: Dict[Edge, float] = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            if rng.random() < edge_probability:
                push[(i, j)] = rng.uniform(rate_low, rate_high)
            if rng.random() < edge_probability:
                pull[(i, j)] = rng.uniform(rate_low, rate_high)
    src = [0.0] * n
    for i in range(n):
        if rng.random() < src_probability:
            src[i] = rng.uniform(rate_low, rate_high)
    if not any(src):
        src[rng.randrange(n)] = rng.uniform(rate_low, rate_high) or rate_high
    return GossipNetwork(n=n, lambda_e=lambda_e, source_rates=tuple(src),
                         push_rates=push, pull_rates=pull)


_FILE_FIELDS = {"n", "lambda_e", "source_rates", "push_edges", "pull_edges"}


def network_to_dict(net: GossipNetwork) -> dict:
    return {
        "n": net.n,
        "lambda_e": net.lambda_e,
        "source_rates": list(net.source_rates),
        "push_edges": _edges_out(net.push_rates),
        "pull_edges": _edges_out(net.pull_rates),
    }


def network_from_dict(doc: dict) -> GossipNetwork:
    if not isinstance(doc, dict):
        raise NetworkError("network document must be a JSON object")
    unknown = set(doc) - _FILE_FIELDS
    if unknown:
        raise NetworkError(f"unknown field(s) in network document: {sorted(unknown)}")
    missing = {"n", "lambda_e", "source_rates"} - set(doc)
    if missing:
        raise NetworkError(f"network document missing field(s): {sorted(missing)}")
    net = GossipNetwork(
        n=int(doc["n"]),
        lambda_e=float(doc["lambda_e"]),
        source_rates=tuple(float(r) for r in doc["source_rates"]),
        push_rates=_edges_in(doc.get("push_edges", []), "push"),
        pull_rates=_edges_in(doc.get("pull_edges", []), "pull"),
    )
    validate(net)
    return net


def _edges_out(rates: Dict[Edge, float]) -> List[dict]:
    return [
        {"from": i, "to": j, "rate": r}
        for (i, j), r in sorted(rates.items())
    ]


def _edges_in(entries, kind: str) -> Dict[Edge, float]:
    rates: Dict[Edge, float] = {}
    for e in entries:
        unknown = set(e) - {"from", "to", "rate"}
        if unknown:
            raise NetworkError(f"unknown field(s) on {kind} edge: {sorted(unknown)}")
        i, j, r = int(e["from"]), int(e["to"]), float(e["rate"])
        if r < 0:
            raise NetworkError(f"negative rate {r} on {kind} edge ({i},{j})")
        rates[(i, j)] = rates.get((i, j), 0.0) + r
    return rates


def write_network_file(net: GossipNetwork, path: str) -> None:
    with open(path, "w") as f:
        json.dump(network_to_dict(net), f, indent=2)
        f.write("\n")


def read_network_file(path: str) -> GossipNetwork:
    with open(path) as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as exc:
            raise NetworkError(f"malformed network file {path}: {exc}") from exc
    return network_from_dict(doc)
