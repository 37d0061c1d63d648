"""Gossip network data model, rate aggregates and protocol transforms.

Nodes are integers 1..n. The source is a separate entity (not a node index):
it refreshes its own packet at rate ``lambda_e`` and feeds node i at rate
``source_rates[i-1]``. Gossip edges are sparse, keyed by ordered pair:
``push_rates[(i, j)]`` is the rate at which i pushes its packet to j,
``pull_rates[(i, j)]`` the rate at which i pulls the packet stored at j.
Asymmetric rates are allowed. An absent key means rate 0.

All functions here are pure; a validated network is immutable and safe to
share across threads/processes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Mapping, Tuple

Edge = Tuple[int, int]
NodeSet = FrozenSet[int]

#: Bit-vector width of the exact solver's set encoding.
SOLVER_NODE_CAP = 64


class NetworkError(ValueError):
    """A network or a query on it violates the model's invariants."""


class Protocol(str, Enum):
    PUSH = "push"
    PULL = "pull"
    PUSH_PULL = "pushpull"


@dataclass(frozen=True)
class ProtocolMode:
    """Protocol restriction plus a gossip rate-scale factor in (0, 1].

    scale=0.5 on PUSH_PULL gives the "half rate" push-pull variant used for
    fair comparisons against full-rate single-direction protocols.
    """

    protocol: Protocol = Protocol.PUSH_PULL
    scale: float = 1.0

    def __post_init__(self) -> None:
        if not (0.0 < self.scale <= 1.0):
            raise NetworkError(f"scale factor must be in (0, 1], got {self.scale}")

    @property
    def push_active(self) -> bool:
        return self.protocol in (Protocol.PUSH, Protocol.PUSH_PULL)

    @property
    def pull_active(self) -> bool:
        return self.protocol in (Protocol.PULL, Protocol.PUSH_PULL)


def _clean_rates(rates: Mapping[Edge, float]) -> Dict[Edge, float]:
    # Drop explicit zeros so that "absent key" is the canonical zero form.
    return {edge: float(r) for edge, r in rates.items() if r != 0.0}


@dataclass(frozen=True)
class GossipNetwork:
    n: int
    lambda_e: float
    source_rates: Tuple[float, ...]
    push_rates: Dict[Edge, float] = field(default_factory=dict)
    pull_rates: Dict[Edge, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "source_rates", tuple(float(r) for r in self.source_rates))
        object.__setattr__(self, "push_rates", _clean_rates(self.push_rates))
        object.__setattr__(self, "pull_rates", _clean_rates(self.pull_rates))

    def source_rate(self, i: int) -> float:
        _check_node(self, i)
        return self.source_rates[i - 1]

    def merged_rate(self, i: int, j: int) -> float:
        """Rate at which information flows i -> j: push i->j plus pull by j from i."""
        return self.push_rates.get((i, j), 0.0) + self.pull_rates.get((j, i), 0.0)

    def all_nodes(self) -> NodeSet:
        return frozenset(range(1, self.n + 1))


def _check_node(net: GossipNetwork, i: int) -> None:
    if not (1 <= i <= net.n):
        raise NetworkError(f"node {i} out of range 1..{net.n}")


def _check_set(net: GossipNetwork, S: Iterable[int]) -> NodeSet:
    s = frozenset(S)
    if not s:
        raise NetworkError("node set must be non-empty")
    for i in s:
        _check_node(net, i)
    return s


def validate(net: GossipNetwork) -> None:
    """Raise NetworkError naming the first violated invariant."""
    if net.n < 1:
        raise NetworkError(f"n = {net.n}: need at least one node")
    if not math.isfinite(net.lambda_e) or net.lambda_e < 0:
        raise NetworkError(f"negative or non-finite source self-rate {net.lambda_e}")
    if len(net.source_rates) != net.n:
        raise NetworkError(
            f"source_rates has length {len(net.source_rates)}, expected {net.n}"
        )
    for i, r in enumerate(net.source_rates, start=1):
        if not math.isfinite(r) or r < 0:
            raise NetworkError(f"negative or non-finite source rate {r} for node {i}")
    for name, rates in (("push", net.push_rates), ("pull", net.pull_rates)):
        for (i, j), r in rates.items():
            if i == j:
                raise NetworkError(f"self-loop {name} edge ({i},{j})")
            if not (1 <= i <= net.n and 1 <= j <= net.n):
                raise NetworkError(f"{name} edge ({i},{j}) has endpoint out of range")
            if not math.isfinite(r) or r < 0:
                raise NetworkError(f"negative or non-finite rate {r} on {name} edge ({i},{j})")


def lambda_src_total(net: GossipNetwork, S: Iterable[int]) -> float:
    """Total source feed rate into S: sum of source_rates over members."""
    s = _check_set(net, S)
    return sum(net.source_rates[i - 1] for i in s)


def lambda_pull_into(net: GossipNetwork, i: int, S: Iterable[int]) -> float:
    """Total rate at which members of S pull the packet stored at i (0 if i in S)."""
    s = _check_set(net, S)
    _check_node(net, i)
    if i in s:
        return 0.0
    return sum(net.pull_rates.get((j, i), 0.0) for j in s)


def lambda_push_into(net: GossipNetwork, i: int, S: Iterable[int]) -> float:
    """Total rate at which i pushes its packet to members of S (0 if i in S)."""
    s = _check_set(net, S)
    _check_node(net, i)
    if i in s:
        return 0.0
    return sum(net.push_rates.get((i, j), 0.0) for j in s)


def lambda_into(net: GossipNetwork, i: int, S: Iterable[int]) -> float:
    """Combined inbound rate from node i into set S (push into S + pulls by S)."""
    return lambda_pull_into(net, i, S) + lambda_push_into(net, i, S)


def neighbors(net: GossipNetwork, S: Iterable[int]) -> NodeSet:
    """Nodes outside S from which information can flow into S at positive rate."""
    s = _check_set(net, S)
    return frozenset(
        i for i in range(1, net.n + 1) if i not in s and lambda_into(net, i, s) > 0.0
    )


def restrict_protocol(net: GossipNetwork, mode: ProtocolMode) -> GossipNetwork:
    """Zero out the gossip direction(s) the mode disables and scale the rest.

    Source rates and the source self-rate are never touched.
    """
    push = net.push_rates if mode.push_active else {}
    pull = net.pull_rates if mode.pull_active else {}
    return GossipNetwork(
        n=net.n,
        lambda_e=net.lambda_e,
        source_rates=net.source_rates,
        push_rates={e: mode.scale * r for e, r in push.items()},
        pull_rates={e: mode.scale * r for e, r in pull.items()},
    )


def superpose_to_push(net: GossipNetwork) -> GossipNetwork:
    """Equivalent push-only network: edge (i,j) carries push(i,j) + pull(j,i).

    The age dynamics are unchanged because information flows i -> j at the
    merged rate either way.
    """
    merged: Dict[Edge, float] = {}
    for (i, j), r in net.push_rates.items():
        merged[(i, j)] = merged.get((i, j), 0.0) + r
    for (j, i), r in net.pull_rates.items():
        merged[(i, j)] = merged.get((i, j), 0.0) + r
    return GossipNetwork(
        n=net.n,
        lambda_e=net.lambda_e,
        source_rates=net.source_rates,
        push_rates=merged,
        pull_rates={},
    )
