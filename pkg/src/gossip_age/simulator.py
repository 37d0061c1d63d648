"""Event-driven continuous-time simulation of push/pull/push-pull gossip.

State is kept as monotone version counters, never as an age vector: the
source counter N0 bumps on self-updates (O(1)), node i's counter jumps to N0
on a source delivery and to max(N_i, N_j) on a transfer i->j, which is the
age-minimum rule seen through counters. Ages are piecewise constant between
events, so time-averages are exact integrals maintained by lazy per-target
accumulators (flush value * elapsed on change only).

Event selection: all Poisson processes are merged once into a static table
(source-self, one process per fed node, one process per information-flow
edge at rate push(i,j) + pull(j,i)); waiting times are exponential in the
total rate and the event is a categorical draw via binary search over the
cumulative rates.

RNG: numpy PCG64. Replication r uses seed = base_seed ^ r, so replications
are independent and individually reproducible; results are bit-identical
regardless of scheduling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from numba import njit

from .network import GossipNetwork, NetworkError, NodeSet

# Event kinds in the merged process table.
SOURCE_SELF = 0
SOURCE_SEND = 1
TRANSFER = 2

_CHUNK = 1 << 16


class EventTable:
    """Static merged-rate process table for one network."""

    def __init__(self, net: GossipNetwork):
        kinds: List[int] = [SOURCE_SELF]
        arg_a: List[int] = [0]
        arg_b: List[int] = [0]
        rates: List[float] = [net.lambda_e]
        for i, r in enumerate(net.source_rates, start=1):
            if r > 0.0:
                kinds.append(SOURCE_SEND)
                arg_a.append(i)
                arg_b.append(0)
                rates.append(r)
        merged: Dict[Tuple[int, int], float] = {}
        for (i, j), r in net.push_rates.items():
            merged[(i, j)] = merged.get((i, j), 0.0) + r
        for (j, i), r in net.pull_rates.items():
            merged[(i, j)] = merged.get((i, j), 0.0) + r
        for (i, j) in sorted(merged):
            if merged[(i, j)] > 0.0:
                kinds.append(TRANSFER)
                arg_a.append(i)
                arg_b.append(j)
                rates.append(merged[(i, j)])
        self.n = net.n
        self.kinds = np.asarray(kinds, dtype=np.int8)
        self.arg_a = np.asarray(arg_a, dtype=np.int64)
        self.arg_b = np.asarray(arg_b, dtype=np.int64)
        self.rates = np.asarray(rates, dtype=np.float64)
        self.cum = np.cumsum(self.rates)
        self.total = float(self.cum[-1])
        if self.total <= 0.0:
            raise NetworkError("total event rate is zero; nothing to simulate")

    def event(self, index: int) -> tuple:
        k = int(self.kinds[index])
        if k == SOURCE_SELF:
            return ("self",)
        if k == SOURCE_SEND:
            return ("src", int(self.arg_a[index]))
        return ("xfer", int(self.arg_a[index]), int(self.arg_b[index]))


def next_event(table: EventTable, rng: np.random.Generator) -> Tuple[float, tuple]:
    """One exponential waiting time and one categorical event draw."""
    dt = rng.exponential(1.0 / table.total)
    u = rng.random() * table.total
    idx = int(np.searchsorted(table.cum, u, side="right"))
    return dt, table.event(min(idx, len(table.rates) - 1))


def sample_event_chunk(
    table: EventTable, rng: np.random.Generator, size: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized batch of (waiting times, event indices); same stream as the
    fast path when called with the fast path's chunk size."""
    dts = rng.exponential(1.0 / table.total, size=size)
    us = rng.random(size=size)
    idx = np.minimum(
        np.searchsorted(table.cum, us * table.total, side="right"),
        len(table.rates) - 1,
    )
    return dts, idx


class SimulationState:
    """Version counters plus lazy time-integral accumulators.

    Arithmetic is generic over the number type of the supplied waiting
    times (floats normally; fractions.Fraction gives exact integration in
    tests). Integration window is [burn_in, horizon].
    """

    def __init__(self, n: int, burn_in, horizon, tracked_sets: Sequence[NodeSet] = ()):
        self.n = n
        self.burn_in = burn_in
        self.horizon = horizon
        self.clock = 0
        self.source_version = 0
        self.node_versions = [0] * n
        self._node_last = [0] * n
        self._node_integral = [0] * n
        self._src_last = 0
        self._src_integral = 0
        self.tracked_sets = [frozenset(s) for s in tracked_sets]
        self._set_max = [0] * len(self.tracked_sets)
        self._set_last = [0] * len(self.tracked_sets)
        self._set_integral = [0] * len(self.tracked_sets)
        self._sets_of_node: List[List[int]] = [[] for _ in range(n + 1)]
        for si, s in enumerate(self.tracked_sets):
            for i in s:
                self._sets_of_node[i].append(si)

    def _overlap(self, t0, t1):
        lo = t0 if t0 > self.burn_in else self.burn_in
        hi = t1 if t1 < self.horizon else self.horizon
        return hi - lo if hi > lo else 0

    def _bump_node(self, i: int, new_version: int) -> None:
        if new_version <= self.node_versions[i - 1]:
            return
        self._node_integral[i - 1] += self.node_versions[i - 1] * self._overlap(
            self._node_last[i - 1], self.clock
        )
        self._node_last[i - 1] = self.clock
        self.node_versions[i - 1] = new_version
        for si in self._sets_of_node[i]:
            if new_version > self._set_max[si]:
                self._set_integral[si] += self._set_max[si] * self._overlap(
                    self._set_last[si], self.clock
                )
                self._set_last[si] = self.clock
                self._set_max[si] = new_version

    def apply_event(self, dt, event: tuple) -> None:
        """Advance the clock by dt, then apply one transition."""
        self.clock = self.clock + dt
        kind = event[0]
        if kind == "self":
            self._src_integral += self.source_version * self._overlap(
                self._src_last, self.clock
            )
            self._src_last = self.clock
            self.source_version += 1
        elif kind == "src":
            self._bump_node(event[1], self.source_version)
        elif kind == "xfer":
            i, j = event[1], event[2]
            self._bump_node(j, self.node_versions[i - 1])
        else:
            raise ValueError(f"unknown event {event!r}")
        assert all(v <= self.source_version for v in self.node_versions)

    def finish(self) -> Tuple[list, list]:
        """Flush accumulators to the horizon; returns per-node and per-set
        time-average ages over [burn_in, horizon]."""
        span = self.horizon - self.burn_in
        src_int = self._src_integral + self.source_version * self._overlap(
            self._src_last, self.horizon
        )
        node_avgs = []
        for i in range(self.n):
            tot = self._node_integral[i] + self.node_versions[i] * self._overlap(
                self._node_last[i], self.horizon
            )
            node_avgs.append((src_int - tot) / span)
        set_avgs = []
        for si in range(len(self.tracked_sets)):
            tot = self._set_integral[si] + self._set_max[si] * self._overlap(
                self._set_last[si], self.horizon
            )
            set_avgs.append((src_int - tot) / span)
        return node_avgs, set_avgs


@dataclass(frozen=True)
class SimConfig:
    horizon: float
    burn_in: Optional[float] = None
    replications: int = 1
    seed: int = 0
    tracked_sets: Tuple[NodeSet, ...] = ()

    def __post_init__(self) -> None:
        burn = self.horizon / 10.0 if self.burn_in is None else self.burn_in
        object.__setattr__(self, "burn_in", float(burn))
        object.__setattr__(
            self, "tracked_sets", tuple(frozenset(s) for s in self.tracked_sets)
        )
        if not (0.0 <= self.burn_in < self.horizon):
            raise NetworkError(
                f"need 0 <= burn_in < horizon, got burn_in={self.burn_in}, "
                f"horizon={self.horizon}"
            )
        if self.replications < 1:
            raise NetworkError(f"replications must be >= 1, got {self.replications}")


@dataclass(frozen=True)
class TargetEstimate:
    value: float
    stderr: Optional[float]
    divergent: bool


@dataclass(frozen=True)
class AgeEstimate:
    nodes: Dict[int, TargetEstimate]
    sets: Dict[NodeSet, TargetEstimate]
    average: TargetEstimate


@njit(cache=True)
def _advance(dts, idx, kinds, arg_a, arg_b, horizon, burn,
             t, n0, versions, node_last, node_int,
             src_state, set_max, set_last, set_int,
             sets_off, sets_idx):
    # src_state = [src_last, src_integral]; returns (t, n0, done)
    for e in range(dts.shape[0]):
        tn = t + dts[e]
        if tn >= horizon:
            return horizon, n0, True
        p = idx[e]
        k = kinds[p]
        if k == 0:  # source self-update
            lo = src_state[0] if src_state[0] > burn else burn
            if tn > lo:
                src_state[1] += n0 * (tn - lo)
            src_state[0] = tn
            n0 += 1
        else:
            if k == 1:  # source -> node
                j = arg_a[p]
                new_v = n0
            else:  # transfer arg_a -> arg_b
                j = arg_b[p]
                new_v = versions[arg_a[p] - 1]
            jj = j - 1
            if new_v > versions[jj]:
                lo = node_last[jj] if node_last[jj] > burn else burn
                if tn > lo:
                    node_int[jj] += versions[jj] * (tn - lo)
                node_last[jj] = tn
                versions[jj] = new_v
                for q in range(sets_off[j], sets_off[j + 1]):
                    si = sets_idx[q]
                    if new_v > set_max[si]:
                        lo = set_last[si] if set_last[si] > burn else burn
                        if tn > lo:
                            set_int[si] += set_max[si] * (tn - lo)
                        set_last[si] = tn
                        set_max[si] = new_v
        t = tn
    return t, n0, False


def run_replication(
    net: GossipNetwork, config: SimConfig, replication_index: int
) -> Tuple[List[float], List[float]]:
    """Time-average age per node (and per tracked set) for one replication."""
    return _run_fast(EventTable(net), config, replication_index)


def _run_fast(
    table: EventTable, config: SimConfig, replication_index: int
) -> Tuple[List[float], List[float]]:
    n = table.n
    horizon = float(config.horizon)
    burn = float(config.burn_in)
    rng = np.random.Generator(np.random.PCG64(config.seed ^ replication_index))
    versions = np.zeros(n, dtype=np.int64)
    node_last = np.zeros(n, dtype=np.float64)
    node_int = np.zeros(n, dtype=np.float64)
    src_state = np.zeros(2, dtype=np.float64)
    m = len(config.tracked_sets)
    set_max = np.zeros(m, dtype=np.int64)
    set_last = np.zeros(m, dtype=np.float64)
    set_int = np.zeros(m, dtype=np.float64)
    sets_of_node: List[List[int]] = [[] for _ in range(n + 2)]
    for si, s in enumerate(config.tracked_sets):
        for i in s:
            if not (1 <= i <= n):
                raise NetworkError(f"tracked set member {i} out of range 1..{n}")
            sets_of_node[i].append(si)
    # ragged "sets containing node j" lookup: members of sets_of_node[j] live
    # at sets_idx[sets_off[j]:sets_off[j+1]]
    sets_off = np.zeros(n + 2, dtype=np.int64)
    flat: List[int] = []
    for i in range(n + 1):
        sets_off[i] = len(flat)
        flat.extend(sets_of_node[i] if i >= 1 else [])
    sets_off[n + 1] = len(flat)
    sets_idx = np.asarray(flat, dtype=np.int64) if flat else np.zeros(0, dtype=np.int64)

    t = 0.0
    n0 = 0
    done = False
    while not done:
        dts, idx = sample_event_chunk(table, rng, _CHUNK)
        t, n0, done = _advance(
            dts, idx.astype(np.int64), table.kinds, table.arg_a, table.arg_b,
            horizon, burn, t, n0, versions, node_last, node_int,
            src_state, set_max, set_last, set_int, sets_off, sets_idx,
        )
    span = horizon - burn
    src_int = src_state[1] + n0 * max(0.0, horizon - max(src_state[0], burn))
    node_avgs = []
    for i in range(n):
        tot = node_int[i] + versions[i] * max(0.0, horizon - max(node_last[i], burn))
        node_avgs.append((src_int - tot) / span)
    set_avgs = []
    for si in range(m):
        tot = set_int[si] + set_max[si] * max(0.0, horizon - max(set_last[si], burn))
        set_avgs.append((src_int - tot) / span)
    return node_avgs, set_avgs


def source_reachable(net: GossipNetwork) -> NodeSet:
    """Nodes that can ever receive a version: closure of the fed nodes under
    positive merged information-flow edges."""
    out: Dict[int, List[int]] = {i: [] for i in range(1, net.n + 1)}
    for (i, j), r in net.push_rates.items():
        if r > 0.0:
            out[i].append(j)
    for (j, i), r in net.pull_rates.items():
        if r > 0.0:
            out[i].append(j)
    frontier = [i for i, r in enumerate(net.source_rates, start=1) if r > 0.0]
    seen = set(frontier)
    while frontier:
        i = frontier.pop()
        for j in out[i]:
            if j not in seen:
                seen.add(j)
                frontier.append(j)
    return frozenset(seen)


def estimate(net: GossipNetwork, config: SimConfig) -> AgeEstimate:
    """Replicated simulation: per-target mean, standard error and divergence.

    Replications are independent (seed = base ^ r) and aggregated in
    replication order; a single replication reports no standard error.
    """
    table = EventTable(net)
    reach = source_reachable(net)
    node_rows = []
    set_rows = []
    for r in range(config.replications):
        nodes, sets = _run_fast(table, config, r)
        node_rows.append(nodes)
        set_rows.append(sets)
    node_arr = np.asarray(node_rows)
    set_arr = np.asarray(set_rows) if config.tracked_sets else np.zeros((config.replications, 0))

    def _agg(values: np.ndarray, divergent: bool) -> TargetEstimate:
        mean = float(np.mean(values))
        if config.replications > 1:
            se = float(np.std(values, ddof=1) / math.sqrt(config.replications))
        else:
            se = None
        return TargetEstimate(value=mean, stderr=se, divergent=divergent)

    nodes = {
        i: _agg(node_arr[:, i - 1], i not in reach) for i in range(1, net.n + 1)
    }
    sets = {
        s: _agg(set_arr[:, si], reach.isdisjoint(s))
        for si, s in enumerate(config.tracked_sets)
    }
    average = _agg(node_arr.mean(axis=1), any(e.divergent for e in nodes.values()))
    return AgeEstimate(nodes=nodes, sets=sets, average=average)
