"""Exact limiting average version age via the subset recursion.

The age of a set S satisfies

    v_S = (lambda_e + sum_{i in N(S)} w_i(S) * v_{S u {i}})
          / (lambda_src(S) + sum_{i in N(S)} w_i(S))

where w_i(S) is the combined inbound rate from i into S (push into S plus
pulls by S). Supersets strictly grow, so memoized top-down evaluation over
set bitmasks terminates; the full node set is the natural base case. A zero
denominator means the set can never be refreshed and its age is +inf, which
propagates through any superset term with positive weight.

Each solver instance owns a private memo table; run concurrent queries on
separate instances (results are deterministic either way).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Literal, NamedTuple, Tuple

from .network import (
    SOLVER_NODE_CAP,
    GossipNetwork,
    NetworkError,
    NodeSet,
    ProtocolMode,
    lambda_into,
    lambda_src_total,
    neighbors,
)


@dataclass
class AgeTable:
    """Ages keyed by node set; +inf marks sets that can never be refreshed."""

    entries: Dict[NodeSet, float] = field(default_factory=dict)

    def get(self, S: Iterable[int]) -> float:
        key = frozenset(S)
        if key not in self.entries:
            raise KeyError(f"no age stored for set {sorted(key)}")
        return self.entries[key]

    def put(self, S: Iterable[int], value: float) -> None:
        self.entries[frozenset(S)] = value

    def singleton(self, i: int) -> float:
        return self.get((i,))

    def average(self, n: int) -> float:
        """Mean singleton age over nodes 1..n; +inf if any node diverges."""
        vals = [self.singleton(i) for i in range(1, n + 1)]
        if any(math.isinf(v) for v in vals):
            return math.inf
        return sum(vals) / n


class ExactAgeSolver:
    """Memoized evaluator of the subset recursion for one network."""

    def __init__(self, net: GossipNetwork):
        if net.n > SOLVER_NODE_CAP:
            raise NetworkError(
                f"n = {net.n} exceeds exact-solver cap of {SOLVER_NODE_CAP} nodes"
            )
        self.net = net
        self._memo: Dict[int, float] = {}
        # in_edges[j] = [(i, merged rate i->j)] for fast inbound sums.
        self._in_edges: List[List[Tuple[int, float]]] = [[] for _ in range(net.n + 1)]
        merged: Dict[Tuple[int, int], float] = {}
        for (i, j), r in net.push_rates.items():
            merged[(i, j)] = merged.get((i, j), 0.0) + r
        for (j, i), r in net.pull_rates.items():
            merged[(i, j)] = merged.get((i, j), 0.0) + r
        for (i, j), r in merged.items():
            if r > 0.0:
                self._in_edges[j].append((i, r))
        self._src = net.source_rates

    def solve(self, S: Iterable[int]) -> float:
        s = frozenset(S)
        if not s:
            raise NetworkError("node set must be non-empty")
        mask = 0
        for i in s:
            if not (1 <= i <= self.net.n):
                raise NetworkError(f"node {i} out of range 1..{self.net.n}")
            mask |= 1 << (i - 1)
        return self._solve_mask(mask)

    def _solve_mask(self, mask: int) -> float:
        cached = self._memo.get(mask)
        if cached is not None:
            return cached
        lam_src = 0.0
        inflow: Dict[int, float] = {}
        m = mask
        while m:
            low = m & -m
            j = low.bit_length()
            lam_src += self._src[j - 1]
            for i, r in self._in_edges[j]:
                if not (mask >> (i - 1)) & 1:
                    inflow[i] = inflow.get(i, 0.0) + r
            m ^= low
        denom = lam_src + sum(inflow.values())
        if denom == 0.0:
            value = math.inf
        else:
            num = self.net.lambda_e
            value = None
            for i, w in inflow.items():
                sup = self._solve_mask(mask | (1 << (i - 1)))
                if math.isinf(sup):
                    value = math.inf
                    break
                num += w * sup
            if value is None:
                value = num / denom
        self._memo[mask] = value
        return value

    def table(self) -> AgeTable:
        t = AgeTable()
        for mask, v in self._memo.items():
            members = frozenset(i + 1 for i in range(self.net.n) if (mask >> i) & 1)
            t.entries[members] = v
        return t


def solve_age(net: GossipNetwork, S: Iterable[int]) -> float:
    return ExactAgeSolver(net).solve(S)


def solve_all_singletons(net: GossipNetwork) -> AgeTable:
    """Ages of every singleton (plus all memoized intermediate sets)."""
    solver = ExactAgeSolver(net)
    for i in range(1, net.n + 1):
        solver.solve((i,))
    return solver.table()


def age_bounds(
    net: GossipNetwork, S: Iterable[int], superset_ages: AgeTable
) -> Tuple[float, float]:
    """Lower/upper bounds on v_S from the one-larger superset ages.

    Upper bound treats the neighborhood as |N(S)| copies of its weakest
    inbound rate feeding the stalest superset; the lower bound mirrors with
    the strongest rate and freshest superset. With a symmetric neighborhood
    both collapse to the recursion itself. No neighbors degenerates to the
    neighbor-free evaluation (lo == hi).
    """
    s = frozenset(S)
    nbrs = neighbors(net, s)
    lam_src = lambda_src_total(net, s)
    lam_e = net.lambda_e
    if not nbrs:
        v = lam_e / lam_src if lam_src > 0 else math.inf
        return (v, v)
    weights = {i: lambda_into(net, i, s) for i in nbrs}
    sups = {i: superset_ages.get(s | {i}) for i in nbrs}
    m = len(nbrs)
    w_min, w_max = min(weights.values()), max(weights.values())
    v_min, v_max = min(sups.values()), max(sups.values())
    upper = _bound_value(lam_e, lam_src, m * w_min, v_max)
    lower = _bound_value(lam_e, lam_src, m * w_max, v_min)
    return (lower, upper)


def _bound_value(lam_e: float, lam_src: float, weight: float, sup: float) -> float:
    num = lam_e + (weight * sup if weight > 0.0 else 0.0)
    denom = lam_src + weight
    return num / denom if denom > 0.0 else math.inf


StarVariant = Literal["center-fed", "leaf-fed"]


class StarAges(NamedTuple):
    fed: float
    center: float
    leaf: float


def _star_edge_rates(mode: ProtocolMode, n: int, lam: float) -> Tuple[float, float]:
    """Merged information-flow rates (center->leaf, leaf->center) for a star."""
    s = mode.scale
    a = (lam / (n - 1) if mode.push_active else 0.0) + (lam if mode.pull_active else 0.0)
    b = (lam if mode.push_active else 0.0) + (lam / (n - 1) if mode.pull_active else 0.0)
    return s * a, s * b


def _ratio(num: float, denom: float) -> float:
    return num / denom if denom > 0.0 else math.inf


def star_reduced_center_fed_classes(
    mode: ProtocolMode, n: int, lam: float, lambda_e: float
) -> Dict[Tuple[int, int], float]:
    """Class ages for the center-fed star, keyed by (k, c).

    k = number of leaves in the set, c = 1 if the (source-fed) center is in.
    All leaves are interchangeable, so the recursion collapses to O(n)
    classes; class transition weights carry the leaf multiplicities.
    """
    if n < 3:
        raise NetworkError(f"reduced star solver needs n >= 3, got {n}")
    a, b = _star_edge_rates(mode, n, lam)
    v: Dict[Tuple[int, int], float] = {(n - 1, 1): _ratio(lambda_e, lam)}
    for k in range(n - 2, -1, -1):
        m = n - 1 - k  # leaves still outside, each feeding the center-held set
        v[(k, 1)] = _combine(lambda_e, lam, [(m * b, v[(k + 1, 1)])])
    for k in range(1, n):
        sup = v[(k, 1)]
        w = k * a
        if w == 0.0 or math.isinf(sup):
            v[(k, 0)] = math.inf
        else:
            v[(k, 0)] = (lambda_e + w * sup) / w
    return v


def star_reduced_leaf_fed_classes(
    mode: ProtocolMode, n: int, lam: float, lambda_e: float
) -> Dict[Tuple[int, int, int], float]:
    """Class ages for the leaf-fed star, keyed by (k, f, c).

    k = symmetric leaves from {2..n-1} in the set, f = fed leaf (node 1) in,
    c = center (node n) in.
    """
    if n < 3:
        raise NetworkError(f"reduced star solver needs n >= 3, got {n}")
    a, b = _star_edge_rates(mode, n, lam)
    v: Dict[Tuple[int, int, int], float] = {(n - 2, 1, 1): _ratio(lambda_e, lam)}
    for k in range(n - 3, -1, -1):
        m = n - 2 - k
        v[(k, 1, 1)] = _combine(lambda_e, lam, [(m * b, v[(k + 1, 1, 1)])])
    for k in range(n - 2, -1, -1):
        m = n - 2 - k
        terms = [(b, v[(k, 1, 1)])]
        if m > 0:
            terms.append((m * b, v[(k + 1, 0, 1)]))
        v[(k, 0, 1)] = _combine(lambda_e, 0.0, terms)
    for k in range(n - 1):
        for f in (0, 1):
            if k + f == 0:
                continue
            w = (k + f) * a
            v[(k, f, 0)] = _combine(lambda_e, lam * f, [(w, v[(k, f, 1)])])
    return v


def _combine(lam_e: float, lam_src: float, terms: List[Tuple[float, float]]) -> float:
    num = lam_e
    denom = lam_src
    for w, sup in terms:
        denom += w
        if w > 0.0:
            if math.isinf(sup):
                return math.inf
            num += w * sup
    return num / denom if denom > 0.0 else math.inf


def solve_star_reduced(
    variant: StarVariant, mode: ProtocolMode, n: int, lam: float, lambda_e: float
) -> StarAges:
    """(fed-node age, center age, leaf-class age) via the O(n) class recursion.

    Matches the exact subset solver wherever both run; usable far beyond the
    exact solver's node cap.
    """
    if variant == "center-fed":
        v = star_reduced_center_fed_classes(mode, n, lam, lambda_e)
        center = v[(0, 1)]
        return StarAges(fed=center, center=center, leaf=v[(1, 0)])
    if variant == "leaf-fed":
        v = star_reduced_leaf_fed_classes(mode, n, lam, lambda_e)
        return StarAges(fed=v[(0, 1, 0)], center=v[(0, 0, 1)], leaf=v[(1, 0, 0)])
    raise NetworkError(f"unknown star variant {variant!r}")
