"""Comparison algorithms: oblivious routing, a deterministic credit-threshold
online baseline, a static greedy matching, and an exact offline optimum for
tiny instances.

The deterministic baseline (dbma) is a stand-in reconstruction, not the
published competitor: a pair earns credit equal to every charge it pays on
the fixed network and gets a link once the credit reaches the
reconfiguration cost. Its matching is kept in per-node incident lists with
linear membership scans, matching the plain structures such implementations
typically use, so its per-request cost grows with the degree cap.
"""

from __future__ import annotations

import functools
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .engine import CostLedger
from .errors import InstanceTooLarge, InvalidParams, NodeOutOfRange
from .topology import Pair, Topology
from .trace import Trace


def oblivious_cost(topology: Topology, trace: Trace) -> float:
    """Total routing cost with every request on the fixed network."""
    dist = topology.dist
    return float(sum(dist[u][v] for u, v in trace.requests))


@dataclass
class WeightedDemand:
    """Per-pair request counts aggregated over a trace."""

    counts: dict[Pair, int]
    total: int

    @classmethod
    def from_trace(cls, trace: Trace) -> "WeightedDemand":
        counts = Counter(trace.requests)
        return cls(dict(counts), sum(counts.values()))


@dataclass
class DbmaEvents:
    inserted: Pair | None = None
    removed: tuple[Pair, ...] = ()


class DbmaState:
    """Matching plus credit counters for the deterministic baseline."""

    __slots__ = ("topology", "b", "incident", "pending_credit", "matched_credit")

    def __init__(self, topology: Topology, b: int):
        if b < 1:
            raise InvalidParams("degree cap b must be at least 1")
        self.topology = topology
        self.b = b
        self.incident = [[] for _ in range(topology.node_count)]
        self.pending_credit = {}   # pair -> fixed-network charge accumulated
        self.matched_credit = {}   # pair -> credit earned since insertion

    def contains(self, pair: Pair) -> bool:
        return pair in self.incident[pair[0]]

    def edge_set(self) -> set[Pair]:
        return set(self.matched_credit)

    def degree_of(self, node: int) -> int:
        return len(self.incident[node])


def dbma_serve(state: DbmaState, req: Pair, ledger: CostLedger) -> float:
    """Charge 1 over a matching edge, hop distance otherwise."""
    if state.contains(req):
        charge = 1.0
    else:
        charge = float(state.topology.dist[req[0]][req[1]])
    ledger.routing_cost += charge
    return charge


def dbma_step(state: DbmaState, req: Pair, ledger: CostLedger) -> DbmaEvents:
    """Credit update after serving.

    Requests served over a matching edge change nothing. A fixed-network
    serve adds the pair's hop distance to its credit; reaching alpha inserts
    the pair, evicting per overflowing endpoint the incident edge with the
    least credit since insertion (ties by canonical order).
    """
    if state.contains(req):
        return DbmaEvents()
    credit = state.pending_credit.get(req, 0.0) + state.topology.dist[req[0]][req[1]]
    if credit < ledger.alpha:
        state.pending_credit[req] = credit
        return DbmaEvents()
    state.pending_credit[req] = 0.0
    matched_credit = state.matched_credit
    removed = []
    for node in req:
        incident = state.incident[node]
        if len(incident) >= state.b:
            victim = min(incident, key=lambda p: (matched_credit[p], p))
            state.incident[victim[0]].remove(victim)
            state.incident[victim[1]].remove(victim)
            del matched_credit[victim]
            state.pending_credit[victim] = 0.0
            ledger.removals += 1
            removed.append(victim)
    state.incident[req[0]].append(req)
    state.incident[req[1]].append(req)
    matched_credit[req] = 0.0
    ledger.insertions += 1
    return DbmaEvents(req, tuple(removed))


def run_dbma(topology: Topology, trace: Trace, b: int, alpha: float,
             on_step=None) -> tuple[CostLedger, DbmaState]:
    """Fold dbma_serve + dbma_step over a trace. Fully deterministic."""
    if trace.node_count > topology.node_count:
        raise NodeOutOfRange(
            f"trace over {trace.node_count} nodes exceeds topology of {topology.node_count}")
    ledger = CostLedger(alpha)
    state = DbmaState(topology, b)
    if on_step is None:
        for req in trace.requests:
            dbma_serve(state, req, ledger)
            dbma_step(state, req, ledger)
    else:
        for req in trace.requests:
            dbma_serve(state, req, ledger)
            on_step(req, dbma_step(state, req, ledger))
    return ledger, state


@dataclass
class GreedyMatchingResult:
    matching: frozenset[Pair]
    config_cost: float
    routing_cost: float

    @property
    def total(self) -> float:
        return self.config_cost + self.routing_cost


def offline_greedy_bmatching(demand: WeightedDemand, topology: Topology, b: int,
                             alpha: float) -> GreedyMatchingResult:
    """Static matching picked greedily by saved routing cost.

    Pairs are taken in decreasing count * (distance - 1) order, skipping any
    that would overflow a degree; a deliberate 1/2-approximation of the exact
    maximum-weight matching, traded for determinism and simplicity.
    """
    if b < 1:
        raise InvalidParams("degree cap b must be at least 1")
    dist = topology.dist
    savings = []
    for pair, count in demand.counts.items():
        saved = count * (dist[pair[0]][pair[1]] - 1)
        if saved > 0:
            savings.append((saved, pair))
    savings.sort(key=lambda item: (-item[0], item[1]))
    degree = Counter()
    matching = set()
    for _, pair in savings:
        if degree[pair[0]] < b and degree[pair[1]] < b:
            matching.add(pair)
            degree[pair[0]] += 1
            degree[pair[1]] += 1
    routing = 0.0
    for pair, count in demand.counts.items():
        routing += count * (1.0 if pair in matching else float(dist[pair[0]][pair[1]]))
    return GreedyMatchingResult(frozenset(matching), alpha * len(matching), routing)


MAX_OPT_NODES = 5
MAX_OPT_CAP = 2
MAX_OPT_REQUESTS = 24


@functools.lru_cache(maxsize=None)
def _config_tables(node_count: int, cap: int):
    """All degree-capped pair subsets as bitmasks, plus pairwise set-difference
    sizes. Cached; depends only on (node_count, cap)."""
    pairs = [(i, j) for i in range(node_count) for j in range(i + 1, node_count)]
    n_pairs = len(pairs)
    masks = []
    for mask in range(1 << n_pairs):
        degree = [0] * node_count
        ok = True
        m = mask
        while m:
            bit = (m & -m).bit_length() - 1
            u, v = pairs[bit]
            degree[u] += 1
            degree[v] += 1
            if degree[u] > cap or degree[v] > cap:
                ok = False
                break
            m &= m - 1
        if ok:
            masks.append(mask)
    masks = np.array(masks, dtype=np.int64)
    popcount = np.array([bin(x).count("1") for x in range(1 << n_pairs)], dtype=np.int64)
    sym_diff = popcount[masks[:, None] ^ masks[None, :]]
    return pairs, masks, popcount, sym_diff


def brute_force_opt(topology: Topology, trace: Trace, a: int, alpha: float) -> float:
    """Exact minimum total cost over all reconfiguration schedules with
    per-node degree at most a, by dynamic programming over (request,
    configuration). The matching starts empty and may be reconfigured before
    every request. Guarded to tiny instances."""
    if topology.node_count > MAX_OPT_NODES:
        raise InstanceTooLarge(f"at most {MAX_OPT_NODES} nodes supported")
    if a > MAX_OPT_CAP:
        raise InstanceTooLarge(f"at most a={MAX_OPT_CAP} supported")
    if len(trace.requests) > MAX_OPT_REQUESTS:
        raise InstanceTooLarge(f"at most {MAX_OPT_REQUESTS} requests supported")
    if a < 1:
        raise InvalidParams("a must be at least 1")
    if not trace.requests:
        return 0.0
    pairs, masks, popcount, sym_diff = _config_tables(topology.node_count, a)
    bit_of = {pair: i for i, pair in enumerate(pairs)}
    transition = alpha * sym_diff
    dist = topology.dist
    cost = None
    for req in trace.requests:
        in_config = (masks >> bit_of[req]) & 1
        serve_cost = np.where(in_config == 1, 1.0, float(dist[req[0]][req[1]]))
        if cost is None:
            cost = alpha * popcount[masks] + serve_cost
        else:
            cost = (cost[:, None] + transition).min(axis=0) + serve_cost
    return float(cost.min())
