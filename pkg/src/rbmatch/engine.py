"""Online matching engine.

Serving is charged first; reconfiguration happens afterwards, and only on a
pair's every k-th occurrence (k scales inversely with the pair's hop
distance, so cheap-to-serve pairs must recur more before they earn a
reconfigurable link). Reconfiguration itself is delegated to one bounded
cache per node: a pair is kept as a matching edge exactly while the caches
of both endpoints hold it. Lazy mode defers physical removals until a degree
overflow forces pruning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidCost, InvalidParams, InvariantViolation, NodeOutOfRange
from .paging import RANDOMIZED_MARKING, PagingCache, PagingEvents
from .topology import Pair, Topology
from .trace import Trace

STRICT = "strict"
LAZY = "lazy"
MODES = (STRICT, LAZY)


def special_threshold(alpha: float, ell: int) -> int:
    """Occurrence period after which a request to a pair triggers
    reconfiguration: ceil(alpha / ell)."""
    if alpha < 1:
        raise InvalidCost("alpha must be at least 1")
    if ell < 1:
        raise InvalidCost("hop distance must be at least 1")
    return math.ceil(alpha / ell)


def gamma(alpha: float, ell_max: int) -> float:
    """Loss factor of reducing to unit costs: 1 + ell_max / alpha."""
    return 1.0 + ell_max / alpha


def cache_seed(seed: int, node: int) -> int:
    """Seed for the cache at one node; distinct per (run seed, node)."""
    return seed * 1_000_003 + node


@dataclass
class CostLedger:
    """Separated accumulators for serving and reconfiguration charges.

    Reconfiguration cost is alpha per edge added or removed, so it is derived
    from the insertion/removal counters and cannot drift from them.
    """

    alpha: float
    routing_cost: float = 0.0
    insertions: int = 0
    removals: int = 0

    def __post_init__(self):
        if self.alpha < 1:
            raise InvalidCost("alpha must be at least 1")

    @property
    def reconfig_cost(self) -> float:
        return self.alpha * (self.insertions + self.removals)

    @property
    def total(self) -> float:
        return self.routing_cost + self.reconfig_cost

    def gamma(self, ell_max: int) -> float:
        return gamma(self.alpha, ell_max)


class SpecialCounters:
    """Per-pair occurrence counters modulo the pair's threshold."""

    __slots__ = ("topology", "alpha", "_period", "_count")

    def __init__(self, topology: Topology, alpha: float):
        if alpha < 1:
            raise InvalidCost("alpha must be at least 1")
        self.topology = topology
        self.alpha = alpha
        self._period = {}
        self._count = {}

    def threshold(self, pair: Pair) -> int:
        k = self._period.get(pair)
        if k is None:
            k = special_threshold(self.alpha, self.topology.dist[pair[0]][pair[1]])
            self._period[pair] = k
        return k

    def record(self, pair: Pair) -> bool:
        """Count one occurrence; True when it completes a period."""
        k = self.threshold(pair)
        c = self._count.get(pair, 0) + 1
        if c >= k:
            self._count[pair] = 0
            return True
        self._count[pair] = c
        return False


class MatchingState:
    """Configured reconfigurable links with per-node degree accounting.

    edges holds every physically configured pair. In lazy mode a subset of
    them is marked for removal: still configured (and still serving at cost
    1) but already evicted from an endpoint cache, so the next degree
    overflow prunes it. Strict mode never marks.
    """

    __slots__ = ("node_count", "b", "edges", "marked", "degree", "_marked_at", "_mark_seq")

    def __init__(self, node_count: int, b: int):
        if b < 1:
            raise InvalidParams("degree cap b must be at least 1")
        self.node_count = node_count
        self.b = b
        self.edges = set()
        self.marked = {}                # pair -> mark sequence number
        self.degree = [0] * node_count
        self._marked_at = [dict() for _ in range(node_count)]
        self._mark_seq = 0

    def add_edge(self, pair: Pair) -> None:
        self.edges.add(pair)
        self.degree[pair[0]] += 1
        self.degree[pair[1]] += 1

    def remove_edge(self, pair: Pair) -> None:
        self.edges.remove(pair)
        self.degree[pair[0]] -= 1
        self.degree[pair[1]] -= 1
        if pair in self.marked:
            self.unmark(pair)

    def mark(self, pair: Pair) -> None:
        seq = self._mark_seq
        self._mark_seq += 1
        self.marked[pair] = seq
        self._marked_at[pair[0]][pair] = seq
        self._marked_at[pair[1]][pair] = seq

    def unmark(self, pair: Pair) -> None:
        del self.marked[pair]
        del self._marked_at[pair[0]][pair]
        del self._marked_at[pair[1]][pair]

    def oldest_marked_at(self, node: int) -> Pair:
        """Longest-marked pair incident to node, ties by canonical order."""
        incident = self._marked_at[node]
        if not incident:
            raise InvariantViolation(f"degree overflow at node {node} with no marked edge")
        return min(incident, key=lambda p: (incident[p], p))

    def check_invariants(self) -> None:
        """Recompute degrees and containments from scratch; raise on mismatch."""
        recount = [0] * self.node_count
        for u, v in self.edges:
            recount[u] += 1
            recount[v] += 1
        if recount != self.degree:
            raise InvariantViolation("degree table out of sync with edge set")
        if any(d > self.b for d in recount):
            raise InvariantViolation("node exceeds degree cap")
        if not set(self.marked) <= self.edges:
            raise InvariantViolation("marked pair missing from edge set")


def serve(state: MatchingState, topology: Topology, req: Pair, ledger: CostLedger) -> float:
    """Charge the serving cost of one request: 1 over a configured link
    (marked-for-removal links are still configured), hop distance otherwise.
    Must run before any reconfiguration for the same request."""
    if req in state.edges:
        charge = 1.0
    else:
        charge = float(topology.dist[req[0]][req[1]])
    ledger.routing_cost += charge
    return charge


@dataclass
class StepEvents:
    """Reconfiguration record for one request. Ordinary occurrences carry
    special=False and nothing else."""

    special: bool
    endpoint_events: tuple[PagingEvents, PagingEvents] | None = None
    inserted: Pair | None = None
    removed: tuple[Pair, ...] = ()
    newly_marked: tuple[Pair, ...] = ()
    unmarked: Pair | None = None


def rbma_step(state: MatchingState, counters: SpecialCounters, caches,
              req: Pair, ledger: CostLedger, mode: str = STRICT) -> StepEvents:
    """Advance the matching by one already-served request.

    A special occurrence is forwarded to the caches of both endpoints; the
    matching then keeps a pair configured exactly while both endpoint caches
    hold it. Strict mode removes cache-evicted pairs immediately (alpha
    each); lazy mode only marks them, pays nothing, and prunes
    longest-marked edges once an endpoint overflows its degree cap.
    """
    if not counters.record(req):
        return StepEvents(False)
    if mode not in MODES:
        raise InvalidParams(f"unknown mode {mode!r}")
    u, v = req
    ev_u = caches[u].request(req)
    ev_v = caches[v].request(req)
    evictions = ev_u.evicted + ev_v.evicted

    inserted = None
    removed = []
    newly_marked = []
    unmarked = None
    if mode == STRICT:
        for pair in evictions:
            if pair in state.edges:
                state.remove_edge(pair)
                ledger.removals += 1
                removed.append(pair)
        if req not in state.edges:
            state.add_edge(req)
            ledger.insertions += 1
            inserted = req
    else:
        for pair in evictions:
            if pair in state.edges and pair not in state.marked:
                state.mark(pair)
                newly_marked.append(pair)
        if req in state.edges:
            if req in state.marked:
                # Back in both caches; the link never physically left.
                state.unmark(req)
                unmarked = req
        else:
            state.add_edge(req)
            ledger.insertions += 1
            inserted = req
        for node in req:
            while state.degree[node] > state.b:
                victim = state.oldest_marked_at(node)
                state.remove_edge(victim)
                ledger.removals += 1
                removed.append(victim)
    if state.degree[u] > state.b or state.degree[v] > state.b:
        raise InvariantViolation(f"degree cap exceeded at endpoint of {req}")
    return StepEvents(True, (ev_u, ev_v), inserted, tuple(removed),
                      tuple(newly_marked), unmarked)


def run_algorithm(topology: Topology, trace: Trace, b: int, alpha: float,
                  policy: str = RANDOMIZED_MARKING, mode: str = STRICT,
                  seed: int = 0, on_step=None) -> tuple[CostLedger, MatchingState]:
    """Fold serve + rbma_step over a trace.

    Deterministic given seed: the cache at node w draws from
    random.Random(cache_seed(seed, w)), so per-node decision streams do not
    depend on how requests interleave across other nodes. on_step, when
    given, is called with (request, StepEvents) after each request.
    """
    if trace.node_count > topology.node_count:
        raise NodeOutOfRange(
            f"trace over {trace.node_count} nodes exceeds topology of {topology.node_count}")
    ledger = CostLedger(alpha)
    state = MatchingState(topology.node_count, b)
    counters = SpecialCounters(topology, alpha)
    caches = [PagingCache(b, policy, cache_seed(seed, node))
              for node in range(topology.node_count)]
    if on_step is None:
        for req in trace.requests:
            serve(state, topology, req, ledger)
            rbma_step(state, counters, caches, req, ledger, mode)
    else:
        for req in trace.requests:
            serve(state, topology, req, ledger)
            on_step(req, rbma_step(state, counters, caches, req, ledger, mode))
    return ledger, state
