import random

import pytest

from oracle_helpers import random_connected_topology, random_trace
from rbmatch import (CostLedger, MatchingState, PagingCache, SpecialCounters,
                     Trace, build_from_edges, cache_seed, gamma, generate,
                     rbma_step, run_algorithm, serve, special_threshold)
from rbmatch.engine import LAZY, STRICT
from rbmatch.errors import InvalidCost, InvariantViolation, NodeOutOfRange
from rbmatch.paging import DETERMINISTIC_MARKING, RANDOMIZED_MARKING


def complete_topology(n):
    return build_from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def fresh(topology, b, alpha, seed=0, policy=RANDOMIZED_MARKING):
    ledger = CostLedger(alpha)
    state = MatchingState(topology.node_count, b)
    counters = SpecialCounters(topology, alpha)
    caches = [PagingCache(b, policy, cache_seed(seed, w))
              for w in range(topology.node_count)]
    return ledger, state, counters, caches


def cache_intersection(caches, node_count):
    pairs = set()
    for w in range(node_count):
        for pair in caches[w].entries:
            other = pair[0] if pair[1] == w else pair[1]
            if pair in caches[other].entries:
                pairs.add(pair)
    return pairs


def test_special_threshold_values():
    assert special_threshold(5, 2) == 3
    assert special_threshold(1, 1) == 1
    assert special_threshold(4, 4) == 1
    assert special_threshold(10.0, 3) == 4


def test_special_threshold_validation():
    with pytest.raises(InvalidCost):
        special_threshold(0.5, 1)
    with pytest.raises(InvalidCost):
        special_threshold(2, 0)


def test_gamma():
    assert gamma(2.0, 4) == 3.0
    ledger = CostLedger(2.0)
    assert ledger.gamma(4) == 3.0


def test_serve_charges():
    topo = build_from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    ledger = CostLedger(1.0)
    state = MatchingState(5, 2)
    assert serve(state, topo, (0, 4), ledger) == 4.0
    state.add_edge((0, 4))
    assert serve(state, topo, (0, 4), ledger) == 1.0
    assert ledger.routing_cost == 5.0


def test_serve_marked_edge_still_costs_one():
    topo = build_from_edges(3, [(0, 1), (1, 2)])
    ledger = CostLedger(1.0)
    state = MatchingState(3, 2)
    state.add_edge((0, 2))
    state.mark((0, 2))
    assert serve(state, topo, (0, 2), ledger) == 1.0


def test_uniform_case_every_request_special():
    topo = complete_topology(4)
    ledger, state, counters, caches = fresh(topo, b=2, alpha=1.0)
    events = rbma_step(state, counters, caches, (0, 3), ledger, STRICT)
    assert events.special
    assert events.endpoint_events[0].fault and events.endpoint_events[1].fault
    assert events.inserted == (0, 3)
    assert ledger.insertions == 1
    assert (0, 3) in state.edges


def test_threshold_three_fires_on_third():
    topo = build_from_edges(2, [(0, 1)])  # distance 1, alpha 3 -> period 3
    ledger, state, counters, caches = fresh(topo, b=1, alpha=3.0)
    for expect_special in (False, False, True):
        events = rbma_step(state, counters, caches, (0, 1), ledger, STRICT)
        assert events.special == expect_special
    assert ledger.insertions == 1
    # counter wrapped: three more requests to fire again
    assert not rbma_step(state, counters, caches, (0, 1), ledger, STRICT).special


def test_strict_b1_eviction_hand_simulated():
    topo = complete_topology(3)
    ledger, state, counters, caches = fresh(topo, b=1, alpha=1.0)
    rbma_step(state, counters, caches, (0, 1), ledger, STRICT)
    assert state.degree[0] == 1
    events = rbma_step(state, counters, caches, (0, 2), ledger, STRICT)
    # the cache at node 0 holds one pair, all marked: phase resets, (0,1) evicted
    assert events.removed == ((0, 1),)
    assert events.inserted == (0, 2)
    assert state.edges == {(0, 2)}
    assert state.degree[0] == 1
    assert ledger.insertions == 2 and ledger.removals == 1


def test_ordinary_requests_change_nothing():
    topo = build_from_edges(2, [(0, 1)])
    ledger, state, counters, caches = fresh(topo, b=1, alpha=5.0)
    for _ in range(4):
        events = rbma_step(state, counters, caches, (0, 1), ledger, STRICT)
        assert not events.special
    assert not state.edges and ledger.insertions == 0
    assert caches[0].fault_count == 0


def test_run_algorithm_empty_trace():
    topo = complete_topology(3)
    ledger, state = run_algorithm(topo, Trace([], 3), b=1, alpha=1.0)
    assert ledger.routing_cost == 0 and ledger.reconfig_cost == 0
    assert ledger.insertions == ledger.removals == 0
    assert not state.edges


def test_run_algorithm_closed_form_repeated_pair():
    # pair at distance 2, alpha=2: period 1, so the first request pays 2,
    # inserts for 2, and every later request pays 1: 2 + 2 + (2m-1)
    topo = build_from_edges(3, [(0, 1), (1, 2)])
    for m in (1, 3, 5):
        trace = Trace([(0, 2)] * (2 * m), 3)
        for mode in (STRICT, LAZY):
            ledger, _ = run_algorithm(topo, trace, b=1, alpha=2.0, mode=mode, seed=0)
            assert ledger.total == 4 + (2 * m - 1)


def test_trace_larger_than_topology_rejected():
    topo = complete_topology(3)
    with pytest.raises(NodeOutOfRange):
        run_algorithm(topo, Trace([(0, 5)], 6), b=1, alpha=1.0)


def test_deterministic_policy_ignores_seed():
    topo = generate("leaf_spine", leaves=6, spines=2)
    trace = random_trace(random.Random(0), 6, 400)
    results = [run_algorithm(topo, trace, 2, 3.0, DETERMINISTIC_MARKING, STRICT, seed)[0]
               for seed in (1, 99)]
    assert results[0].total == results[1].total
    assert results[0].insertions == results[1].insertions


def test_same_seed_same_ledger():
    topo = generate("star", n=8)
    trace = random_trace(random.Random(3), 9, 600)
    a = run_algorithm(topo, trace, 2, 2.0, RANDOMIZED_MARKING, LAZY, seed=7)[0]
    b = run_algorithm(topo, trace, 2, 2.0, RANDOMIZED_MARKING, LAZY, seed=7)[0]
    assert (a.routing_cost, a.insertions, a.removals) == (b.routing_cost, b.insertions, b.removals)


def test_strict_consistency_and_parity_random_battery():
    rng = random.Random(12)
    for trial in range(15):
        n = rng.randint(3, 6)
        topo = random_connected_topology(rng, n)
        trace = random_trace(rng, n, 300)
        b = rng.randint(1, 3)
        alpha = rng.choice([1.0, 2.0, 4.0])
        ledger, state, counters, caches = fresh(topo, b, alpha, seed=trial)
        for req in trace.requests:
            serve(state, topo, req, ledger)
            rbma_step(state, counters, caches, req, ledger, STRICT)
            assert state.edges == cache_intersection(caches, n)
            assert max(state.degree) <= b
        state.check_invariants()
        assert ledger.insertions - ledger.removals == len(state.edges)


def test_lazy_invariants_random_battery():
    rng = random.Random(21)
    for trial in range(15):
        n = rng.randint(3, 6)
        topo = random_connected_topology(rng, n)
        trace = random_trace(rng, n, 300)
        b = rng.randint(1, 3)
        ledger, state, counters, caches = fresh(topo, b, 2.0, seed=trial)
        for req in trace.requests:
            serve(state, topo, req, ledger)
            rbma_step(state, counters, caches, req, ledger, LAZY)
            inter = cache_intersection(caches, n)
            active = state.edges - set(state.marked)
            assert active == inter
            assert state.edges >= inter
            assert max(state.degree) <= b
        state.check_invariants()
        # physical conservation; edges includes marked-for-removal pairs
        assert ledger.insertions - ledger.removals == len(state.edges)


def test_lazy_routing_never_worse_than_strict():
    rng = random.Random(33)
    for trial in range(10):
        n = rng.randint(3, 6)
        topo = random_connected_topology(rng, n)
        trace = random_trace(rng, n, 500)
        b = rng.randint(1, 3)
        alpha = rng.choice([1.0, 3.0])
        strict, _ = run_algorithm(topo, trace, b, alpha, mode=STRICT, seed=trial)
        lazy, _ = run_algorithm(topo, trace, b, alpha, mode=LAZY, seed=trial)
        assert lazy.routing_cost <= strict.routing_cost


def test_uniform_transparency_matches_direct_paging():
    # complete fixed graph with alpha=1: the embedded caches must behave
    # exactly like standalone caches fed the per-node projected streams
    n, b, seed = 6, 2, 5
    topo = complete_topology(n)
    trace = random_trace(random.Random(17), n, 400)
    observed = {w: [] for w in range(n)}

    def on_step(req, events):
        assert events.special
        observed[req[0]].append(events.endpoint_events[0].fault)
        observed[req[1]].append(events.endpoint_events[1].fault)

    run_algorithm(topo, trace, b, 1.0, RANDOMIZED_MARKING, STRICT, seed, on_step)
    for w in range(n):
        cache = PagingCache(b, RANDOMIZED_MARKING, cache_seed(seed, w))
        direct = [cache.request(req).fault for req in trace.requests if w in req]
        assert direct == observed[w]


def test_invariant_violation_on_corrupted_state():
    state = MatchingState(3, 1)
    state.add_edge((0, 1))
    state.degree[2] = 5
    with pytest.raises(InvariantViolation):
        state.check_invariants()


def test_ledger_reconfig_cost_derived():
    ledger = CostLedger(2.5)
    ledger.insertions += 3
    ledger.removals += 1
    assert ledger.reconfig_cost == 10.0
    ledger.routing_cost += 4.0
    assert ledger.total == 14.0
    with pytest.raises(InvalidCost):
        CostLedger(0.0)
