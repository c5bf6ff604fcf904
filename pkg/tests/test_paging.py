import random

import pytest

from oracle_helpers import exhaustive_paging_opt
from rbmatch import PagingCache, belady_min
from rbmatch.errors import InvalidParams
from rbmatch.paging import DETERMINISTIC_MARKING, RANDOMIZED_MARKING


def drive(cache, sequence):
    return [cache.request(p) for p in sequence]


def test_capacity_one_faults_and_evicts():
    cache = PagingCache(1, RANDOMIZED_MARKING, seed=0)
    events = drive(cache, ["p", "q", "p"])
    assert [e.fault for e in events] == [True, True, True]
    assert events[2].evicted == ["q"]
    assert events[2].fetched == "p"


def test_full_cache_new_phase_evicts_uniformly():
    # p,q then r: the phase resets and p or q is evicted with probability 1/2
    trials = 10_000
    p_evicted = 0
    for seed in range(trials):
        cache = PagingCache(2, RANDOMIZED_MARKING, seed=seed)
        events = drive(cache, ["p", "q", "r"])
        assert events[2].fault and len(events[2].evicted) == 1
        if events[2].evicted == ["p"]:
            p_evicted += 1
    assert abs(p_evicted / trials - 0.5) < 0.02


def test_working_set_fits_no_extra_faults():
    cache = PagingCache(2, RANDOMIZED_MARKING, seed=1)
    events = drive(cache, ["p", "q"] * 50)
    assert sum(e.fault for e in events) == 2


def test_hit_returns_no_fault_event():
    cache = PagingCache(2, DETERMINISTIC_MARKING)
    cache.request("p")
    ev = cache.request("p")
    assert not ev.fault and ev.evicted == [] and ev.fetched is None


def test_eviction_only_on_full_cache():
    cache = PagingCache(3, RANDOMIZED_MARKING, seed=0)
    events = drive(cache, ["a", "b", "c"])
    assert all(e.fault for e in events)
    assert all(e.evicted == [] for e in events)


def test_deterministic_marking_evicts_smallest_unmarked():
    cache = PagingCache(2, DETERMINISTIC_MARKING)
    drive(cache, [(0, 5), (0, 7)])
    ev = cache.request((0, 9))
    assert ev.evicted == [(0, 5)]


def test_marking_structural_invariants():
    rng = random.Random(4)
    for trial in range(50):
        capacity = rng.randint(1, 4)
        cache = PagingCache(capacity, RANDOMIZED_MARKING, seed=trial)
        distinct_in_phase = set()
        for _ in range(200):
            page = rng.randrange(capacity + 2)
            marks_before = len(cache.marks)
            full_before = len(cache.entries) >= capacity
            ev = cache.request(page)
            # phase reset is visible as the mark set shrinking on a full-cache fault
            if ev.fault and full_before and len(cache.marks) <= marks_before:
                distinct_in_phase = set()
            distinct_in_phase.add(page)
            assert len(distinct_in_phase) <= capacity
            assert cache.marks <= cache.entries
            assert len(cache.entries) <= capacity
            if ev.evicted:
                assert ev.fault and full_before
                assert ev.evicted[0] not in cache.entries


def test_event_streams_deterministic():
    seq = [random.Random(8).randrange(5) for _ in range(300)]
    runs = []
    for _ in range(2):
        cache = PagingCache(3, RANDOMIZED_MARKING, seed=123)
        runs.append([(e.fault, tuple(e.evicted)) for e in drive(cache, seq)])
    assert runs[0] == runs[1]


def test_belady_examples():
    assert belady_min(["p", "q", "p"], 1) == 3
    assert belady_min(["p", "q", "r", "p", "q"], 2) == 4
    # compulsory misses only when everything fits
    assert belady_min(["a", "b", "a", "b", "c"], 3) == 3
    assert belady_min([], 2) == 0


def test_belady_matches_exhaustive_search():
    rng = random.Random(99)
    for _ in range(200):
        n_pages = rng.randint(1, 4)
        capacity = rng.randint(1, 3)
        seq = [rng.randrange(n_pages) for _ in range(rng.randint(1, 12))]
        assert belady_min(seq, capacity) == exhaustive_paging_opt(seq, capacity)


def test_belady_capacity_validation():
    with pytest.raises(InvalidParams):
        belady_min(["p"], 0)
    with pytest.raises(InvalidParams):
        PagingCache(0)
    with pytest.raises(InvalidParams):
        PagingCache(2, policy="lru")


def test_randomized_marking_harmonic_bound():
    # b+1 distinct pages against capacity b: mean faults within the classic
    # 2*H_b*OPT + b envelope, 10% slack
    rng = random.Random(5)
    b = 3
    h_b = sum(1 / i for i in range(1, b + 1))
    for case in range(5):
        seq = [rng.randrange(b + 1) for _ in range(100)]
        opt = belady_min(seq, b)
        trials = 300
        mean = sum(
            sum(ev.fault for ev in drive(PagingCache(b, RANDOMIZED_MARKING, seed=s), seq))
            for s in range(trials)
        ) / trials
        assert mean <= 1.1 * (2 * h_b * opt + b)
