"""Per-node cache engines: marking replacement and the offline optimum.

Pages are opaque ids; in this package they are canonical node pairs, but any
orderable hashable works.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import InvalidParams

RANDOMIZED_MARKING = "randomized_marking"
DETERMINISTIC_MARKING = "deterministic_marking"
PAGING_POLICIES = (RANDOMIZED_MARKING, DETERMINISTIC_MARKING)


@dataclass
class PagingEvents:
    """What one cache request did: fetched is set exactly on a fault, and the
    evicted list is non-empty only when a fault hit a full cache."""

    fault: bool
    evicted: list
    fetched: object | None


class PagingCache:
    """Bounded cache driven by the marking rule.

    Requested entries are always fetched and marked. On a miss with a full
    cache, the whole cache is first unmarked if every entry is marked (this
    starts a new phase), then one unmarked entry is evicted: uniformly at
    random under the randomized policy, the smallest entry under the
    deterministic one. Single-owner mutable state; one instance per node.
    """

    __slots__ = ("capacity", "policy", "entries", "marks", "rng", "fault_count")

    def __init__(self, capacity: int, policy: str = RANDOMIZED_MARKING, seed: int = 0):
        if capacity < 1:
            raise InvalidParams("capacity must be at least 1")
        if policy not in PAGING_POLICIES:
            raise InvalidParams(f"unknown paging policy {policy!r}")
        self.capacity = capacity
        self.policy = policy
        self.entries = set()
        self.marks = set()
        self.rng = random.Random(seed)
        self.fault_count = 0

    def request(self, page) -> PagingEvents:
        entries = self.entries
        marks = self.marks
        if page in entries:
            marks.add(page)
            return PagingEvents(False, [], None)
        self.fault_count += 1
        evicted = []
        if len(entries) >= self.capacity:
            if len(marks) == len(entries):
                marks.clear()
            candidates = sorted(entries - marks)
            if self.policy == RANDOMIZED_MARKING and len(candidates) > 1:
                victim = candidates[self.rng.randrange(len(candidates))]
            else:
                victim = candidates[0]
            entries.discard(victim)
            marks.discard(victim)
            evicted.append(victim)
        entries.add(page)
        marks.add(page)
        return PagingEvents(True, evicted, page)


def belady_min(sequence, capacity: int) -> int:
    """Fault count of farthest-in-future eviction, the offline optimum
    for caching without bypassing. Deterministic; eviction ties among
    never-again pages are broken by page order."""
    if capacity < 1:
        raise InvalidParams("capacity must be at least 1")
    seq = list(sequence)
    next_use = [math.inf] * len(seq)
    last_seen = {}
    for i in range(len(seq) - 1, -1, -1):
        page = seq[i]
        if page in last_seen:
            next_use[i] = last_seen[page]
        last_seen[page] = i
    cached = {}
    faults = 0
    for i, page in enumerate(seq):
        if page in cached:
            cached[page] = next_use[i]
            continue
        faults += 1
        if len(cached) >= capacity:
            victim = max(cached, key=lambda p: (cached[p], p))
            del cached[victim]
        cached[page] = next_use[i]
    return faults
