"""Request traces: file ingestion and seeded synthetic workloads."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from pathlib import Path

from .errors import (AllZeroMatrix, InvalidCost, InvalidExponent, InvalidParams,
                     ItemOutOfRange, MalformedLine, NodeOutOfRange)
from .topology import STAR, Pair, Topology, canonical_pair, generate


@dataclass
class Trace:
    """Ordered request sequence over node ids below node_count.

    Requests are canonical pairs (src < dst). skipped_self_loops counts
    same-node lines dropped during parsing.
    """

    requests: list[Pair]
    node_count: int
    skipped_self_loops: int = 0

    def __len__(self) -> int:
        return len(self.requests)

    def __iter__(self):
        return iter(self.requests)


def parse_trace(stream, node_count: int) -> Trace:
    """Read `src dst` or `src,dst` lines; trailing fields are ignored.

    Self-loop lines are counted and skipped rather than rejected, since
    same-rack traffic never leaves the rack.
    """
    requests = []
    skipped = 0
    for lineno, raw in enumerate(stream, 1):
        parts = raw.replace(",", " ").split()
        if not parts:
            continue
        if len(parts) < 2:
            raise MalformedLine(f"line {lineno}: expected two node ids")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise MalformedLine(f"line {lineno}: non-integer node id") from None
        if not (0 <= u < node_count and 0 <= v < node_count):
            raise NodeOutOfRange(f"line {lineno}: node outside [0, {node_count})")
        if u == v:
            skipped += 1
            continue
        requests.append(canonical_pair(u, v))
    return Trace(requests, node_count, skipped)


def load_trace(path, node_count: int) -> Trace:
    with open(path) as fh:
        return parse_trace(fh, node_count)


def save_trace(trace: Trace, path) -> None:
    """One `src dst` line per request."""
    Path(path).write_text("".join(f"{u} {v}\n" for u, v in trace.requests))


def sample_from_matrix(matrix, count: int, seed: int) -> Trace:
    """Draw requests i.i.d. from the normalized off-diagonal weights."""
    if count < 0:
        raise InvalidParams("count must be non-negative")
    n = len(matrix)
    pairs, weights = [], []
    for i in range(n):
        row = matrix[i]
        if len(row) != n:
            raise InvalidParams("matrix must be square")
        for j in range(i + 1, n):
            a, b = float(row[j]), float(matrix[j][i])
            if a < 0 or b < 0:
                raise InvalidParams("matrix weights must be non-negative")
            if a + b > 0:
                pairs.append((i, j))
                weights.append(a + b)
    if not pairs:
        raise AllZeroMatrix("matrix has no positive off-diagonal entry")
    rng = random.Random(seed)
    requests = rng.choices(pairs, weights=weights, k=count) if count else []
    return Trace(requests, n)


def zipf_trace(node_count: int, exponent: float, count: int, seed: int) -> Trace:
    """Skewed workload: a seeded permutation ranks all pairs, rank r weighs r**-exponent.

    The permutation keeps the heavy pairs from always being the low node ids.
    """
    if node_count < 2:
        raise InvalidParams("need at least two nodes")
    if not (exponent > 0 and math.isfinite(exponent)):
        raise InvalidExponent(f"exponent must be a positive real, got {exponent!r}")
    if count < 0:
        raise InvalidParams("count must be non-negative")
    pairs = [(i, j) for i in range(node_count) for j in range(i + 1, node_count)]
    rng = random.Random(seed)
    rng.shuffle(pairs)
    weights = [(r + 1) ** -exponent for r in range(len(pairs))]
    requests = rng.choices(pairs, weights=weights, k=count) if count else []
    return Trace(requests, node_count)


def adversarial_star_instance(n_items: int, b: int, a: int, alpha: float,
                              paging_sequence) -> tuple[Topology, Trace]:
    """Star instance embedding a cache-request sequence.

    Leaves 1..n_items are the item universe; every item request expands to a
    block of ceil(alpha) requests between the center and that leaf, so exactly
    one request per block triggers reconfiguration.
    """
    if n_items < 1:
        raise InvalidParams("n_items must be positive")
    if b < 1 or a < 1 or a > b:
        raise InvalidParams("need 1 <= a <= b")
    if n_items <= b:
        raise InvalidParams("need more items than the degree cap b")
    if alpha < 1:
        raise InvalidCost("alpha must be at least 1")
    block = math.ceil(alpha)
    requests = []
    for item in paging_sequence:
        if not (1 <= item <= n_items):
            raise ItemOutOfRange(f"item {item} outside [1, {n_items}]")
        requests.extend([(0, item)] * block)
    return generate(STAR, n=n_items), Trace(requests, n_items + 1)


def read_matrix(path):
    """Whitespace-separated square weight matrix, one row per line."""
    rows = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        if not raw.strip():
            continue
        try:
            rows.append([float(x) for x in raw.split()])
        except ValueError:
            raise MalformedLine(f"line {lineno}: non-numeric weight") from None
    if not rows or any(len(r) != len(rows) for r in rows):
        raise MalformedLine("matrix must be square and non-empty")
    return rows
