"""Fixed-network models and all-pairs hop distances.

Node ids are dense integers starting at 0. Distances are hop counts over the
static links, precomputed once per topology so that request serving is a
plain table lookup.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from pathlib import Path

from .errors import DisconnectedGraph, InvalidParams, MalformedLine, NodeOutOfRange, SelfLoop

Pair = tuple[int, int]

STAR = "star"
LEAF_SPINE = "leaf_spine"
FAT_TREE = "fat_tree"
TOPOLOGY_KINDS = (STAR, LEAF_SPINE, FAT_TREE)


def canonical_pair(u: int, v: int) -> Pair:
    """Order a node pair so the smaller id comes first."""
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class Topology:
    """Static network with a dense matrix of pairwise hop distances.

    rack_count says how many of the leading node ids are rack endpoints, the
    natural universe for traffic. Generators that model internal switches
    explicitly keep the switches as trailing ids so rack-to-rack distances
    stay exact. Immutable; safe to share across concurrent runs.
    """

    node_count: int
    edges: frozenset[Pair]
    dist: tuple[tuple[int, ...], ...]
    ell_max: int
    rack_count: int

    def distance(self, u: int, v: int) -> int:
        return self.dist[u][v]


def _canonical_edges(node_count, edges):
    canon = set()
    for u, v in edges:
        if u == v:
            raise SelfLoop(f"self-loop at node {u}")
        if not (0 <= u < node_count and 0 <= v < node_count):
            raise NodeOutOfRange(f"edge ({u}, {v}) outside [0, {node_count})")
        canon.add(canonical_pair(u, v))
    return canon


def _all_pairs_hops(node_count, canon):
    adj = [[] for _ in range(node_count)]
    for u, v in canon:
        adj[u].append(v)
        adj[v].append(u)
    dist = []
    for s in range(node_count):
        row = [-1] * node_count
        row[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            nxt = row[u] + 1
            for w in adj[u]:
                if row[w] < 0:
                    row[w] = nxt
                    queue.append(w)
        if min(row) < 0:
            raise DisconnectedGraph(f"node {row.index(-1)} unreachable from node {s}")
        dist.append(tuple(row))
    return tuple(dist)


def build_from_edges(node_count: int, edges, rack_count: int | None = None) -> Topology:
    """Build a topology from an explicit link list; hop distances via BFS."""
    if node_count < 1:
        raise InvalidParams("node_count must be positive")
    canon = _canonical_edges(node_count, edges)
    dist = _all_pairs_hops(node_count, canon)
    ell_max = max(max(row) for row in dist)
    if rack_count is None:
        rack_count = node_count
    return Topology(node_count, frozenset(canon), dist, ell_max, rack_count)


def generate(kind: str, *, n: int | None = None, leaves: int | None = None,
             spines: int | None = None, k: int | None = None) -> Topology:
    """Generate a named topology: star(n), leaf_spine(leaves, spines), fat_tree(k)."""
    if kind == STAR:
        if n is None or n < 1:
            raise InvalidParams("star needs n >= 1 leaves")
        return build_from_edges(n + 1, [(0, i) for i in range(1, n + 1)])
    if kind == LEAF_SPINE:
        if leaves is None or spines is None or leaves < 1 or spines < 1:
            raise InvalidParams("leaf_spine needs leaves >= 1 and spines >= 1")
        edges = [(lf, leaves + sp) for lf in range(leaves) for sp in range(spines)]
        return build_from_edges(leaves + spines, edges, rack_count=leaves)
    if kind == FAT_TREE:
        if k is None or k < 2 or k % 2:
            raise InvalidParams("fat_tree needs an even k >= 2")
        return _fat_tree(k)
    raise InvalidParams(f"unknown topology kind {kind!r}")


def _fat_tree(k: int) -> Topology:
    # Standard 3-tier k-ary tree; racks first, then edge/agg/core switches.
    half = k // 2
    racks = k * half * half
    edge0 = racks
    agg0 = edge0 + k * half
    core0 = agg0 + k * half
    total = core0 + half * half
    edges = []
    for pod in range(k):
        for e in range(half):
            esw = edge0 + pod * half + e
            for h in range(half):
                edges.append((pod * half * half + e * half + h, esw))
            for a in range(half):
                edges.append((esw, agg0 + pod * half + a))
        for a in range(half):
            asw = agg0 + pod * half + a
            for c in range(half):
                edges.append((asw, core0 + a * half + c))
    return build_from_edges(total, edges, rack_count=racks)


def write_edge_list(topology: Topology, path) -> None:
    """Write the `n m` header plus one `u v` line per link."""
    lines = [f"{topology.node_count} {len(topology.edges)}"]
    lines.extend(f"{u} {v}" for u, v in sorted(topology.edges))
    Path(path).write_text("\n".join(lines) + "\n")


def read_edge_list(path) -> Topology:
    """Parse the edge-list format written by write_edge_list."""
    rows = [(i, line.split()) for i, line in
            enumerate(Path(path).read_text().splitlines(), 1) if line.strip()]
    if not rows:
        raise MalformedLine("empty edge-list file")
    (headline, head), body = rows[0], rows[1:]
    try:
        n, m = int(head[0]), int(head[1])
    except (IndexError, ValueError):
        raise MalformedLine(f"line {headline}: expected 'n m' header") from None
    if len(body) != m:
        raise MalformedLine(f"expected {m} edge lines, found {len(body)}")
    edges = []
    for lineno, parts in body:
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except (IndexError, ValueError):
            raise MalformedLine(f"line {lineno}: expected 'u v'") from None
    return build_from_edges(n, edges)
