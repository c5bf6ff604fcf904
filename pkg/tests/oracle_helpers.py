"""Independent oracles used by the tests.

Everything here is deliberately written without touching the library's own
algorithms: distances via Floyd-Warshall, optima via plain exhaustive
search, so library results are checked against a second route.
"""

import itertools
from functools import lru_cache

from rbmatch import Trace, build_from_edges

INF = float("inf")


def floyd_warshall(node_count, edges):
    """All-pairs shortest hop counts; INF where unreachable."""
    dist = [[INF] * node_count for _ in range(node_count)]
    for i in range(node_count):
        dist[i][i] = 0
    for u, v in edges:
        dist[u][v] = 1
        dist[v][u] = 1
    for k in range(node_count):
        dk = dist[k]
        for i in range(node_count):
            dik = dist[i][k]
            if dik == INF:
                continue
            di = dist[i]
            for j in range(node_count):
                alt = dik + dk[j]
                if alt < di[j]:
                    di[j] = alt
    return dist


def exhaustive_paging_opt(sequence, capacity):
    """Minimum fault count over all eviction schedules (no bypassing)."""
    seq = tuple(sequence)

    @lru_cache(maxsize=None)
    def best(i, cached):
        if i == len(seq):
            return 0
        page = seq[i]
        if page in cached:
            return best(i + 1, cached)
        grown = cached | {page}
        if len(grown) <= capacity:
            return 1 + best(i + 1, grown)
        return 1 + min(best(i + 1, grown - {victim}) for victim in cached)

    return best(0, frozenset())


def degree_capped_subsets(node_count, cap):
    """Every set of canonical pairs with per-node degree at most cap."""
    pairs = [(i, j) for i in range(node_count) for j in range(i + 1, node_count)]
    subsets = []
    for r in range(len(pairs) + 1):
        for combo in itertools.combinations(pairs, r):
            degree = {}
            ok = True
            for u, v in combo:
                degree[u] = degree.get(u, 0) + 1
                degree[v] = degree.get(v, 0) + 1
                if degree[u] > cap or degree[v] > cap:
                    ok = False
                    break
            if ok:
                subsets.append(frozenset(combo))
    return subsets


def exhaustive_matching_opt(topology, trace, a, alpha):
    """Minimum total cost by trying every configuration sequence outright.

    No dynamic programming: plain recursion over the request list, so it only
    suits instances with a handful of requests.
    """
    configs = degree_capped_subsets(topology.node_count, a)
    requests = list(trace.requests)
    best = [INF]

    def walk(i, current, acc):
        if i == len(requests):
            best[0] = min(best[0], acc)
            return
        req = requests[i]
        for nxt in configs:
            transition = alpha * len(current ^ nxt)
            serve = 1.0 if req in nxt else float(topology.distance(*req))
            walk(i + 1, nxt, acc + transition + serve)

    if not requests:
        return 0.0
    walk(0, frozenset(), 0.0)
    return best[0]


def best_static_matching_total(demand, topology, b, alpha):
    """Exhaustively best static matching: config cost plus demand routing."""
    best = INF
    for subset in degree_capped_subsets(topology.node_count, b):
        routing = sum(count * (1.0 if pair in subset else float(topology.distance(*pair)))
                      for pair, count in demand.counts.items())
        best = min(best, alpha * len(subset) + routing)
    return best


def random_connected_topology(rng, node_count, extra_edges=2):
    """Random spanning tree plus a few extra links."""
    nodes = list(range(node_count))
    rng.shuffle(nodes)
    edges = set()
    for i in range(1, node_count):
        edges.add(tuple(sorted((nodes[i], nodes[rng.randrange(i)]))))
    all_pairs = [(i, j) for i in range(node_count) for j in range(i + 1, node_count)]
    rng.shuffle(all_pairs)
    for pair in all_pairs:
        if len(edges) >= node_count - 1 + extra_edges:
            break
        edges.add(pair)
    return build_from_edges(node_count, edges)


def random_trace(rng, node_count, length):
    pairs = [(i, j) for i in range(node_count) for j in range(i + 1, node_count)]
    return Trace([pairs[rng.randrange(len(pairs))] for _ in range(length)], node_count)
