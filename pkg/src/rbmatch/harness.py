"""Experiment runner: seeded repetitions, aggregation, delimited output, and
the small-instance ratio oracle.

All randomness enters through explicit seed lists; wall time covers only the
request-processing work, never file I/O or topology construction.
"""

from __future__ import annotations

import csv
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import __version__
from .baselines import (WeightedDemand, brute_force_opt, oblivious_cost,
                        offline_greedy_bmatching, run_dbma)
from .engine import LAZY, MODES, STRICT, gamma, run_algorithm
from .errors import ConfigError
from .paging import PAGING_POLICIES, RANDOMIZED_MARKING
from .topology import (FAT_TREE, LEAF_SPINE, STAR, Topology, generate,
                       read_edge_list)
from .trace import Trace, load_trace, read_matrix, sample_from_matrix, zipf_trace

ALGORITHMS = ("rbma", "dbma", "so_bma", "oblivious")
DEFAULT_REPETITIONS = 5

ALGORITHM_NOTES = {
    "dbma": "dbma is a stand-in baseline (credit-threshold reconstruction)",
    "so_bma": "so_bma uses a greedy 1/2-approximation, not exact max-weight matching",
}

CSV_HEADER = ["algorithm", "b", "a", "alpha", "mode", "seed", "routing_cost",
              "reconfig_cost", "total_cost", "insertions", "removals", "wall_time_s"]


@dataclass
class RunConfig:
    """One experiment: a topology and trace source, an algorithm, and seeds.

    topology / trace accept built objects, file paths, or inline generator
    specs (star:N, leaf_spine:L,S, fat_tree:K; zipf:EXP,COUNT[,SEED],
    matrix:PATH,COUNT[,SEED]).
    """

    topology: Topology | str
    trace: Trace | str
    algorithm: str = "rbma"
    b: int = 1
    a: int | None = None
    alpha: float = 1.0
    mode: str = LAZY
    policy: str = RANDOMIZED_MARKING
    seeds: list[int] | None = None
    repetitions: int | None = None

    def validate(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}")
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.policy not in PAGING_POLICIES:
            raise ConfigError(f"unknown policy {self.policy!r}")
        if self.b < 1:
            raise ConfigError("b must be at least 1")
        if self.alpha < 1:
            raise ConfigError("alpha must be at least 1")
        a = self.effective_a()
        if not (1 <= a <= self.b):
            raise ConfigError(f"need 1 <= a <= b, got a={a}, b={self.b}")
        if (self.seeds is not None and self.repetitions is not None
                and len(self.seeds) != self.repetitions):
            raise ConfigError("repetitions must equal the number of seeds")

    def effective_a(self) -> int:
        return self.b if self.a is None else self.a

    def resolved_seeds(self) -> list[int]:
        if self.seeds is not None:
            return list(self.seeds)
        return list(range(self.repetitions if self.repetitions is not None
                          else DEFAULT_REPETITIONS))


@dataclass
class RunRow:
    seed: int | str
    routing_cost: float
    reconfig_cost: float
    total_cost: float
    insertions: float
    removals: float
    wall_time_s: float


@dataclass
class RunResult:
    algorithm: str
    b: int
    a: int
    alpha: float
    mode: str
    rows: list[RunRow]
    mean: RunRow
    metadata: dict = field(default_factory=dict)


def resolve_topology(source) -> Topology:
    if isinstance(source, Topology):
        return source
    spec = str(source)
    kind, sep, args = spec.partition(":")
    if sep and kind in (STAR, LEAF_SPINE, FAT_TREE):
        try:
            if kind == STAR:
                return generate(STAR, n=int(args))
            if kind == LEAF_SPINE:
                leaves, spines = (int(x) for x in args.split(","))
                return generate(LEAF_SPINE, leaves=leaves, spines=spines)
            return generate(FAT_TREE, k=int(args))
        except ValueError:
            raise ConfigError(f"bad topology spec {spec!r}") from None
    if Path(spec).is_file():
        return read_edge_list(spec)
    raise ConfigError(f"topology source not found: {spec!r}")


def resolve_trace(source, topology: Topology) -> Trace:
    """Inline zipf specs draw over the rack nodes of the topology."""
    if isinstance(source, Trace):
        return source
    spec = str(source)
    kind, sep, args = spec.partition(":")
    if sep and kind in ("zipf", "matrix"):
        parts = args.split(",")
        try:
            if kind == "zipf":
                exponent, count = float(parts[0]), int(parts[1])
                seed = int(parts[2]) if len(parts) > 2 else 0
                return zipf_trace(topology.rack_count, exponent, count, seed)
            path, count = parts[0], int(parts[1])
            seed = int(parts[2]) if len(parts) > 2 else 0
            return sample_from_matrix(read_matrix(path), count, seed)
        except (IndexError, ValueError):
            raise ConfigError(f"bad trace spec {spec!r}") from None
    if Path(spec).is_file():
        return load_trace(spec, topology.node_count)
    raise ConfigError(f"trace source not found: {spec!r}")


def _execute(algorithm: str, topology: Topology, trace: Trace, b: int,
             alpha: float, mode: str, policy: str, seed: int) -> RunRow:
    start = time.perf_counter()
    if algorithm == "rbma":
        ledger, _ = run_algorithm(topology, trace, b, alpha, policy, mode, seed)
        routing, reconfig = ledger.routing_cost, ledger.reconfig_cost
        insertions, removals = ledger.insertions, ledger.removals
    elif algorithm == "dbma":
        ledger, _ = run_dbma(topology, trace, b, alpha)
        routing, reconfig = ledger.routing_cost, ledger.reconfig_cost
        insertions, removals = ledger.insertions, ledger.removals
    elif algorithm == "so_bma":
        demand = WeightedDemand.from_trace(trace)
        result = offline_greedy_bmatching(demand, topology, b, alpha)
        routing, reconfig = result.routing_cost, result.config_cost
        insertions, removals = len(result.matching), 0
    else:
        routing, reconfig = oblivious_cost(topology, trace), 0.0
        insertions, removals = 0, 0
    elapsed = time.perf_counter() - start
    return RunRow(seed, routing, reconfig, routing + reconfig,
                  insertions, removals, elapsed)


def _mean_row(rows: list[RunRow]) -> RunRow:
    n = len(rows)
    return RunRow(
        "mean",
        sum(r.routing_cost for r in rows) / n,
        sum(r.reconfig_cost for r in rows) / n,
        sum(r.total_cost for r in rows) / n,
        sum(r.insertions for r in rows) / n,
        sum(r.removals for r in rows) / n,
        sum(r.wall_time_s for r in rows) / n,
    )


def run(config: RunConfig, parallel: bool = False) -> RunResult:
    """Execute the configured algorithm once per seed and aggregate.

    Cost fields are deterministic functions of the config and seeds; only
    wall times vary between invocations. Repetitions run sequentially unless
    parallel is set.
    """
    config.validate()
    topology = resolve_topology(config.topology)
    trace = resolve_trace(config.trace, topology)
    seeds = config.resolved_seeds()
    args = (config.algorithm, topology, trace, config.b, config.alpha,
            config.mode, config.policy)
    if parallel and len(seeds) > 1:
        with ProcessPoolExecutor(max_workers=min(len(seeds), os.cpu_count() or 1)) as pool:
            rows = list(pool.map(_execute, *zip(*[args + (s,) for s in seeds])))
    else:
        rows = [_execute(*args, seed) for seed in seeds]
    metadata = {"version": __version__, "seeds": seeds}
    if config.algorithm in ALGORITHM_NOTES:
        metadata["note"] = ALGORITHM_NOTES[config.algorithm]
    return RunResult(config.algorithm, config.b, config.effective_a(),
                     config.alpha, config.mode, rows, _mean_row(rows), metadata)


def sweep(config: RunConfig, b_values, parallel: bool = False) -> dict[int, RunResult]:
    """One run per degree cap; results keyed by b."""
    results = {}
    for b in b_values:
        if config.a is not None and b < config.a:
            raise ConfigError(f"b={b} below a={config.a}")
        results[b] = run(replace(config, b=b), parallel=parallel)
    return results


def write_results_csv(results, path) -> None:
    """One row per repetition plus one mean row (seed field `mean`) per run."""
    if isinstance(results, RunResult):
        results = [results]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for result in results:
            for row in list(result.rows) + [result.mean]:
                writer.writerow([result.algorithm, result.b, result.a,
                                 result.alpha, result.mode, row.seed,
                                 row.routing_cost, row.reconfig_cost,
                                 row.total_cost, row.insertions, row.removals,
                                 row.wall_time_s])


def _num(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def read_results_csv(path) -> list[dict]:
    """Parse a results file back into typed row dicts."""
    out = []
    with open(path, newline="") as fh:
        for record in csv.DictReader(fh):
            row = {"algorithm": record["algorithm"], "mode": record["mode"]}
            row["b"] = int(record["b"])
            row["a"] = int(record["a"])
            row["alpha"] = _num(record["alpha"])
            row["seed"] = record["seed"] if record["seed"] == "mean" else int(record["seed"])
            for key in ("routing_cost", "reconfig_cost", "total_cost",
                        "insertions", "removals", "wall_time_s"):
                row[key] = _num(record[key])
            out.append(row)
    return out


@dataclass
class OracleReport:
    """Empirical competitive-ratio report on a tiny instance."""

    trials: int
    mean_total: float
    opt_cost: float
    beta_allowance: float
    ratio: float
    low_confidence: bool


def oracle_check(topology: Topology, trace: Trace, b: int, a: int, alpha: float,
                 trials: int, mode: str = STRICT,
                 policy: str = RANDOMIZED_MARKING) -> OracleReport:
    """Mean online total over `trials` seeds against the exact offline
    optimum, with the additive allowance gamma * alpha * (#node pairs)
    subtracted before taking the ratio."""
    if trials < 1:
        raise ConfigError("trials must be at least 1")
    if not (1 <= a <= b):
        raise ConfigError(f"need 1 <= a <= b, got a={a}, b={b}")
    totals = [run_algorithm(topology, trace, b, alpha, policy, mode, seed)[0].total
              for seed in range(trials)]
    mean_total = sum(totals) / trials
    opt = brute_force_opt(topology, trace, a, alpha)
    n = topology.node_count
    allowance = gamma(alpha, topology.ell_max) * alpha * (n * (n - 1) // 2)
    if opt > 0:
        ratio = (mean_total - allowance) / opt
    else:
        ratio = 0.0
    return OracleReport(trials, mean_total, opt, allowance, ratio, trials < 2)
