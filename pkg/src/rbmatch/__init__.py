"""Trace-driven simulator for online degree-bounded matching of
reconfigurable datacenter links."""

__version__ = "0.1.0"

from . import errors
from .baselines import (DbmaState, GreedyMatchingResult, WeightedDemand,
                        brute_force_opt, dbma_serve, dbma_step, oblivious_cost,
                        offline_greedy_bmatching, run_dbma)
from .engine import (LAZY, STRICT, CostLedger, MatchingState, SpecialCounters,
                     StepEvents, cache_seed, gamma, rbma_step, run_algorithm,
                     serve, special_threshold)
from .harness import (OracleReport, RunConfig, RunResult, RunRow, oracle_check,
                      read_results_csv, resolve_topology, resolve_trace, run,
                      sweep, write_results_csv)
from .paging import (DETERMINISTIC_MARKING, RANDOMIZED_MARKING, PagingCache,
                     PagingEvents, belady_min)
from .report import plot_sweep
from .topology import (FAT_TREE, LEAF_SPINE, STAR, Topology, build_from_edges,
                       canonical_pair, generate, read_edge_list, write_edge_list)
from .trace import (Trace, adversarial_star_instance, load_trace, parse_trace,
                    read_matrix, sample_from_matrix, save_trace, zipf_trace)
