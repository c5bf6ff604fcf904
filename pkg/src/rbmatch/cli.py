"""Command-line interface.

Subcommands: gen-topology, gen-trace, simulate, sweep, oracle, report.
Errors exit nonzero with a single `error: Type: message` line on stderr.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from .errors import ConfigError, RbmatchError
from .harness import (RunConfig, oracle_check, read_results_csv, resolve_topology,
                      resolve_trace, run, sweep, write_results_csv,
                      ALGORITHM_NOTES)
from .report import plot_sweep
from .topology import FAT_TREE, LEAF_SPINE, STAR, generate, write_edge_list
from .trace import (adversarial_star_instance, read_matrix, sample_from_matrix,
                    save_trace, zipf_trace)


def _parse_seeds(text):
    if text is None:
        return None
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise ConfigError(f"bad seed list {text!r}") from None


def _add_run_flags(sub):
    sub.add_argument("--topology", required=True,
                     help="edge-list file or spec (star:N, leaf_spine:L,S, fat_tree:K)")
    sub.add_argument("--trace", required=True,
                     help="trace file or spec (zipf:EXP,COUNT[,SEED], matrix:PATH,COUNT[,SEED])")
    sub.add_argument("--algo", default="rbma",
                     choices=["rbma", "dbma", "so_bma", "oblivious"])
    sub.add_argument("--b", type=int, default=1)
    sub.add_argument("--a", type=int, default=None)
    sub.add_argument("--alpha", type=float, default=1.0)
    sub.add_argument("--mode", default="lazy", choices=["strict", "lazy"])
    sub.add_argument("--policy", default="randomized_marking",
                     choices=["randomized_marking", "deterministic_marking"])
    sub.add_argument("--seeds", default=None, help="comma-separated seed list")
    sub.add_argument("--reps", type=int, default=None)
    sub.add_argument("--parallel", default="off", choices=["off", "on"])
    sub.add_argument("--out", default=None, help="results CSV path")


def _config_from(args) -> RunConfig:
    return RunConfig(topology=args.topology, trace=args.trace, algorithm=args.algo,
                     b=args.b, a=args.a, alpha=args.alpha, mode=args.mode,
                     policy=args.policy, seeds=_parse_seeds(args.seeds),
                     repetitions=args.reps)


def _cmd_gen_topology(args) -> int:
    if args.kind == STAR:
        topo = generate(STAR, n=args.n)
    elif args.kind == LEAF_SPINE:
        topo = generate(LEAF_SPINE, leaves=args.leaves, spines=args.spines)
    else:
        topo = generate(FAT_TREE, k=args.k)
    write_edge_list(topo, args.out)
    print(f"wrote {args.out}: {topo.node_count} nodes, {len(topo.edges)} links, "
          f"{topo.rack_count} racks")
    return 0


def _cmd_gen_trace(args) -> int:
    if args.kind == "zipf":
        if args.nodes is None or args.exponent is None:
            raise ConfigError("zipf needs --nodes and --exponent")
        trace = zipf_trace(args.nodes, args.exponent, args.count, args.seed)
    elif args.kind == "matrix":
        if args.matrix is None:
            raise ConfigError("matrix needs --matrix")
        trace = sample_from_matrix(read_matrix(args.matrix), args.count, args.seed)
    else:
        if args.items is None or args.paging_len is None:
            raise ConfigError("star-adversary needs --items and --paging-len")
        rng = random.Random(args.seed)
        sequence = [rng.randint(1, args.items) for _ in range(args.paging_len)]
        topo, trace = adversarial_star_instance(args.items, args.b, args.a,
                                                args.alpha, sequence)
        if args.topo_out:
            write_edge_list(topo, args.topo_out)
            print(f"wrote {args.topo_out}")
    save_trace(trace, args.out)
    print(f"wrote {args.out}: {len(trace)} requests over {trace.node_count} nodes")
    return 0


def _cmd_simulate(args) -> int:
    config = _config_from(args)
    result = run(config, parallel=args.parallel == "on")
    if "note" in result.metadata:
        print(f"note: {result.metadata['note']}")
    mean = result.mean
    print(f"{result.algorithm} b={result.b} a={result.a} alpha={result.alpha} "
          f"mode={result.mode}: routing={mean.routing_cost} "
          f"reconfig={mean.reconfig_cost} total={mean.total_cost} "
          f"wall={mean.wall_time_s:.4f}s over {len(result.rows)} repetitions")
    if args.out:
        write_results_csv(result, args.out)
        print(f"wrote {args.out}")
    return 0


def _cmd_sweep(args) -> int:
    config = _config_from(args)
    try:
        b_values = [int(x) for x in args.b_values.split(",") if x.strip() != ""]
    except ValueError:
        raise ConfigError(f"bad b list {args.b_values!r}") from None
    results = sweep(config, b_values, parallel=args.parallel == "on")
    for note in {r.metadata["note"] for r in results.values() if "note" in r.metadata}:
        print(f"note: {note}")
    for b, result in results.items():
        print(f"b={b}: routing={result.mean.routing_cost} "
              f"total={result.mean.total_cost} wall={result.mean.wall_time_s:.4f}s")
    if args.out:
        write_results_csv(list(results.values()), args.out)
        print(f"wrote {args.out}")
        if args.figures:
            for path in plot_sweep(read_results_csv(args.out),
                                   args.figures_dir or str(Path(args.out).parent)):
                print(f"wrote {path}")
    return 0


def _cmd_oracle(args) -> int:
    if args.star_items is not None:
        rng = random.Random(args.paging_seed)
        sequence = [rng.randint(1, args.star_items) for _ in range(args.paging_len)]
        topology, trace = adversarial_star_instance(args.star_items, args.b, args.a,
                                                    args.alpha, sequence)
    else:
        if args.topology is None or args.trace is None:
            raise ConfigError("oracle needs --star-items or --topology/--trace")
        topology = resolve_topology(args.topology)
        trace = resolve_trace(args.trace, topology)
    report = oracle_check(topology, trace, args.b, args.a, args.alpha, args.trials,
                          mode=args.mode)
    flag = " low-confidence" if report.low_confidence else ""
    print(f"oracle: trials={report.trials} mean_total={report.mean_total:.4f} "
          f"opt={report.opt_cost:.4f} beta_allowance={report.beta_allowance:.4f} "
          f"ratio={report.ratio:.4f}{flag}")
    return 0


def _cmd_report(args) -> int:
    rows = []
    for path in args.results:
        rows.extend(read_results_csv(path))
    for path in plot_sweep(rows, args.out_dir, stem=args.stem):
        print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rbmatch",
        description="Trace-driven simulator for online degree-bounded matching "
                    "of reconfigurable links")
    subs = parser.add_subparsers(dest="command", required=True)

    topo = subs.add_parser("gen-topology", help="write an edge-list file")
    topo.add_argument("--kind", required=True, choices=[STAR, LEAF_SPINE, FAT_TREE])
    topo.add_argument("--n", type=int, default=None, help="star leaves")
    topo.add_argument("--leaves", type=int, default=None)
    topo.add_argument("--spines", type=int, default=None)
    topo.add_argument("--k", type=int, default=None, help="fat-tree arity (even)")
    topo.add_argument("--out", required=True)
    topo.set_defaults(func=_cmd_gen_topology)

    trace = subs.add_parser("gen-trace", help="write a trace file")
    trace.add_argument("--kind", required=True, choices=["matrix", "zipf", "star-adversary"])
    trace.add_argument("--count", type=int, default=0)
    trace.add_argument("--seed", type=int, default=0)
    trace.add_argument("--out", required=True)
    trace.add_argument("--matrix", default=None, help="weight matrix file")
    trace.add_argument("--nodes", type=int, default=None)
    trace.add_argument("--exponent", type=float, default=None)
    trace.add_argument("--items", type=int, default=None)
    trace.add_argument("--b", type=int, default=1)
    trace.add_argument("--a", type=int, default=1)
    trace.add_argument("--alpha", type=float, default=1.0)
    trace.add_argument("--paging-len", type=int, default=None)
    trace.add_argument("--topo-out", default=None)
    trace.set_defaults(func=_cmd_gen_trace)

    sim = subs.add_parser("simulate", help="run one algorithm over a trace")
    _add_run_flags(sim)
    sim.set_defaults(func=_cmd_simulate)

    swp = subs.add_parser("sweep", help="repeat a run across degree caps")
    _add_run_flags(swp)
    swp.add_argument("--b-values", required=True, help="comma-separated caps")
    swp.add_argument("--figures", action="store_true",
                     help="also render figures next to the CSV")
    swp.add_argument("--figures-dir", default=None)
    swp.set_defaults(func=_cmd_sweep)

    orc = subs.add_parser("oracle", help="empirical ratio vs the exact optimum")
    orc.add_argument("--star-items", type=int, default=None)
    orc.add_argument("--paging-len", type=int, default=10)
    orc.add_argument("--paging-seed", type=int, default=0)
    orc.add_argument("--topology", default=None)
    orc.add_argument("--trace", default=None)
    orc.add_argument("--b", type=int, required=True)
    orc.add_argument("--a", type=int, required=True)
    orc.add_argument("--alpha", type=float, required=True)
    orc.add_argument("--trials", type=int, default=100)
    orc.add_argument("--mode", default="strict", choices=["strict", "lazy"])
    orc.set_defaults(func=_cmd_oracle)

    rep = subs.add_parser("report", help="render figures from results CSVs")
    rep.add_argument("--results", nargs="+", required=True)
    rep.add_argument("--out-dir", required=True)
    rep.add_argument("--stem", default="sweep")
    rep.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RbmatchError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
