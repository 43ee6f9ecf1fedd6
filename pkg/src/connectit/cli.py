"""Command-line entry point: ``connectit <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import statistics
import sys
import time
from pathlib import Path

import numpy as np

from .amsf import AMSF_VARIANTS, amsf, kruskal_oracle
from .driver import AlgorithmSpec, all_algorithm_specs, bfs_oracle, connectivity, spanning_forest
from .graph import (
    EdgeList,
    Graph,
    GraphFormatError,
    generate_graph,
    load_adjacency_graph,
    load_edge_list,
    symmetrize,
    write_adjacency_graph,
)
from .parallel import default_workers
from .recommend import GraphStats, graph_stats, recommend
from .sampling import KOUT_VARIANTS, SCHEMES, SamplingSpec
from .streaming import Batch, StreamEngine
from .unionfind import SpecError
from .verify import fixture_graphs, forest_problems, seeded_er_graphs, small_fixture_graphs

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2


class CLIError(Exception):
    pass


# ------------------------------------------------------------ helpers

def _parse_params(text: str) -> tuple[str, dict]:
    model, _, raw = text.partition(":")
    params = {}
    for item in filter(None, (p.strip() for p in raw.split(","))):
        key, _, value = item.partition("=")
        try:
            params[key.strip()] = int(value)
        except ValueError:
            params[key.strip()] = float(value)
    return model.strip(), params


def _load_graph(args) -> tuple[Graph, str]:
    sources = [s for s in (args.graph, args.edges, args.gen) if s]
    if len(sources) != 1:
        raise CLIError("give exactly one of --graph, --edges or --gen")
    try:
        if args.graph:
            return load_adjacency_graph(args.graph), Path(args.graph).name
        if args.edges:
            el = load_edge_list(args.edges, getattr(args, "n", None))
            return symmetrize(el, el.n), Path(args.edges).name
        model, params = _parse_params(args.gen)
        seed = int(params.pop("seed", 0))
        return generate_graph(model, seed=seed, **params), args.gen
    except OSError as exc:
        raise CLIError(f"cannot read graph: {exc}") from None
    except GraphFormatError as exc:
        raise CLIError(str(exc)) from None
    except (KeyError, TypeError, ValueError) as exc:
        raise CLIError(f"bad graph source: {exc}") from None


def _build_spec(args) -> AlgorithmSpec:
    text = args.algo
    base = AlgorithmSpec.parse(text, seed=args.seed)
    samp = base.sampling
    overrides = {}
    if args.sample is not None:
        overrides["scheme"] = args.sample
    for flag, name in (
        ("kout_k", "kout_k"), ("kout_variant", "kout_variant"), ("bfs_rounds", "bfs_rounds"),
        ("bfs_threshold", "bfs_threshold"), ("ldd_beta", "ldd_beta"),
    ):
        value = getattr(args, flag)
        if value is not None:
            overrides[name] = value
    if args.ldd_permute:
        overrides["ldd_permute"] = True
    fields = {k: getattr(samp, k) for k in ("scheme", "kout_k", "kout_variant", "bfs_rounds",
                                            "bfs_threshold", "ldd_beta", "ldd_permute")}
    fields.update(overrides)
    return AlgorithmSpec(SamplingSpec(seed=args.seed, **fields), base.finish)


def _emit(rows: list[dict], fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        for row in rows:
            out.write(json.dumps(row) + "\n")
    elif fmt == "csv":
        if not rows:
            return
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
        out.write(buf.getvalue())
    else:
        for row in rows:
            out.write("  ".join(f"{k}={v}" for k, v in row.items()) + "\n")


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("graph source")
    g.add_argument("--graph", help="text AdjacencyGraph file")
    g.add_argument("--edges", help="edge list file ('u v' per line); symmetrized")
    g.add_argument("--gen", help="generator, e.g. 'er:n=1000,avg_deg=10,seed=1', 'torus:side=8,d=3', 'ba:n=2000,m=4'")


def _add_algo_args(p: argparse.ArgumentParser, default_algo: str = "uf_rem_cas;split_atomic_one;find_naive") -> None:
    a = p.add_argument_group("algorithm")
    a.add_argument("--algo", default=default_algo,
                   help="finish spec (e.g. 'uf_rem_cas;split_atomic_one;find_naive', 'lt_prf', 'sv') "
                        "or '<sampling> + <finish>'")
    a.add_argument("--sample", choices=SCHEMES, default=None, help="sampling scheme (default: none)")
    a.add_argument("--kout-k", type=int, default=None)
    a.add_argument("--kout-variant", choices=KOUT_VARIANTS, default=None)
    a.add_argument("--bfs-rounds", type=int, default=None)
    a.add_argument("--bfs-threshold", type=float, default=None)
    a.add_argument("--ldd-beta", type=float, default=None)
    a.add_argument("--ldd-permute", action="store_true")
    a.add_argument("--seed", type=int, default=0)


def _add_run_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--threads", type=int, default=None, help="worker count (default: $CONNECTIT_THREADS or CPU count)")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--format", choices=("json", "csv", "human"), default="json")


# -------------------------------------------------------- subcommands

def cmd_cc(args) -> int:
    graph, name = _load_graph(args)
    spec = _build_spec(args)
    rows, status = [], EXIT_OK
    oracle = bfs_oracle(graph) if args.verify else None
    for _ in range(args.reps):
        report = connectivity(graph, spec, workers=args.threads)
        row = report.to_json(name, spec, graph.n, graph.m)
        if oracle is not None:
            row["verified"] = bool(np.array_equal(report.canonical_labels, oracle))
            if not row["verified"]:
                status = EXIT_VERIFY_FAILED
        rows.append(row)
    _emit(rows, args.format)
    return status


def cmd_sf(args) -> int:
    graph, name = _load_graph(args)
    spec = _build_spec(args)
    rows, status = [], EXIT_OK
    for _ in range(args.reps):
        forest, report = spanning_forest(graph, spec, workers=args.threads)
        row = report.to_json(name, spec, graph.n, graph.m)
        row["forest_edges"] = int(forest.shape[0])
        if args.verify:
            problems = forest_problems(graph, forest)
            row["verified"] = not problems
            if problems:
                row["problems"] = problems
                status = EXIT_VERIFY_FAILED
        rows.append(row)
    if args.out:
        Path(args.out).write_text("".join(f"{u} {v}\n" for u, v in forest.tolist()))
    _emit(rows, args.format)
    return status


def cmd_stream(args) -> int:
    try:
        edges = load_edge_list(args.edges, args.n)
    except (OSError, GraphFormatError) as exc:
        raise CLIError(str(exc)) from None
    spec = _build_spec(args)
    n = edges.n
    engine = StreamEngine(n, spec, workers=args.threads, seed=args.seed)
    rng = np.random.default_rng(args.seed)
    pairs = edges.pairs()
    total_t, total_edges, batches = 0.0, 0, 0
    for lo in range(0, len(pairs), args.batch_size):
        chunk = pairs[lo:lo + args.batch_size]
        queries = rng.integers(0, max(n, 1), size=(args.queries_per_batch, 2)).tolist() if n else []
        t0 = time.perf_counter()
        answers = engine.process_batch(Batch(chunk, queries))
        dt = time.perf_counter() - t0
        total_t += dt
        total_edges += 2 * len(chunk)
        batches += 1
        print(json.dumps({
            "batch": batches - 1,
            "inserts": len(chunk),
            "queries": len(queries),
            "true_answers": int(sum(answers)),
            "latency_s": dt,
            "throughput_edges_per_s": (2 * len(chunk) / dt) if dt > 0 else None,
        }))
    labels = engine.final_labels()
    summary = {
        "summary": True,
        "spec_string": str(spec),
        "class": engine.kind,
        "batches": batches,
        "total_s": total_t,
        "throughput_edges_per_s": (total_edges / total_t) if total_t > 0 else None,
        "num_components": int(np.unique(labels).shape[0]) if n else 0,
    }
    status = EXIT_OK
    if args.verify:
        oracle = bfs_oracle(symmetrize(edges, n))
        summary["verified"] = bool(np.array_equal(labels, oracle))
        status = EXIT_OK if summary["verified"] else EXIT_VERIFY_FAILED
    print(json.dumps(summary))
    return status


def cmd_amsf(args) -> int:
    try:
        edges = load_edge_list(args.edges, args.n)
    except (OSError, GraphFormatError) as exc:
        raise CLIError(str(exc)) from None
    try:
        result = amsf(edges, epsilon=args.epsilon, variant=args.variant, seed=args.seed, workers=args.threads)
    except ValueError as exc:
        raise CLIError(str(exc)) from None
    status = EXIT_OK
    w_opt = kruskal_oracle(edges) if args.verify else None
    row = result.to_json(w_opt)
    if w_opt is not None:
        ok = w_opt - 1e-9 * max(1.0, w_opt) <= result.weight <= (1 + args.epsilon) * w_opt + 1e-9 * max(1.0, w_opt)
        row["verified"] = bool(ok)
        status = EXIT_OK if ok else EXIT_VERIFY_FAILED
    print(json.dumps(row))
    return status


def cmd_gen(args) -> int:
    params = {}
    if args.model in ("er", "erdos_renyi"):
        if args.n is None:
            raise CLIError("er needs --n")
        params = {"n": args.n}
        if args.p is not None:
            params["p"] = args.p
        else:
            params["avg_deg"] = args.avg_deg if args.avg_deg is not None else 10.0
    elif args.model == "torus":
        params = {"side": args.side, "d": args.d}
    else:
        if args.n is None:
            raise CLIError("ba needs --n")
        params = {"n": args.n, "edges_per_vertex": args.m}
    try:
        graph = generate_graph(args.model, seed=args.seed, **params)
    except ValueError as exc:
        raise CLIError(str(exc)) from None
    if args.format == "adj":
        if args.out:
            write_adjacency_graph(graph, args.out)
        else:
            tmp = io.StringIO()
            tmp.write("AdjacencyGraph\n%d\n%d\n" % (graph.n, graph.m))
            tmp.writelines(f"{x}\n" for x in graph.offsets[:-1].tolist())
            tmp.writelines(f"{x}\n" for x in graph.neighbors.tolist())
            sys.stdout.write(tmp.getvalue())
    else:
        src, dst = graph.undirected_edges()
        text = "".join(f"{u} {v}\n" for u, v in zip(src.tolist(), dst.tolist()))
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
    return EXIT_OK


def run_grid(graphs: dict, workers: int = 1, forest: bool = True, log=None) -> tuple[int, list[str]]:
    """Every spec on every graph against the BFS oracle; returns (checked, failures)."""
    specs = all_algorithm_specs()
    checked, failures = 0, []
    for name, graph in graphs.items():
        oracle = bfs_oracle(graph)
        for spec in specs:
            checked += 1
            try:
                labels = connectivity(graph, spec, workers=workers).canonical_labels
                if not np.array_equal(labels, oracle):
                    failures.append(f"{name}: {spec}: labels differ from oracle")
                if forest and spec.root_based:
                    edges, _ = spanning_forest(graph, spec, workers=workers)
                    problems = forest_problems(graph, edges, oracle)
                    if problems:
                        failures.append(f"{name}: {spec}: forest: {problems[0]}")
            except Exception as exc:  # report and keep going
                failures.append(f"{name}: {spec}: {type(exc).__name__}: {exc}")
        if log:
            log(f"{name}: {len(specs)} specs checked")
    return checked, failures


def cmd_verify(args) -> int:
    if args.grid == "small":
        graphs = small_fixture_graphs()
    else:
        graphs = dict(fixture_graphs())
        graphs.update(seeded_er_graphs())
    t0 = time.perf_counter()
    log = (lambda msg: print(msg, file=sys.stderr)) if args.progress else None
    checked, failures = run_grid(graphs, workers=args.threads or 1, log=log)
    for line in failures:
        print("FAIL " + line)
    print(json.dumps({
        "grid": args.grid, "graphs": len(graphs), "runs": checked,
        "failures": len(failures), "elapsed_s": time.perf_counter() - t0,
    }))
    return EXIT_OK if not failures else EXIT_VERIFY_FAILED


def cmd_bench(args) -> int:
    graph, name = _load_graph(args)
    algos = args.algo_list or [recommend(graph_stats(graph, args.seed))]
    rows = []
    for text in algos:
        args.algo = text
        spec = _build_spec(args)
        times = []
        for _ in range(args.reps):
            report = connectivity(graph, spec, workers=args.threads)
            times.append(report.timings["total"])
        rows.append({
            "graph": name, "n": graph.n, "m": graph.m, "spec_string": str(spec),
            "threads": args.threads or default_workers(), "reps": args.reps,
            "min_s": min(times), "median_s": statistics.median(times), "mean_s": statistics.fmean(times),
            "num_components": report.num_components,
        })
    _emit(rows, args.format)
    return EXIT_OK


def cmd_recommend(args) -> int:
    if args.graph or args.edges or args.gen:
        graph, name = _load_graph(args)
        stats = graph_stats(graph, args.seed)
    else:
        if args.n is None or args.m is None:
            raise CLIError("give a graph source or both --n and --m")
        name = None
        stats = GraphStats(args.n, args.m, args.diameter)
    print(json.dumps({
        "graph": name, "n": stats.n, "m": stats.m, "m_over_n": stats.density,
        "diameter_estimate": stats.diameter, "spec": recommend(stats),
    }))
    return EXIT_OK


# ------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="connectit", description="Parallel graph connectivity toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cc", help="connected components")
    _add_graph_args(p)
    _add_algo_args(p)
    _add_run_args(p)
    p.add_argument("--verify", action="store_true", help="compare against the BFS oracle")
    p.set_defaults(func=cmd_cc)

    p = sub.add_parser("sf", help="spanning forest (root-based finishes only)")
    _add_graph_args(p)
    _add_algo_args(p)
    _add_run_args(p)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--out", help="write forest edges here")
    p.set_defaults(func=cmd_sf)

    p = sub.add_parser("stream", help="batch-incremental connectivity over an edge list")
    p.add_argument("--edges", required=True)
    p.add_argument("--n", type=int, default=None, help="vertex count (default: max id + 1)")
    p.add_argument("--batch-size", type=int, default=1000)
    p.add_argument("--queries-per-batch", type=int, default=0)
    _add_algo_args(p)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_stream)

    p = sub.add_parser("amsf", help="approximate minimum spanning forest")
    p.add_argument("--edges", required=True, help="weighted edge list ('u v w' per line)")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--epsilon", type=float, default=0.25)
    p.add_argument("--variant", choices=AMSF_VARIANTS, default="coo")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--verify", action="store_true", help="also compute the exact weight with Kruskal")
    p.set_defaults(func=cmd_amsf)

    p = sub.add_parser("gen", help="generate a graph")
    p.add_argument("--model", choices=("er", "erdos_renyi", "torus", "ba", "barabasi_albert"), required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--avg-deg", type=float)
    p.add_argument("--side", type=int, default=4)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--m", type=int, default=4, help="edges per new vertex (ba)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("adj", "edges"), default="adj")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="run every algorithm combination against the oracle on built-in fixtures")
    p.add_argument("--grid", choices=("small", "full"), default="small")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--progress", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time one or more specs (min/median/mean)")
    _add_graph_args(p)
    _add_algo_args(p, default_algo=None)
    p.set_defaults(algo=None)
    p.add_argument("--spec", dest="algo_list", action="append", help="spec to time (repeatable)")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--format", choices=("json", "csv", "human"), default="json")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("recommend", help="suggest a spec from graph statistics")
    _add_graph_args(p)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int, help="directed edge count")
    p.add_argument("--diameter", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_recommend)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "func", None) is cmd_bench and args.algo and not args.algo_list:
        args.algo_list = [args.algo]
    try:
        return args.func(args)
    except (CLIError, SpecError) as exc:
        print(f"connectit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"connectit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
