"""Command-line front end.

Exit codes: 0 success, 1 I/O or graph-format failure, 2 usage error,
3 verification failure.
"""
from __future__ import annotations

import argparse
import contextlib
import sys
from typing import Sequence

from .analysis import BenchmarkConfig, run_benchmark
from .graph import (
    DirectedGraph,
    GraphFormatError,
    generate_power_law_in_degree,
    generate_uniform_random,
    load_edge_list_file,
    write_edge_list,
)
from .oracles import DENSE_CAP, WalkConfig, global_pagerank, monte_carlo_from_source, power_iteration_to_target
from .push import ppr_to_target

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2, 3
VARIANT_FLAGS = {"pq": "priority_queue", "set": "work_set"}


class UsageError(Exception):
    pass


def parse_gen_spec(spec: str) -> tuple[str, dict[str, float]]:
    """``uniform:n=1000,d=10`` or ``powerlaw:n=1000,d=10,exponent=2.5``."""
    kind, _, rest = spec.partition(":")
    params: dict[str, float] = {}
    for item in filter(None, rest.split(",")):
        key, eq, val = item.partition("=")
        if not eq:
            raise UsageError(f"--gen: expected key=value, got {item!r}")
        try:
            params[key.strip()] = float(val)
        except ValueError:
            raise UsageError(f"--gen: {key}={val!r} is not a number") from None
    required = {"uniform": {"n", "d"}, "powerlaw": {"n", "d", "exponent"}}
    if kind not in required:
        raise UsageError(f"--gen: unknown generator {kind!r} (use uniform or powerlaw)")
    missing = required[kind] - params.keys()
    extra = params.keys() - required[kind]
    if missing or extra:
        raise UsageError(f"--gen {kind} needs exactly {sorted(required[kind])}")
    return kind, params


def load_graph(args) -> DirectedGraph:
    if args.gen:
        kind, prm = parse_gen_spec(args.gen)
        try:
            if kind == "uniform":
                return generate_uniform_random(int(prm["n"]), prm["d"], args.seed)
            return generate_power_law_in_degree(int(prm["n"]), prm["d"], prm["exponent"], args.seed)
        except ValueError as exc:
            raise UsageError(f"--gen: {exc}") from None
    with open(args.graph) as fh:
        return load_edge_list_file(fh)


def _unit(name: str):
    def parse(text: str) -> float:
        try:
            x = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number, got {text!r}") from None
        if not 0.0 < x < 1.0:
            raise argparse.ArgumentTypeError(f"{name} must lie in (0, 1), got {text}")
        return x
    return parse


def _unit_list(name: str):
    one = _unit(name)

    def parse(text: str) -> list[float]:
        items = [t for t in text.split(",") if t.strip()]
        if not items:
            raise argparse.ArgumentTypeError(f"{name} list is empty")
        return [one(t) for t in items]
    return parse


@contextlib.contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _check_node(graph: DirectedGraph, node: int, flag: str) -> None:
    if not 0 <= node < graph.n:
        raise UsageError(f"{flag} {node} out of range [0, {graph.n})")


def cmd_query(args) -> int:
    graph = load_graph(args)
    _check_node(graph, args.target, "--target")
    scores, stats = ppr_to_target(graph, args.target, args.alpha, args.epsilon, VARIANT_FLAGS[args.variant])
    with _output(args.out) as out:
        scores.write_tsv(out)
    print(
        f"pops={stats.pops} steps={stats.steps} touched={stats.distinct_touched} "
        f"result_size={len(scores)} wall_time={stats.wall_time:.6f}s",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_baseline(args) -> int:
    graph = load_graph(args)
    if args.oracle == "power":
        if args.target is None:
            raise UsageError("--target is required for the power oracle")
        _check_node(graph, args.target, "--target")
        result = power_iteration_to_target(graph, args.target, args.alpha, args.epsilon)
    elif args.oracle == "monte-carlo":
        if args.source is None:
            raise UsageError("--source is required for the monte-carlo oracle")
        _check_node(graph, args.source, "--source")
        if args.walks < 1:
            raise UsageError("--walks must be >= 1")
        result = monte_carlo_from_source(graph, args.source, args.alpha, WalkConfig(args.walks, args.seed))
        if result.truncated:
            print(f"truncated walks: {result.truncated}", file=sys.stderr)
    else:
        result = global_pagerank(graph, args.alpha, args.tolerance)
    with _output(args.out) as out:
        result.write_tsv(out)
    return EXIT_OK


def cmd_bench(args) -> int:
    graph = load_graph(args)
    config = BenchmarkConfig(
        alphas=args.alpha,
        epsilons=args.epsilon,
        targets_per_setting=args.targets,
        sampling_mode=args.sampling,
        variant=VARIANT_FLAGS[args.variant],
        seed=args.seed,
        graph_source=args.gen or args.graph,
        jobs=args.jobs,
    )
    report = run_benchmark(graph, config)
    with _output(args.out) as out:
        out.write(report.to_text())
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_gen(args) -> int:
    graph = load_graph(args)
    with _output(args.out) as out:
        write_edge_list(graph, out)
    print(f"n={graph.n} m={graph.m}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import verify_graph

    graph = load_graph(args)
    if graph.n > DENSE_CAP:
        raise UsageError(f"verify needs n <= {DENSE_CAP}, graph has n={graph.n}")
    override = args.epsilon if args.loose_threshold else None
    checks = verify_graph(graph, args.alpha, args.epsilon, _stop_threshold=override)
    with _output(args.out) as out:
        for c in checks:
            out.write(c.line() + "\n")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph", metavar="PATH", help="edge-list file")
    src.add_argument("--gen", metavar="SPEC", help="uniform:n=N,d=D or powerlaw:n=N,d=D,exponent=G")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", metavar="PATH", help="output file (default stdout)")

    parser = argparse.ArgumentParser(prog="pprtarget", description="Personalized PageRank contributions to a target node by reverse push.")
    sub = parser.add_subparsers(dest="command", required=True)

    q = sub.add_parser("query", parents=[common], help="reverse push to one target")
    q.add_argument("--target", type=int, required=True)
    q.add_argument("--alpha", type=_unit("--alpha"), default=0.1)
    q.add_argument("--epsilon", type=_unit("--epsilon"), default=1e-4)
    q.add_argument("--variant", choices=sorted(VARIANT_FLAGS), default="pq")
    q.set_defaults(parser=q, func=cmd_query)

    b = sub.add_parser("baseline", parents=[common], help="oracle computations")
    b.add_argument("--oracle", choices=["power", "monte-carlo", "global"], required=True)
    b.add_argument("--target", type=int)
    b.add_argument("--source", type=int)
    b.add_argument("--alpha", type=_unit("--alpha"), default=0.1)
    b.add_argument("--epsilon", type=_unit("--epsilon"), default=1e-4)
    b.add_argument("--walks", type=int, default=100_000)
    b.add_argument("--tolerance", type=_unit("--tolerance"), default=1e-10)
    b.set_defaults(parser=b, func=cmd_baseline)

    be = sub.add_parser("bench", parents=[common], help="benchmark against theorem allowances")
    be.add_argument("--alpha", type=_unit_list("--alpha"), default=[0.1, 0.2], help="comma-separated")
    be.add_argument("--epsilon", type=_unit_list("--epsilon"), default=[1e-4], help="comma-separated")
    be.add_argument("--targets", type=int, default=20, help="targets per setting")
    be.add_argument("--sampling", choices=["uniform", "pagerank"], default="uniform")
    be.add_argument("--variant", choices=sorted(VARIANT_FLAGS), default="pq")
    be.add_argument("--jobs", type=int, default=1)
    be.set_defaults(parser=be, func=cmd_bench)

    g = sub.add_parser("gen", parents=[common], help="write a generated graph as an edge list")
    g.set_defaults(parser=g, func=cmd_gen)

    v = sub.add_parser("verify", parents=[common], help="exhaustive invariant checks (n <= 500)")
    v.add_argument("--alpha", type=_unit("--alpha"), default=0.1)
    v.add_argument("--epsilon", type=_unit("--epsilon"), default=1e-4)
    # test hook: stop at epsilon instead of alpha*epsilon, which must break the error bound
    v.add_argument("--loose-threshold", action="store_true", help=argparse.SUPPRESS)
    v.set_defaults(parser=v, func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "targets", 1) < 1:
        parser.error("--targets must be >= 1")
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")
    try:
        return args.func(args)
    except UsageError as exc:
        args.parser.print_usage(sys.stderr)
        print(f"{args.parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, GraphFormatError) as exc:
        print(f"{args.parser.prog}: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
