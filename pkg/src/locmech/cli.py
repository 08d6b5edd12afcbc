"""Command-line entry point: ``locmech run | gen | verify``.

Exit codes: 0 ok, 2 usage, 3 input, 4 violation, 5 nontermination.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from collections import defaultdict
from fractions import Fraction

import networkx as nx

from .graph import (GraphFormatError, WeightedGraph, format_graph,
                    parse_graph_raw, parse_rates, validate_graph)
from .myerson import DiscretizationConfig, MonotonicityError, run_discretized, run_mechanism
from .oracle import BoundViolation, default_corpus, small_corpus, write_report
from .sim import (LOCAL, CongestionError, NonTerminationError, congest,
                  round_cap)
from .verify import (CONGEST_CONSTANT, EPSILONS, MECHANISMS, SUITES,
                     make_mechanism, run_suite)

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_VIOLATION, EXIT_NONTERMINATION = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _model(args):
    if args.model == "local":
        return LOCAL
    return congest(args.congest_constant)


def _emit(payload: str, out: str | None):
    if out is None:
        sys.stdout.write(payload)
    else:
        with open(out, "w") as fh:
            fh.write(payload)


# --- run ---------------------------------------------------------------------------

def cmd_run(args) -> int:
    if args.mechanism == "slot" and args.rates is None:
        raise UsageError("--rates is required for the slot mechanism")
    text = _read(args.graph)
    try:
        n, W, weights, edges = parse_graph_raw(text, allow_rational=args.epsilon is not None)
        rates = parse_rates(_read(args.rates)) if args.rates else None
    except GraphFormatError as exc:
        raise InputError(f"{exc}") from None
    mech = make_mechanism(args.mechanism, rates)
    model = _model(args)
    with round_cap(args.max_rounds):
        if args.epsilon is not None:
            try:
                cfg = DiscretizationConfig(args.epsilon, W)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            g = WeightedGraph.from_edges(n, edges, [0] * n, W)
            bids = _bids(args.bids, weights, rational=True)
            result = run_discretized(mech, g, bids, cfg, model, true_weights=weights)
        else:
            g = WeightedGraph.from_edges(n, edges, weights, W)
            bids = _bids(args.bids, weights)
            result = run_mechanism(mech, g, bids, model, true_weights=weights)
    payload = result.to_json()
    if model.budget(n) is not None:
        payload["congest_budget_bits"] = model.budget(n)
    _emit(json.dumps(payload) + "\n", args.out)
    return EXIT_OK


def _bids(spec: str | None, weights, rational: bool = False):
    if spec is None:
        return tuple(weights)
    try:
        bids = tuple(Fraction(x) if rational else int(x) for x in spec.split(","))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad --bids value {spec!r}") from None
    if len(bids) != len(weights):
        raise InputError(f"--bids has {len(bids)} entries for {len(weights)} nodes")
    return bids


# --- gen ---------------------------------------------------------------------------

def _generate(args) -> nx.Graph:
    kind = args.kind
    if args.n is not None and args.n < 1:
        raise UsageError("--n must be positive")
    if kind == "path":
        return nx.path_graph(_need(args.n, "--n"))
    if kind == "cycle":
        n = _need(args.n, "--n")
        if n < 3:
            raise UsageError("a cycle needs n >= 3")
        return nx.cycle_graph(n)
    if kind == "star":
        return nx.star_graph(_need(args.n, "--n") - 1)
    if kind == "grid":
        return nx.convert_node_labels_to_integers(
            nx.grid_2d_graph(_need(args.rows, "--rows"), _need(args.cols, "--cols")),
            ordering="sorted")
    if kind == "gnp":
        if args.p is None or not 0 <= args.p <= 1:
            raise UsageError("gnp needs --p in [0, 1]")
        return nx.gnp_random_graph(_need(args.n, "--n"), args.p, seed=args.seed)
    n, d = _need(args.n, "--n"), _need(args.d, "--d")
    if n * d % 2 or d >= n:
        raise UsageError(f"no {d}-regular graph on {n} nodes")
    return nx.random_regular_graph(d, n, seed=args.seed)


def _need(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


def cmd_gen(args) -> int:
    if args.W < 0:
        raise UsageError("--W must be non-negative")
    graph = _generate(args)
    rng = random.Random(args.seed)
    n = graph.number_of_nodes()
    weights = [rng.randint(0, args.W) for _ in range(n)]
    edges = sorted((min(u, v), max(u, v)) for u, v in graph.edges())
    g = WeightedGraph.from_edges(n, edges, weights, args.W)
    problem = validate_graph(g)
    if problem:  # pragma: no cover - generators only build simple graphs
        raise InputError(problem)
    _emit(format_graph(g), args.out)
    return EXIT_OK


# --- verify ------------------------------------------------------------------------

def _table(rows: list[dict], keys: list[str]) -> str:
    cells = [[str(r.get(k, "")) for k in keys] for r in rows]
    widths = [max([len(k)] + [len(c[i]) for c in cells]) for i, k in enumerate(keys)]
    lines = ["  ".join(k.ljust(w) for k, w in zip(keys, widths))]
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def _aggregate(result) -> list[dict]:
    """Collapse per-instance rows to the worst case per (mechanism, n, delta)."""
    if result.suite not in ("approx", "rounds", "discretized"):
        return []
    worst: dict = defaultdict(dict)
    for row in result.rows:
        key = (row.get("mechanism"), row.get("n"), row.get("delta"), row.get("epsilon"))
        cur = worst[key]
        if result.suite == "rounds":
            if not cur or row["max_rounds"] > cur["max_rounds"]:
                worst[key] = row
        else:
            r = row.get("ratio")
            if not cur or (r is not None and (cur.get("ratio") is None or r > cur["ratio"])):
                worst[key] = row
    out = []
    for key in sorted(worst, key=lambda k: tuple(str(x) for x in k)):
        out.append({k: (str(v) if isinstance(v, Fraction) else v)
                    for k, v in worst[key].items() if k not in ("alg", "opt")})
    return out


def cmd_verify(args) -> int:
    corpus = small_corpus() if args.scope == "small" else default_corpus(seed=args.seed)
    kwargs = {}
    if args.suite in ("truthful", "monotone", "approx") and args.mechanism:
        kwargs["mechanisms"] = (args.mechanism,)
    if args.rates and args.suite in ("truthful", "monotone", "approx"):
        try:
            kwargs["rates_list"] = [parse_rates(_read(args.rates))]
        except GraphFormatError as exc:
            raise InputError(str(exc)) from None
    if args.suite == "prices":
        kwargs["c"] = args.congest_constant
    if args.suite == "discretized":
        kwargs["epsilons"] = (args.epsilon,) if args.epsilon else EPSILONS
        kwargs["seed"] = args.seed
        if args.mechanism and args.mechanism != "slot":
            kwargs["mechanisms"] = (args.mechanism,)
    with round_cap(args.max_rounds):
        result = run_suite(args.suite, corpus, workers=args.workers, **kwargs)
    rows = _aggregate(result)
    if rows:
        sys.stdout.write(_table(rows, list(rows[0])))
    summary = result.summary()
    sys.stdout.write(_table([summary], list(summary)))
    if args.out:
        write_report(args.out, result.violations, summary)
    elif result.violations:
        for viol in result.violations[:20]:
            sys.stderr.write(json.dumps(viol.to_json()) + "\n")
    return EXIT_OK if result.ok else EXIT_VIOLATION


# --- entry point -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="locmech", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--model", choices=("local", "congest"), default="local")
        p.add_argument("--congest-constant", type=_positive, default=CONGEST_CONSTANT)
        p.add_argument("--rates", help="file with one rate per line, best slot first")
        p.add_argument("--epsilon", type=_fraction, help="discretisation step")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="output path (default: standard output)")
        p.add_argument("--max-rounds", type=_positive, help="round cap per simulation")

    run = sub.add_parser("run", help="run a mechanism on a graph file")
    run.add_argument("--mechanism", choices=MECHANISMS, required=True)
    run.add_argument("--graph", required=True)
    run.add_argument("--bids", help="comma-separated bids (default: the file's weights)")
    common(run)
    run.set_defaults(func=cmd_run)

    gen = sub.add_parser("gen", help="generate a graph file")
    gen.add_argument("kind", choices=("path", "cycle", "star", "grid", "gnp", "regular"))
    gen.add_argument("--n", type=int)
    gen.add_argument("--W", type=int, default=5)
    gen.add_argument("--p", type=float)
    gen.add_argument("--d", type=int)
    gen.add_argument("--rows", type=int)
    gen.add_argument("--cols", type=int)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out")
    gen.set_defaults(func=cmd_gen)

    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite", choices=tuple(SUITES))
    verify.add_argument("--scope", choices=("small", "default"), default="default")
    verify.add_argument("--mechanism", choices=MECHANISMS)
    verify.add_argument("--workers", type=_positive, default=1)
    common(verify)
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"locmech: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InputError, GraphFormatError) as exc:
        print(f"locmech: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (MonotonicityError, BoundViolation, CongestionError) as exc:
        print(f"locmech: violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except NonTerminationError as exc:
        print(f"locmech: nontermination: {exc}", file=sys.stderr)
        return EXIT_NONTERMINATION
    except ValueError as exc:
        print(f"locmech: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
