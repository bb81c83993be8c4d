import argparse
import logging
import os
import random
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
from prettytable import PrettyTable
from pydantic import ValidationError

from agents.andersen_agent import apa_fixpoint, apa_on_demand, apa_word_check, parse_apa_word, validate_apa_instance
from agents.bench_agent import parse_plan, run_bench, summary_table, write_csv, write_gnuplot
from agents.grammar_agent import load_grammar, to_cnf, to_proper
from agents.oracle_agent import (MAX_PATH_LENGTH, bar_hillel_all_pairs, bar_hillel_reachability, brute_kclique,
                                 brute_kcycle, brute_triangle, cyk, enumerate_paths)
from agents.reduction_agent import GENERATORS, ReductionAgent, ReductionConfig
from agents.solver_agent import STRATEGIES, SolverAgent, SolverConfig
from agents.transform_agent import parse_homomorphism
from models.grammar_models import Grammar, render_word
from models.graph_models import SourceGraph
from utils.errors import CflLabError, ReductionInputError
from utils.grammar_dsl import serialize_grammar
from utils.graph_io import (parse_matrix, read_graph, read_instance_bundle, read_source_graph, serialize_pairs,
                            write_instance_bundle)
from utils.random_graphs import random_graph, random_kpartite_digraph, random_labeled_graph, random_tripartite
from utils.settings import LabSettings, load_settings

EXIT_OK, EXIT_UNREACHABLE, EXIT_ERROR = 0, 1, 2


def progress(message: str) -> None:
    """Human progress lines go to stderr; stdout carries results only."""
    print(message, file=sys.stderr)


def verdict(value: bool, yes: str = "reachable", no: str = "unreachable") -> int:
    print(yes if value else no)
    return EXIT_OK if value else EXIT_UNREACHABLE


def split_word(text: str, g: Grammar) -> List[str]:
    """Whitespace-separated labels; a single token over one-character terminals is read letter by letter."""
    tokens = text.split()
    if len(tokens) == 1 and all(len(t) == 1 for t in g.terminals):
        return list(tokens[0])
    return tokens


# -- subcommands -----------------------------------------------------------------

def cmd_classify(args: argparse.Namespace, settings: LabSettings) -> int:
    g = load_grammar(args.grammar)
    agent = SolverAgent(SolverConfig())
    print(agent.explain(g))
    if args.explain:
        cnf = to_cnf(g)
        table = PrettyTable(["head", "body"])
        for p in cnf.productions:
            table.add_row([p.head, " ".join(str(s) for s in p.body) or "eps"])
        print(table)
    return EXIT_OK


def cmd_normalize(args: argparse.Namespace, settings: LabSettings) -> int:
    g = load_grammar(args.grammar)
    normal = to_cnf(g) if args.form == "cnf" else to_proper(g)
    print(serialize_grammar(normal), end="")
    return EXIT_OK


def cmd_solve(args: argparse.Namespace, settings: LabSettings) -> int:
    g = load_grammar(args.grammar)
    graph = read_graph(args.graph)
    agent = SolverAgent(SolverConfig(strategy=args.strategy))
    if args.explain:
        progress(agent.explain(g, graph, on_demand_query=args.pair is not None))
    if args.pair:
        s, t = args.pair
        result = agent.on_demand(g, graph, s, t)
        progress(f"🔎 strategy {agent.last_strategy}")
        return verdict(result)

    pairs = agent.all_pairs(g, graph)
    progress(f"🔎 strategy {agent.last_strategy}: {len(pairs)} pairs")
    text = serialize_pairs(pairs, graph)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        progress(f"✅ pairs written to {args.out}")
    else:
        print(text, end="")
    return EXIT_OK


def _source_graph(args: argparse.Namespace, rng: random.Random) -> SourceGraph:
    if args.input:
        return read_source_graph(args.input)
    if args.random is None:
        raise ReductionInputError(f"{args.generator} needs --in <file> or --random <n>")
    if args.generator in ("triangle-dyck1", "variant"):
        return random_tripartite(rng, args.random, args.density, plant_triangle=args.plant)
    if args.generator == "kcycle":
        return random_kpartite_digraph(rng, args.k, args.random, args.density, plant_cycle=args.plant)
    return random_graph(rng, args.random, args.density, plant_clique=3 * args.k if args.plant else None)


def _random_matrix(rng: random.Random, n: int, density: float) -> np.ndarray:
    return np.array([[rng.random() < density for _ in range(n)] for _ in range(n)], dtype=bool)


def cmd_reduce(args: argparse.Namespace, settings: LabSettings) -> int:
    seed = settings.seed if args.seed is None else args.seed
    rng = random.Random(seed)
    config = ReductionConfig(k=args.k, target=args.target, grammar=args.grammar, verify=args.verify)
    agent = ReductionAgent(config=config)
    progress(f"\n🛠️ Reduction {args.generator} (k={args.k}, seed={seed})...")

    kwargs = {}
    if args.generator in ("triangle-dyck1", "variant", "kcycle", "kclique-dyck2", "apa-clique"):
        kwargs["source"] = _source_graph(args, rng)
    elif args.generator == "bmm":
        if args.matrix_a and args.matrix_b:
            kwargs["matrices"] = (parse_matrix(Path(args.matrix_a).read_text(encoding="utf-8")),
                                  parse_matrix(Path(args.matrix_b).read_text(encoding="utf-8")))
        elif args.random is not None:
            kwargs["matrices"] = (_random_matrix(rng, args.random, args.density),
                                  _random_matrix(rng, args.random, args.density))
        else:
            raise ReductionInputError("bmm needs --matrix-a/--matrix-b or --random <n>")
    elif args.generator == "worst-case":
        kwargs["n"] = args.n if args.n is not None else args.random
    else:
        hom = parse_homomorphism(args.hom) if args.hom else None
        if args.graph:
            graph = read_graph(args.graph)
        elif args.random is not None:
            labels = sorted(hom) if hom else sorted(to_cnf(load_grammar(args.grammar)).terminals)
            graph = random_labeled_graph(rng, args.random, labels or ["a"], args.density)
        else:
            raise ReductionInputError(f"{args.generator} needs --graph <file> or --random <n>")
        kwargs.update(graph=graph, symbol=args.symbol, hom=hom)

    instance = agent.generate(args.generator, **kwargs)
    out_dir = args.out or os.path.join(settings.out_dir, args.generator)
    write_instance_bundle(instance, out_dir, agent.grammar_text(instance))
    progress(f"✅ Instance written: n={instance.graph.n} m={instance.graph.m}")
    print(out_dir)

    if instance.ground_truth is not None:
        progress("🔎 Checking the solver against the oracle...")
        if not agent.check(instance):
            progress("❌ Solver and oracle disagree")
            return EXIT_ERROR
        progress(f"✅ Solver agrees with the oracle (truth: {_truth_text(instance.ground_truth)})")
    return EXIT_OK


def _truth_text(truth) -> str:
    if isinstance(truth, bool):
        return str(truth).lower()
    return f"{len(truth)} pairs"


def cmd_oracle(args: argparse.Namespace, settings: LabSettings) -> int:
    check = args.check
    if check == "cyk":
        g = load_grammar(args.grammar)
        return verdict(cyk(to_cnf(g), split_word(args.word, g)), "accepted", "rejected")
    if check == "bar-hillel":
        cnf = to_cnf(load_grammar(args.grammar))
        graph = read_graph(args.graph)
        if args.pair:
            return verdict(bar_hillel_reachability(cnf, graph, *args.pair))
        print(serialize_pairs(bar_hillel_all_pairs(cnf, graph), graph), end="")
        return EXIT_OK
    if check == "paths":
        graph = read_graph(args.graph)
        if not args.pair:
            raise ReductionInputError("paths needs --pair s t")
        for word in sorted(enumerate_paths(graph, args.pair[0], args.pair[1], args.maxlen), key=lambda w: (len(w), w)):
            print(render_word(word) or "eps")
        return EXIT_OK
    if check == "triangle":
        return verdict(brute_triangle(read_source_graph(args.input)), "found", "none")
    if check == "clique":
        return verdict(brute_kclique(read_source_graph(args.input), args.size), "found", "none")
    if check == "cycle":
        return verdict(brute_kcycle(read_source_graph(args.input), args.k), "found", "none")

    instance = read_instance_bundle(args.bundle)
    agent = ReductionAgent(config=ReductionConfig())
    got = agent.answer(instance)
    table = PrettyTable(["generator", "preset", "n", "m", "oracle", "solver", "agree"])
    agree = None if instance.ground_truth is None else agent.check(instance)
    table.add_row([instance.generator, instance.grammar_preset, instance.graph.n, instance.graph.m,
                   "-" if instance.ground_truth is None else _truth_text(instance.ground_truth),
                   _truth_text(got), "-" if agree is None else str(agree).lower()])
    print(table)
    return EXIT_ERROR if agree is False else EXIT_OK


def cmd_apa(args: argparse.Namespace, settings: LabSettings) -> int:
    if args.word:
        return verdict(apa_word_check(parse_apa_word(args.word)), "accepted", "rejected")
    if not args.graph:
        raise ReductionInputError("apa needs --graph <file> or --word <text>")
    graph = validate_apa_instance(read_graph(args.graph))
    if args.pair:
        return verdict(apa_on_demand(graph, *args.pair))
    relation = apa_fixpoint(graph)
    progress(f"🔎 {len(relation)} points-to facts")
    for x, y in relation:
        print(f"{graph.name_of(x)} {graph.name_of(y)}")
    return EXIT_OK


def cmd_bench(args: argparse.Namespace, settings: LabSettings) -> int:
    plan = parse_plan(Path(args.plan).read_text(encoding="utf-8"))
    progress(f"\n⏱️ Benchmark {plan.family} over {list(plan.ladder)}...")
    result = run_bench(plan)
    out_dir = args.out or os.path.join(settings.out_dir, "bench")
    csv_path = write_csv(result, os.path.join(out_dir, f"{plan.family}.csv"))
    write_gnuplot(result, out_dir)
    print(summary_table(result))
    if result.slope is not None:
        print(f"slope={result.slope:.3f} residual={result.residual:.3f}")
    else:
        progress("⚠️ Fewer than four completed sizes: no slope fitted")
    progress(f"✅ CSV written to {csv_path}")
    return EXIT_OK


# -- argument parsing --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", action="store_true", help="debug logging on stderr")

    parser = argparse.ArgumentParser(prog="cfl-lab", description="CFL-reachability engine and reduction lab")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="join-inducing dichotomy and grammar classes")
    p.add_argument("--grammar", required=True, help="grammar file or preset")
    p.add_argument("--explain", action="store_true", help="also print the CNF productions")
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("normalize", parents=[common], help="print the proper or CNF grammar")
    p.add_argument("--grammar", required=True)
    p.add_argument("--form", choices=["proper", "cnf"], default="cnf")
    p.set_defaults(handler=cmd_normalize)

    p = sub.add_parser("solve", parents=[common], help="All-Pairs or On-Demand CFL reachability")
    p.add_argument("--grammar", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--pair", nargs=2, metavar=("S", "T"))
    p.add_argument("--strategy", choices=STRATEGIES, default="auto")
    p.add_argument("--explain", action="store_true")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("reduce", parents=[common], help="generate a reduction instance bundle")
    p.add_argument("generator", choices=GENERATORS)
    p.add_argument("--in", dest="input", help="source graph file")
    p.add_argument("--random", type=int, metavar="N", help="random source of size N")
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--plant", action="store_true", help="plant a triangle, cycle or 3k-clique")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--n", type=int, help="layer size for worst-case")
    p.add_argument("--seed", type=int)
    p.add_argument("--verify", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--target", default="dyck:1", help="target language of kcycle / variant")
    p.add_argument("--grammar", default="dyck:1", help="grammar of bmm, worst-case and the transforms")
    p.add_argument("--matrix-a")
    p.add_argument("--matrix-b")
    p.add_argument("--graph", help="labeled input graph of right-quotient / inverse-hom")
    p.add_argument("--symbol", help="quotient terminal")
    p.add_argument("--hom", help="label images, e.g. 'a=ad,b=b'")
    p.add_argument("--out", help="bundle directory")
    p.set_defaults(handler=cmd_reduce)

    p = sub.add_parser("oracle", parents=[common], help="brute-force reference checks")
    p.add_argument("check", choices=["cyk", "bar-hillel", "paths", "triangle", "clique", "cycle", "verify"])
    p.add_argument("--grammar")
    p.add_argument("--graph")
    p.add_argument("--word", default="")
    p.add_argument("--pair", nargs=2, metavar=("S", "T"))
    p.add_argument("--maxlen", type=int, default=8)
    p.add_argument("--in", dest="input")
    p.add_argument("--size", type=int, default=3)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--bundle", help="instance bundle directory")
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser("apa", parents=[common], help="Andersen-style points-to fixpoint")
    p.add_argument("--graph")
    p.add_argument("--pair", nargs=2, metavar=("P", "Q"))
    p.add_argument("--word")
    p.set_defaults(handler=cmd_apa)

    p = sub.add_parser("bench", parents=[common], help="run a scaling plan")
    p.add_argument("--plan", required=True)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_bench)
    return parser


def _check_conflicts(args: argparse.Namespace) -> None:
    if args.command == "reduce":
        if args.input and args.random is not None:
            raise ReductionInputError("--in and --random are mutually exclusive")
        if bool(args.matrix_a) != bool(args.matrix_b):
            raise ReductionInputError("--matrix-a and --matrix-b go together")
    if args.command == "oracle":
        needs = {"cyk": ("grammar",), "bar-hillel": ("grammar", "graph"), "paths": ("graph",),
                 "triangle": ("input",), "clique": ("input",), "cycle": ("input",), "verify": ("bundle",)}
        missing = [name for name in needs[args.check] if not getattr(args, name)]
        if missing:
            raise ReductionInputError(f"oracle {args.check} needs --{missing[0].replace('input', 'in')}")
        if args.check == "paths" and args.maxlen > MAX_PATH_LENGTH:
            raise ReductionInputError(f"--maxlen is limited to {MAX_PATH_LENGTH}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_ERROR

    try:
        settings = load_settings()
    except ValidationError as e:
        progress(f"❌ invalid environment settings: {e}")
        return EXIT_ERROR
    logging.basicConfig(level=logging.DEBUG if args.verbose else settings.log_level,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)

    try:
        _check_conflicts(args)
        return args.handler(args, settings)
    except (CflLabError, ValidationError, OSError, KeyError) as e:
        progress(f"❌ {e}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
