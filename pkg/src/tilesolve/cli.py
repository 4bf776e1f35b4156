"""Command-line front end.

Subcommands: solve, gen (random | signed | mopgraph | fixtures), hist,
bench, grid, mop.  All results are deterministic given flags and seeds;
wall-clock fields are informational.  Exit codes: 0 success, 1 usage
error, 2 data error (bad file, schema violation, capacity refusal).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, NoReturn, Sequence

from .experiments import run_grid, run_histogram, run_solver_comparison
from .fixtures import fixture_instances, fixture_programs
from .generate import (
    RandomModelParams,
    gen_random_instance,
    random_plain_graph,
    random_signed_graph,
    signed_graph_program,
)
from .memory import canonical_order, cutwidth_program, lifespan_profile, min_residency_order
from .model import (
    Program,
    TilingError,
    TilingInstance,
    build_antichain_instance,
    build_instance,
    load_program,
    program_to_json,
    rename_single_assignment,
)
from .solvers import (
    GreedyParams,
    solve_exhaustive,
    solve_greedy,
    solve_local,
    solve_random,
    solve_transpose_forest,
)

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; this front end reserves 2
    for data errors, so usage problems exit 1 instead."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one value")
    return values


def _float_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one value")
    return values


def _emit(text: str, output: str | None) -> None:
    if output is None:
        print(text)
    else:
        Path(output).write_text(text + "\n", encoding="utf-8")


def _load(path: str) -> tuple[Program, dict[str, Any]]:
    return load_program(Path(path).read_text(encoding="utf-8"))


def _instance_from(program: Program, meta: dict[str, Any]) -> TilingInstance:
    if meta.get("antichain"):
        return build_antichain_instance(program)
    return build_instance(rename_single_assignment(program))


def _add_greedy_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=int, default=10, help="exhaustive-fallback threshold")
    p.add_argument("--beta", type=int, default=3, help="greedy bucket size")
    p.add_argument("--eta", type=float, default=0.5, help="greedy priority cutoff in [0,1]")


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=10, help="vertex count")
    p.add_argument("--m", type=int, default=50, help="edge count")
    p.add_argument("--k", type=int, default=3, help="edge arity")
    p.add_argument("--tau", type=int, default=3, help="alphabet size")
    p.add_argument("--s", type=int, default=3, help="feasible tuples per edge")


def _graph_meta(kind: str, seed: int, vertices, edges) -> dict[str, Any]:
    return {
        "generator": kind,
        "seed": seed,
        "graph": {"vertices": list(vertices), "edges": [list(e) for e in edges]},
    }


def _cmd_solve(args: argparse.Namespace) -> int:
    program, meta = _load(args.input)
    if args.solver == "forest":
        report = solve_transpose_forest(
            program if meta.get("antichain") else rename_single_assignment(program)
        )
    else:
        instance = _instance_from(program, meta)
        if args.solver == "local":
            report = solve_local(instance)
        elif args.solver == "exhaustive":
            report = solve_exhaustive(instance, args.state_cap)
        elif args.solver == "random":
            report = solve_random(instance, args.seed)
        else:
            params = GreedyParams(
                alpha=args.alpha, beta=args.beta, eta=args.eta, seed=args.seed
            )
            report = solve_greedy(instance, params, args.state_cap)
    _emit(json.dumps(report.to_json(), indent=2), args.output)
    return 0


def _cmd_gen(args: argparse.Namespace) -> int:
    if args.kind == "random":
        params = RandomModelParams(
            n=args.n, m=args.m, k=args.k, tau=args.tau, s=args.s, seed=args.seed
        )
        instance = gen_random_instance(params)
        meta = {"generator": "random", "antichain": True, "params": params.to_json()}
        doc = program_to_json(instance.program, meta)
    elif args.kind == "signed":
        graph = random_signed_graph(args.n, args.m, args.seed)
        meta = _graph_meta("signed", args.seed, graph.vertices, graph.edges)
        meta["antichain"] = True
        doc = program_to_json(signed_graph_program(graph), meta)
    elif args.kind == "mopgraph":
        graph = random_plain_graph(args.n, args.m, args.seed)
        meta = _graph_meta("mopgraph", args.seed, graph.vertices, graph.edges)
        doc = program_to_json(cutwidth_program(graph), meta)
    else:  # fixtures
        if args.output is not None:
            out_dir = Path(args.output)
            out_dir.mkdir(parents=True, exist_ok=True)
            for name, program in fixture_programs():
                path = out_dir / f"{name}.json"
                doc = program_to_json(program, {"generator": "fixture", "name": name})
                path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
                print(path)
            return 0
        docs = {
            name: program_to_json(program, {"generator": "fixture", "name": name})
            for name, program in fixture_programs()
        }
        print(json.dumps(docs, indent=2))
        return 0
    _emit(json.dumps(doc, indent=2), args.output)
    return 0


def _cmd_hist(args: argparse.Namespace) -> int:
    params = RandomModelParams(
        n=args.n, m=args.m, k=args.k, tau=args.tau, s=args.s, seed=args.seed
    )
    result = run_histogram(params, args.trials)
    _emit(json.dumps(result.to_json(), indent=2), args.output)
    return 0


def _named_instances(paths: Sequence[str] | None) -> list[tuple[str, TilingInstance]]:
    if not paths:
        return fixture_instances()
    entries = []
    for p in paths:
        program, meta = _load(p)
        entries.append((Path(p).stem, _instance_from(program, meta)))
    return entries


def _cmd_bench(args: argparse.Namespace) -> int:
    params = GreedyParams(alpha=args.alpha, beta=args.beta, eta=args.eta, seed=args.seed)
    table = run_solver_comparison(_named_instances(args.input), params, args.state_cap)
    text = table.to_csv()
    if args.output is None:
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text, encoding="utf-8")
    return 0


def _cmd_grid(args: argparse.Namespace) -> int:
    result = run_grid(
        _named_instances(args.input),
        beta_values=args.beta,
        eta_values=args.eta,
        alpha=args.alpha,
        seed=args.seed,
        state_cap=args.state_cap,
    )
    _emit(json.dumps(result.to_json(), indent=2), args.output)
    return 0


def _cmd_mop(args: argparse.Namespace) -> int:
    program, meta = _load(args.input)
    if meta.get("antichain"):
        raise TilingError(
            "memory analysis needs a dataflow program; this document is tagged "
            "meta.antichain (no dependency order)"
        )
    program = rename_single_assignment(program)
    if args.exhaustive:
        profile = min_residency_order(program)
    else:
        profile = lifespan_profile(program, canonical_order(program))
    _emit(json.dumps(profile.to_json(), indent=2), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tilesolve", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve one program document")
    p.add_argument("--input", required=True, help="program JSON path")
    p.add_argument(
        "--solver",
        choices=("local", "exhaustive", "random", "greedy", "forest"),
        default="greedy",
    )
    _add_greedy_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--state-cap", type=int, default=None)
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_solve)

    g = sub.add_parser("gen", help="generate program documents")
    gsub = g.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    gr = gsub.add_parser("random", help="random hypergraph ensemble instance")
    _add_model_flags(gr)
    gr.add_argument("--seed", type=int, default=0)
    gr.add_argument("--output", default=None)
    gr.set_defaults(func=_cmd_gen)
    gs = gsub.add_parser("signed", help="signed-graph balance instance")
    gs.add_argument("--n", type=int, default=6, help="graph vertices")
    gs.add_argument("--m", type=int, default=7, help="graph edges")
    gs.add_argument("--seed", type=int, default=0)
    gs.add_argument("--output", default=None)
    gs.set_defaults(func=_cmd_gen)
    gm = gsub.add_parser("mopgraph", help="memory/cutwidth reduction instance")
    gm.add_argument("--n", type=int, default=4, help="graph vertices")
    gm.add_argument("--m", type=int, default=4, help="graph edges")
    gm.add_argument("--seed", type=int, default=0)
    gm.add_argument("--output", default=None)
    gm.set_defaults(func=_cmd_gen)
    gf = gsub.add_parser("fixtures", help="the five reference programs")
    gf.add_argument("--output", default=None, help="directory for <name>.json files")
    gf.set_defaults(func=_cmd_gen)

    p = sub.add_parser("hist", help="cost histogram over random labelings")
    _add_model_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_hist)

    p = sub.add_parser("bench", help="local/exhaustive/greedy comparison CSV")
    p.add_argument("--input", nargs="*", default=None, help="program paths (default: fixtures)")
    _add_greedy_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--state-cap", type=int, default=None)
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("grid", help="greedy beta x eta sweep")
    p.add_argument("--input", nargs="*", default=None, help="program paths (default: fixtures)")
    p.add_argument("--beta", type=_int_list, default=(1, 2, 4, 8), help="comma-separated")
    p.add_argument("--eta", type=_float_list, default=(0.0, 0.5, 0.9), help="comma-separated")
    p.add_argument("--alpha", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--state-cap", type=int, default=None)
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_grid)

    p = sub.add_parser("mop", help="matrix lifespan / peak-residency report")
    p.add_argument("--input", required=True, help="program JSON path")
    p.add_argument(
        "--exhaustive",
        action="store_true",
        help="search all execution orders for the minimum residency",
    )
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_mop)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TilingError as exc:
        print(f"tilesolve: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"tilesolve: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
