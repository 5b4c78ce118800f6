"""Command-line interface.

Subcommands: gen, validate, decompose, find-triple, irrelevant,
check-containment, check-immersion, pi-kv, verify, and oracle mirrors.
Exit codes: 0 decided, 2 input error, 3 threshold or budget exhaustion.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import fileio
from .digraph import (
    PatternDigraph,
    RootedHost,
    SemiCompleteDigraph,
    gen_counterexample,
    gen_random_tournament,
    gen_transitive,
    validate_class,
)
from .errors import BudgetExceededError, CertificationError, InputFormatError, ThresholdError
from .dp import DEFAULT_STATE_BUDGET, dp_rooted_immersion, dp_topological_containment, verify_model
from .irrelevant import check_answer_preserved, find_irrelevant_vertex
from .oracles import brute_force_containment, brute_force_vdp, exact_cutwidth, exact_pathwidth
from .pathwidth import (
    PathDecomposition,
    approximate_pathwidth,
    verify_jungle,
    verify_path_decomposition,
)
from .pipeline import solve_pi_kv, solve_rooted_immersion, solve_topological_containment
from .separations import is_separation
from .triples import find_large_triple, triple_from_jungle, verify_triple

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3


def _read(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_host(path) -> SemiCompleteDigraph:
    n, arcs = fileio.parse_digraph(_read(path))
    return SemiCompleteDigraph(n, arcs=arcs)


def _load_pattern(path) -> PatternDigraph:
    return fileio.parse_pattern(_read(path))


def _emit(args, payload: dict, text_lines):
    if getattr(args, "json", False):
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def cmd_gen(args):
    if args.kind == "random":
        if args.seed is None:
            raise InputFormatError("gen random requires --seed for reproducibility")
        D = gen_random_tournament(args.n, args.seed)
    elif args.kind == "transitive":
        D = gen_transitive(args.n)
    else:
        rooted = gen_counterexample(args.n)
        D = rooted.host
        print(fileio.format_digraph(D), end="")
        print(
            "# roots (s1 t1 s2 t2):",
            " ".join(str(r + 1) for r in rooted.roots),
            file=sys.stderr,
        )
        return EXIT_OK
    print(fileio.format_digraph(D), end="")
    return EXIT_OK


def cmd_validate(args):
    n, arcs = fileio.parse_digraph(_read(args.host))
    flags = validate_class(n, arcs)
    payload = {
        "simple": flags.simple,
        "semicomplete": flags.semicomplete,
        "tournament": flags.tournament,
    }
    _emit(args, payload, [f"{k}: {'yes' if v else 'no'}" for k, v in payload.items()])
    return EXIT_OK


def cmd_decompose(args):
    T = _load_host(args.host)
    result = approximate_pathwidth(
        T,
        args.k,
        literal_thresholds=args.literal_thresholds,
        use_shortcut=not args.no_shortcut,
    )
    if result.kind == "decomposition":
        bags = result.decomposition.bags
        if args.json:
            print(
                json.dumps(
                    {
                        "kind": "decomposition",
                        "width": result.decomposition.width,
                        "bags": [sorted(v + 1 for v in bag) for bag in bags],
                    }
                )
            )
        else:
            print("DECOMPOSITION")
            print(fileio.format_decomposition(bags), end="")
    else:
        verts = [v + 1 for v in result.jungle.vertices]
        if args.json:
            print(json.dumps({"kind": "jungle", "k": result.jungle.k, "vertices": verts}))
        else:
            print("JUNGLE")
            print(" ".join(str(v) for v in verts))
    return EXIT_OK


def cmd_find_triple(args):
    T = _load_host(args.host)
    ext = triple_from_jungle(T, range(T.n), args.k, opportunistic=args.opportunistic)
    triple = ext.triple
    if triple is None and args.opportunistic:
        triple = find_large_triple(T, args.k)
    if triple is None:
        print(f"NO TRIPLE ({ext.reason})")
        return EXIT_BUDGET
    if args.json:
        print(
            json.dumps(
                {
                    "a": [v + 1 for v in triple.a],
                    "b": [v + 1 for v in triple.b],
                    "c": [v + 1 for v in triple.c],
                }
            )
        )
    else:
        print(fileio.format_triple(triple), end="")
    return EXIT_OK


def cmd_irrelevant(args):
    T = _load_host(args.host)
    H = _load_pattern(args.pattern)
    parts = fileio.parse_triple_parts(_read(args.triple), T.n)
    triple = verify_triple(T, *parts)
    if triple is None:
        print("triple file does not verify", file=sys.stderr)
        return EXIT_INPUT
    roots = tuple(r - 1 for r in args.roots)
    rooted = RootedHost(T, roots)
    report = find_irrelevant_vertex(
        H, rooted, triple, k=args.k, opportunistic=args.opportunistic
    )
    payload = {
        "x": report.x + 1,
        "phase1": report.phase1_branch,
        "phase2": report.phase2_branch,
        "X_size": len(report.X),
        "thresholds": report.thresholds,
    }
    _emit(
        args,
        payload,
        [
            f"irrelevant vertex: {report.x + 1}",
            f"phase 1 branch: {report.phase1_branch} (|X| = {len(report.X)})",
            f"phase 2 branch: {report.phase2_branch}",
        ],
    )
    return EXIT_OK


def _containment_common(args, rooted: bool):
    T = _load_host(args.host)
    H = _load_pattern(args.pattern)
    if args.decomposition:
        bags = fileio.parse_decomposition(_read(args.decomposition), T.n)
        dec = PathDecomposition(bags)
        if rooted:
            host_roots = tuple(r - 1 for r in args.roots) if args.roots else ()
            ans, model = dp_rooted_immersion(
                H, T, dec, host_roots=host_roots, budget=args.budget, want_witness=True
            )
        else:
            ans, model = dp_topological_containment(
                H, T, dec, budget=args.budget, want_witness=True
            )
        report_notes = ()
    else:
        if rooted:
            host_roots = tuple(r - 1 for r in args.roots) if args.roots else ()
            report = solve_rooted_immersion(
                H, RootedHost(T, host_roots), profile=args.profile, budget=args.budget
            )
        else:
            report = solve_topological_containment(
                H, T, profile=args.profile, budget=args.budget
            )
        if not report.decided:
            print("UNDECIDED (budget exhausted)")
            for note in report.notes:
                print(f"# {note}")
            return EXIT_BUDGET
        ans = report.answer
        model = report.certificate.get("model")
        report_notes = report.notes
    print("YES" if ans else "NO")
    for note in report_notes:
        print(f"# {note}")
    if ans and args.witness and model is not None:
        print("MODEL")
        for u in sorted(model.vertex_map):
            print(f"vertex {u + 1} -> {model.vertex_map[u] + 1}")
        for idx, path in enumerate(model.edge_paths):
            print(f"edge {idx + 1}: " + " ".join(str(v + 1) for v in path))
    return EXIT_OK


def cmd_check_containment(args):
    return _containment_common(args, rooted=False)


def cmd_check_immersion(args):
    return _containment_common(args, rooted=args.rooted)


def cmd_pi_kv(args):
    T = _load_host(args.host)
    obstructions = [_load_pattern(p) for p in args.obstruction]
    report = solve_pi_kv(T, args.k, obstructions, c_pi=args.c_pi, budget=args.budget)
    print("YES" if report.answer else "NO")
    if report.answer and "deleted" in report.certificate:
        deleted = report.certificate["deleted"]
        print("deleted:", " ".join(str(v + 1) for v in deleted) or "(none)")
    return EXIT_OK


def cmd_verify(args):
    T = _load_host(args.host)
    if args.what == "decomposition":
        bags = fileio.parse_decomposition(_read(args.file), T.n)
        ok, width = verify_path_decomposition(T, bags)
        print(f"{'VALID' if ok else 'INVALID'} width={width}")
    elif args.what == "jungle":
        verts = [int(t) - 1 for t in args.vertices.split()]
        ok = verify_jungle(T, verts, len(verts))
        print("VALID" if ok else "INVALID")
    elif args.what == "triple":
        parts = fileio.parse_triple_parts(_read(args.file), T.n)
        triple = verify_triple(T, *parts)
        print("VALID" if triple is not None else "INVALID")
    else:  # separation
        sep = fileio.parse_separation(args.separation, T.n)
        ok, order = is_separation(T, sep)
        print(f"{'VALID' if ok else 'INVALID'} order={order}")
    return EXIT_OK


def cmd_oracle(args):
    T = _load_host(args.host)
    if args.which == "pathwidth":
        value = exact_pathwidth(T)
        print(f"pathwidth {value}")
        if args.compare:
            result = approximate_pathwidth(T, max(1, value))
            kind = result.kind
            width = result.decomposition.width if result.decomposition else None
            print(f"approximation: {kind} width={width}")
    elif args.which == "cutwidth":
        value = exact_cutwidth(T)
        print(f"cutwidth {value}")
    elif args.which == "containment":
        H = _load_pattern(args.pattern)
        ans = brute_force_containment(H, T, args.mode, host_roots=tuple(
            r - 1 for r in args.roots
        ) if args.roots else ())
        print("YES" if ans else "NO")
        if args.compare:
            if args.mode == "topological":
                rep = solve_topological_containment(H, T)
            else:
                host_roots = tuple(r - 1 for r in args.roots) if args.roots else ()
                rep = solve_rooted_immersion(H, RootedHost(T, host_roots))
            agree = rep.decided and rep.answer == ans
            print(f"solver: {'agrees' if agree else 'DISAGREES'}")
            if not agree:
                return EXIT_BUDGET
    else:  # vdp
        pairs_flat = [int(t) - 1 for t in args.pairs.split()]
        if len(pairs_flat) % 2:
            raise InputFormatError("--pairs needs an even number of vertices")
        pairs = list(zip(pairs_flat[::2], pairs_flat[1::2]))
        sols = brute_force_vdp(T, pairs)
        print(f"solutions {len(sols)}")
        for sol in sols[: args.limit]:
            for i, path in enumerate(sol):
                print(f"path {i + 1}: " + " ".join(str(v + 1) for v in path))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="semicomplete",
        description=(
            "Pathwidth approximation, obstruction certificates, and containment "
            "solvers for semi-complete digraphs"
        ),
    )
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument(
        "--budget", type=int, default=DEFAULT_STATE_BUDGET, help="DP state budget"
    )
    parser.add_argument(
        "--profile",
        choices=["theoretical", "opportunistic"],
        default="opportunistic",
        help="threshold profile for obstruction extraction",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate hosts")
    p.add_argument("kind", choices=["random", "transitive", "counterexample"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("validate", help="classify a raw digraph file")
    p.add_argument("host")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("decompose", help="pathwidth approximation certificate")
    p.add_argument("host")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--literal-thresholds", action="store_true")
    p.add_argument("--no-shortcut", action="store_true")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("find-triple", help="search for a k-triple")
    p.add_argument("host")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--opportunistic", action="store_true")
    p.set_defaults(func=cmd_find_triple)

    p = sub.add_parser("irrelevant", help="irrelevant vertex in a triple")
    p.add_argument("--pattern", required=True)
    p.add_argument("--host", required=True)
    p.add_argument("--triple", required=True)
    p.add_argument("--roots", type=int, nargs="+", required=True, help="1-based root images")
    p.add_argument("--k", type=int, default=None, help="rerouting parameter")
    p.add_argument(
        "--opportunistic",
        action="store_true",
        help="run below p(k) with assertions downgraded; no preservation guarantee",
    )
    p.set_defaults(func=cmd_irrelevant)

    p = sub.add_parser("check-containment", help="topological containment")
    p.add_argument("--pattern", required=True)
    p.add_argument("--host", required=True)
    p.add_argument("--decomposition")
    p.add_argument("--witness", action="store_true")
    p.set_defaults(func=cmd_check_containment)

    p = sub.add_parser("check-immersion", help="(rooted) immersion")
    p.add_argument("--pattern", required=True)
    p.add_argument("--host", required=True)
    p.add_argument("--decomposition")
    p.add_argument("--rooted", action="store_true")
    p.add_argument("--roots", type=int, nargs="*", help="1-based root images")
    p.add_argument("--witness", action="store_true")
    p.set_defaults(func=cmd_check_immersion)

    p = sub.add_parser(
        "pi-kv",
        help="vertex deletion to an immersion-closed class (brute-force search "
        "over deletion sets; the obstruction family must be explicit)",
    )
    p.add_argument("--host", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--obstruction", action="append", required=True)
    p.add_argument("--c-pi", type=int, default=None, dest="c_pi")
    p.set_defaults(func=cmd_pi_kv)

    p = sub.add_parser("verify", help="re-check a certificate")
    p.add_argument("what", choices=["decomposition", "jungle", "triple", "separation"])
    p.add_argument("--host", required=True)
    p.add_argument("--file")
    p.add_argument("--vertices", help="jungle vertices, 1-based")
    p.add_argument("--separation", help="'A: 1 2 | B: 3' text form")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="brute-force reference computations")
    p.add_argument("which", choices=["pathwidth", "cutwidth", "containment", "vdp"])
    p.add_argument("--host", required=True)
    p.add_argument("--pattern")
    p.add_argument("--mode", choices=["topological", "immersion", "rooted-immersion"],
                   default="topological")
    p.add_argument("--roots", type=int, nargs="*")
    p.add_argument("--pairs", help="flattened 1-based pairs: 's1 t1 s2 t2 ...'")
    p.add_argument("--limit", type=int, default=4)
    p.add_argument("--compare", action="store_true")
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputFormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (BudgetExceededError, ThresholdError) as exc:
        print(f"budget/threshold: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CertificationError as exc:
        print(f"certification failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
