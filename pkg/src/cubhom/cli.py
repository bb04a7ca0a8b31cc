"""Command-line interface. Every command writes one JSON document.

Exit codes: 0 success, 1 domain error, 2 resource cap, 3 failed property
check, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import __version__
from .cellular import (
    build_filled_complex,
    cellular_homology,
    compare_covering_cellular,
    covering_restriction,
    mv_span_check,
)
from .chains import Chain, compute_homology
from .cubes import DEFAULT_MEMORY_BYTES, Restriction, default_cube_cap, enumerate_cubes, validate_cube
from .errors import CubhomError, DomainError, LiftObstruction, ResourceLimitError
from .graph import Graph, graph_from_token, parse_graph
from .linalg import Ring
from .subdivision import Subdivider

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_RESOURCE = 2
EXIT_PROPERTY = 3
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _add_graph_args(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--gen", metavar="TOKEN", help="generator token, e.g. cycle:5 or times:cycle:5:4")
    g.add_argument("--graph", metavar="FILE", help="edge-list file ('n m' header, then 'u v' lines)")


def _add_common(p):
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.add_argument("--pretty", action="store_true", help="print a readable table instead of JSON")
    p.add_argument("--threads", type=int, default=1, help="worker processes for enumeration")
    p.add_argument("--cache-dir", default=None, help="cube basis cache (default $CUBHOM_CACHE_DIR)")
    p.add_argument("--memory-gib", type=float, default=DEFAULT_MEMORY_BYTES / (1 << 30),
                   help="memory budget used to cap basis sizes")
    p.add_argument("--max-cubes", type=int, default=None, help="explicit cap on basis sizes")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cubhom", description="Discrete cubical homology of graphs.")
    parser.add_argument("--version", action="version", version=f"cubhom {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="build a graph and print it")
    _add_graph_args(p)
    _add_common(p)

    p = sub.add_parser("enumerate", help="list non-degenerate singular cubes")
    _add_graph_args(p)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--restriction", default="all", choices=["all", "two_point", "covering"])
    p.add_argument("--count-only", action="store_true")
    _add_common(p)

    p = sub.add_parser("homology", help="homology of the cubical complex")
    _add_graph_args(p)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--ring", default="z", help="z, q or gf:p")
    p.add_argument("--restriction", default="all", choices=["all", "two_point", "covering"])
    p.add_argument("--strategy", default="auto", choices=["auto", "full", "certified"])
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)

    p = sub.add_parser("subdivide", help="apply the subdivision operator to one cube")
    _add_graph_args(p)
    p.add_argument("--cube", required=True, help="comma-separated labels in colex order")
    p.add_argument("--N", type=int, required=True, dest="N")
    _add_common(p)

    p = sub.add_parser("verify-homotopy", help="check the homotopy identity on random cubes")
    _add_graph_args(p)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lifts", default="independent", choices=["independent", "inherited"])
    _add_common(p)

    p = sub.add_parser("compare-covering", help="covering complex versus filled cell complex")
    _add_graph_args(p)
    p.add_argument("--dmax", type=int, default=2)
    p.add_argument("--ring", default="q")
    _add_common(p)

    p = sub.add_parser("cellular", help="cellular homology of the filled 2-complex")
    _add_graph_args(p)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--ring", default="z")
    _add_common(p)

    p = sub.add_parser("mv-check", help="check that no k-cube touches both poles")
    _add_graph_args(p)
    p.add_argument("--k", type=int, required=True)
    _add_common(p)
    return parser


def load_graph(args) -> Graph:
    if args.gen:
        return graph_from_token(args.gen)
    with open(args.graph) as fh:
        return parse_graph(fh.read(), name=os.path.basename(args.graph))


def _restriction(name: str, G: Graph) -> Restriction:
    if name == "covering":
        return covering_restriction(G)
    return Restriction(name)


def _cap(args, d: int) -> int:
    if args.max_cubes is not None:
        return args.max_cubes
    return default_cube_cap(d, int(args.memory_gib * (1 << 30)))


def cmd_gen(args, G):
    doc = {"graph": G.name, "vertex_count": G.vertex_count, "edges": [list(e) for e in G.sorted_edges()]}
    if G.poles is not None:
        doc["poles"] = list(G.poles)
    return doc, EXIT_OK


def cmd_enumerate(args, G):
    r = _restriction(args.restriction, G)
    basis = enumerate_cubes(G, args.dim, r, threads=args.threads, max_cubes=_cap(args, args.dim),
                            cache_dir=args.cache_dir)
    doc = {"graph": G.name, "dim": args.dim, "restriction": args.restriction, "count": len(basis)}
    if not args.count_only:
        doc["cubes"] = [list(c) for c in basis]
    return doc, EXIT_OK


def cmd_homology(args, G):
    res = compute_homology(
        G, args.dim, Ring.parse(args.ring), restriction=_restriction(args.restriction, G),
        strategy=args.strategy, threads=args.threads, max_cubes=_cap(args, args.dim + 1),
        cache_dir=args.cache_dir, seed=args.seed,
    )
    doc = res.to_json()
    doc["restriction"] = args.restriction
    return doc, EXIT_OK


def _parse_cube(text: str, G: Graph):
    try:
        labels = [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise DomainError(f"bad cube {text!r}") from None
    size = len(labels)
    if size == 0 or size & (size - 1):
        raise DomainError(f"a cube needs a power-of-two number of labels, got {size}")
    return validate_cube(labels, size.bit_length() - 1, G)


def cmd_subdivide(args, G):
    cube = _parse_cube(args.cube, G)
    if args.N < 1:
        raise DomainError("N must be positive")
    chain = Subdivider(G).subdivide(Chain.of(cube), args.N)
    return {"graph": G.name, "cube": list(cube), "N": args.N, "chain": chain.to_json()}, EXIT_OK


def cmd_verify(args, G):
    if args.dim < 1:
        raise DomainError("the homotopy identity needs dim >= 1")
    cubes = enumerate_cubes(G, args.dim, max_cubes=_cap(args, args.dim), threads=args.threads,
                            cache_dir=args.cache_dir).cubes
    rng = random.Random(args.seed)
    sample = cubes if len(cubes) <= args.samples else sorted(rng.sample(cubes, args.samples))
    sub = Subdivider(G)
    failures = []
    for cube in sample:
        res = sub.residual(cube, args.lifts)
        if res:
            failures.append({"cube": list(cube), "residual": res.to_json()})
    doc = {
        "graph": G.name,
        "dim": args.dim,
        "lifts": args.lifts,
        "seed": args.seed,
        "checked": len(sample),
        "failures": len(failures),
        "passed": not failures,
        "counterexample": failures[0] if failures else None,
    }
    return doc, EXIT_OK if not failures else EXIT_PROPERTY


def cmd_compare(args, G):
    doc = compare_covering_cellular(G, args.dmax, Ring.parse(args.ring), threads=args.threads,
                         max_cubes=_cap(args, args.dmax + 1), cache_dir=args.cache_dir)
    return doc, EXIT_OK if doc["all_match"] else EXIT_PROPERTY


def cmd_cellular(args, G):
    res = cellular_homology(build_filled_complex(G), args.dim, Ring.parse(args.ring))
    res.graph = G.name
    return res.to_json(), EXIT_OK


def cmd_mv(args, G):
    ok = mv_span_check(G, args.k, max_cubes=_cap(args, args.k), threads=args.threads,
                       cache_dir=args.cache_dir)
    return {"graph": G.name, "k": args.k, "poles": list(G.poles), "result": ok}, (
        EXIT_OK if ok else EXIT_PROPERTY
    )


COMMANDS = {
    "gen": cmd_gen,
    "enumerate": cmd_enumerate,
    "homology": cmd_homology,
    "subdivide": cmd_subdivide,
    "verify-homotopy": cmd_verify,
    "compare-covering": cmd_compare,
    "cellular": cmd_cellular,
    "mv-check": cmd_mv,
}


def render_pretty(doc) -> str:
    """Two-column table of the top-level fields; nested values are inlined."""
    lines = []
    if isinstance(doc, dict):
        width = max((len(k) for k in doc), default=0)
        for k, v in doc.items():
            if isinstance(v, list) and v and isinstance(v[0], dict):
                lines.append(f"{k}:")
                for item in v:
                    lines.append("  " + "  ".join(f"{ik}={json.dumps(iv)}" for ik, iv in item.items()))
            else:
                lines.append(f"{k.ljust(width)}  {json.dumps(v) if not isinstance(v, str) else v}")
    else:
        lines.append(json.dumps(doc))
    return "\n".join(lines) + "\n"


def _emit(doc, args, stream):
    text = render_pretty(doc) if getattr(args, "pretty", False) else json.dumps(doc, sort_keys=True) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        stream.write(text)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        stderr.write(str(exc))
        return EXIT_USAGE
    except SystemExit as exc:  # --help and --version
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        G = load_graph(args)
        doc, code = COMMANDS[args.command](args, G)
    except ResourceLimitError as exc:
        doc, code = {"error": "resource_limit", "message": str(exc), "estimate": exc.estimate}, EXIT_RESOURCE
    except LiftObstruction as exc:
        doc, code = {"error": "lift_obstruction", "message": str(exc), "cycle": list(exc.cycle)}, EXIT_DOMAIN
    except (CubhomError, OSError) as exc:
        doc, code = {"error": "domain", "message": str(exc)}, EXIT_DOMAIN
    _emit(doc, args, stdout)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
