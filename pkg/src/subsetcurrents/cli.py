"""Command-line surface: thin adapters over the library operations.

All numeric output is printed in canonical reduced form p/q (plain
integer when the denominator is 1); `converge --decimal` adds a decimal
column for human reading.  Exit codes: 0 success, 1 domain error (the
violated precondition is named), 2 I/O or file-format error.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import approx as approx_mod
from . import cylinders as cyl
from . import fiber
from . import stallings
from .errors import FileFormatError
from .realize import WeightSystem, decompose, realize, verify_realization

ENV_PREFIX = "SUBCUR_"


@dataclass
class Config:
    max_radius: int = cyl.DEFAULT_MAX_RADIUS
    seed: int = 0
    output_dir: Path = Path(".")


def _env_default(name: str, fallback):
    raw = os.environ.get(ENV_PREFIX + name.upper())
    if raw is None:
        return fallback
    return type(fallback)(raw)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subcur",
        description="subset currents on free groups: core graphs, "
                    "cylinder tables, realization")
    parser.add_argument("--seed", type=int,
                        default=_env_default("seed", 0),
                        help="seed for randomized operations")
    parser.add_argument("--max-radius", type=int,
                        default=_env_default("max_radius",
                                             cyl.DEFAULT_MAX_RADIUS),
                        help="radius bound for cylinder enumeration")
    parser.add_argument("--output-dir", type=Path,
                        default=_env_default("output_dir", Path(".")),
                        help="directory for written artifacts")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rank", help="reduced rank of a subgroup")
    p.add_argument("subgroup", type=Path)

    p = sub.add_parser("index", help="index of a subgroup (or infinite)")
    p.add_argument("subgroup", type=Path)

    p = sub.add_parser("member", help="membership of a word")
    p.add_argument("subgroup", type=Path)
    p.add_argument("--word", required=True)

    p = sub.add_parser("intersect",
                       help="fiber product: N, SHNC bound, census")
    p.add_argument("left", type=Path)
    p.add_argument("right", type=Path)
    p.add_argument("--export", type=Path, default=None,
                   help="path prefix for component graph exports")

    p = sub.add_parser("cylinders",
                       help="cylinder table of a rational current, or "
                            "round-graph enumeration")
    p.add_argument("subgroups", nargs="*", type=Path)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--coeffs", default=None,
                   help="comma-separated rational coefficients, one per "
                        "subgroup file (default all 1)")
    p.add_argument("--enumerate", action="store_true",
                   help="list every round-graph at this radius instead")
    p.add_argument("--rank", type=int, default=2,
                   help="rank for --enumerate (default 2)")
    p.add_argument("--out", type=Path, default=None)

    p = sub.add_parser("realize",
                       help="realize an integer weight table and verify")
    p.add_argument("table", type=Path)
    p.add_argument("--outdir", type=Path, default=None)

    p = sub.add_parser("approx",
                       help="repair a (possibly float) table to an "
                            "admissible integer weight system")
    p.add_argument("table", type=Path)
    p.add_argument("--epsilon", default="1/1000")
    p.add_argument("--out", type=Path, default=None)

    p = sub.add_parser("converge",
                       help="distance of (1/n) eta_{H_n} from eta_F")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--ns", default="2,4,8,16")
    p.add_argument("--decimal", action="store_true")

    p = sub.add_parser("export", help="write a subgroup's graph description")
    p.add_argument("subgroup", type=Path)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--hull", action="store_true",
                   help="export the hull-core instead of the core")
    return parser


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational {text!r}") from exc


def _raw_graph_text(rank: int, vertices, edges) -> str:
    ids = {v: i for i, v in enumerate(sorted(vertices))}
    lines = [f"rank {rank}", f"vertices {len(ids)}", "basepoint none"]
    lines.extend(f"edge {ids[s]} {ids[d]} g{l}"
                 for (s, d, l) in sorted(edges, key=lambda e: (ids[e[0]],
                                                               ids[e[1]],
                                                               e[2])))
    return "\n".join(lines) + "\n"


def _cmd_rank(args, config: Config) -> int:
    sub = stallings.read_subgroup(args.subgroup)
    print(f"reduced_rank = {sub.reduced_rank()}")
    return 0


def _cmd_index(args, config: Config) -> int:
    sub = stallings.read_subgroup(args.subgroup)
    idx = stallings.finite_index(sub.core)
    print(f"index = {'infinite' if idx is None else idx}")
    return 0


def _cmd_member(args, config: Config) -> int:
    sub = stallings.read_subgroup(args.subgroup)
    print("true" if sub.contains(args.word) else "false")
    return 0


def _cmd_intersect(args, config: Config) -> int:
    left = stallings.read_subgroup(args.left)
    right = stallings.read_subgroup(args.right)
    product = fiber.fiber_product(left.hull, right.hull)
    n = sum(max(e - v, 0) for (v, e) in product.component_stats())
    bound = left.reduced_rank() * right.reduced_rank()
    total, trees, positive = fiber.component_census(product)
    print(f"N = {n}")
    print(f"bound = {bound}")
    print(f"SHNC: {'ok' if n <= bound else 'violated'}")
    print(f"census: total={total} trees={trees} positive={positive}")
    if args.export is not None:
        for k, comp in enumerate(product.components):
            edges = [(s, d, l) for (s, d, l) in product.edges
                     if s in set(comp)]
            path = Path(f"{args.export}.{k}.txt")
            path.write_text(_raw_graph_text(product.rank, comp, edges),
                            encoding="utf-8")
        print(f"exported {len(product.components)} components")
    return 0


ENUMERATION_CAP = 10 ** 6


def _cmd_cylinders(args, config: Config) -> int:
    if args.enumerate:
        expected = cyl.count_round_graphs(args.rank, args.radius)
        if expected > ENUMERATION_CAP:
            raise ValueError(
                f"refusing to list {expected} round-graphs at rank "
                f"{args.rank}, radius {args.radius}; the library generator "
                f"is lazy if you need to stream them")
        graphs = list(cyl.enumerate_round_graphs(args.rank, args.radius,
                                                 config.max_radius))
        print(f"count = {len(graphs)}")
        for t in sorted(graphs, key=lambda t: t.sort_key()):
            print(cyl.round_graph_to_text(t))
        return 0
    if not args.subgroups:
        raise ValueError("give subgroup files, or --enumerate")
    subs = [stallings.read_subgroup(path) for path in args.subgroups]
    if args.coeffs is None:
        coeffs = [Fraction(1)] * len(subs)
    else:
        coeffs = [_parse_fraction(c) for c in args.coeffs.split(",")]
        if len(coeffs) != len(subs):
            raise ValueError("one coefficient per subgroup file")
    current = cyl.RationalCurrent(list(zip(coeffs, subs)))
    table = cyl.cylinder_table(current, args.radius)
    text = cyl.table_to_text(table)
    if args.out is not None:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    violations = cyl.check_matching(table)
    print(f"matching: {'ok' if not violations else violations}")
    return 0


def _cmd_realize(args, config: Config) -> int:
    table = cyl.read_table(args.table)
    theta = WeightSystem(table)
    quotient = realize(theta)
    current = decompose(quotient)
    ok = verify_realization(theta, current)
    outdir = args.outdir if args.outdir is not None else config.output_dir
    outdir.mkdir(parents=True, exist_ok=True)
    for k, (_coeff, sub) in enumerate(current.terms):
        stallings.write_subgroup(sub, outdir / f"component_{k}.txt")
    report = [f"vertices = {len(quotient.vertices)}",
              f"components = {len(quotient.components)}",
              f"verified = {'true' if ok else 'false'}"]
    (outdir / "report.txt").write_text("\n".join(report) + "\n",
                                       encoding="utf-8")
    for line in report:
        print(line)
    return 0 if ok else 1


def _cmd_approx(args, config: Config) -> int:
    table = cyl.read_table(args.table)
    eps = _parse_fraction(args.epsilon)
    theta, scale, _exact = approx_mod.approximate_table(table, eps)
    text = cyl.table_to_text(theta.table)
    if args.out is not None:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(f"M = {scale}")
    return 0


def _cmd_converge(args, config: Config) -> int:
    ns = [int(x) for x in args.ns.split(",") if x.strip()]
    for n, dist in approx_mod.convergence_run(args.radius, ns):
        line = f"n={n} distance = {dist}"
        if args.decimal:
            line += f" ({float(dist):.6g})"
        print(line)
    return 0


def _cmd_export(args, config: Config) -> int:
    sub = stallings.read_subgroup(args.subgroup)
    graph = sub.hull if args.hull else sub.core
    args.out.write_text(stallings.graph_to_text(graph), encoding="utf-8")
    print(f"wrote {args.out}")
    return 0


_COMMANDS = {
    "rank": _cmd_rank,
    "index": _cmd_index,
    "member": _cmd_member,
    "intersect": _cmd_intersect,
    "cylinders": _cmd_cylinders,
    "realize": _cmd_realize,
    "approx": _cmd_approx,
    "converge": _cmd_converge,
    "export": _cmd_export,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = Config(max_radius=args.max_radius, seed=args.seed,
                    output_dir=Path(args.output_dir))
    try:
        return _COMMANDS[args.command](args, config)
    except FileFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
