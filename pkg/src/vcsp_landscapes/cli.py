"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource
refusal (oracle cap).
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from collections.abc import Sequence
from pathlib import Path

from . import __version__
from .constructions import (
    PRNG_VERSION,
    gadget,
    prescribed_ascent,
    random_star_instance,
    random_tree_instance,
    random_unary_instance,
    star_of_gadgets,
)
from .core import (
    DimensionError,
    InstanceParseError,
    format_assignment,
    format_instance,
    ones,
    parse_assignment,
    read_instance,
    zeros,
)
from .graphparams import (
    CapExceededError,
    EliminationTree,
    FvsBudgetExceeded,
    degrees,
    extract_graph,
    fvsn,
    is_forest,
    treedepth_exact,
    validate_elimination_tree,
)
from .oracle import OracleCapError, census, default_cap, longest_ascent_from, shortest_ascent_from
from .search import DEFAULT_STEP_LIMIT, POLICIES, InvalidAscentError, SearchPolicy, ascend, validate
from .verify import check_prescribed_ascent

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_REFUSED = 0, 1, 2, 3

GEN_KINDS = ("star", "gadget", "tree", "star-graph", "unary", "schedule")


def _config_line(args: argparse.Namespace) -> str:
    items = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "output")}
    return "# vcsp_landscapes " + __version__ + " " + " ".join(f"{k}={v}" for k, v in items.items())


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _start(literal: str, num_vars: int):
    if literal == "zeros":
        return zeros(num_vars)
    if literal == "ones":
        return ones(num_vars)
    return parse_assignment(literal, num_vars)


# -- gen ---------------------------------------------------------------------


def cmd_gen(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    kind = args.kind
    if kind == "gadget":
        if args.k is None or args.k < 1:
            parser.error("gen gadget needs --k >= 1")
    elif kind == "schedule":
        if args.n is None or args.n < 0:
            parser.error("gen schedule needs --n >= 0")
    elif args.n is None or args.n < 1:
        parser.error(f"gen {kind} needs --n >= 1")
    if kind in ("tree", "star-graph", "unary"):
        if args.seed is None:
            parser.error(f"gen {kind} needs --seed")
        if args.weight_bound is None or args.weight_bound < 1:
            parser.error(f"gen {kind} needs --weight-bound >= 1")

    if kind == "schedule":
        _emit("".join(f"{v}\n" for v in prescribed_ascent(args.n)), args.output)
        return EXIT_OK
    comments = [_config_line(args)[2:]]
    if kind == "star":
        inst = star_of_gadgets(args.n)
    elif kind == "gadget":
        inst = gadget(args.k)
    else:
        comments.append(f"prng={PRNG_VERSION}")
        make = {"tree": random_tree_instance, "star-graph": random_star_instance, "unary": random_unary_instance}[kind]
        inst = make(args.n, args.seed, args.weight_bound)
    _emit(format_instance(inst, comments), args.output)
    return EXIT_OK


# -- ascend ------------------------------------------------------------------


def _read_schedule(path: str) -> list[int]:
    flips = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            flips.append(int(line))
    return flips


def cmd_ascend(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.policy == "replay" and not args.schedule:
        parser.error("--policy replay needs --schedule")
    if args.policy == "random" and args.seed is None:
        parser.error("--policy random needs --seed")
    inst = read_instance(args.instance)
    try:
        start = _start(args.start, inst.num_vars)
    except (ValueError, DimensionError) as exc:
        parser.error(str(exc))
    policy = SearchPolicy(
        args.policy,
        seed=args.seed,
        schedule=_read_schedule(args.schedule) if args.policy == "replay" else None,
        step_limit=args.step_limit,
    )
    try:
        traj = ascend(inst, start, policy)
    except InvalidAscentError as exc:
        print(f"invalid ascent: {exc}", file=sys.stderr)
        return EXIT_FAIL
    report = validate(inst, traj)
    _emit(_config_line(args) + "\n" + traj.to_csv(), args.output)
    summary = f"length={len(traj)} final={traj.final_fitness} terminal={traj.terminal} valid={report.ok}"
    print(summary, file=sys.stdout if args.output else sys.stderr)
    if not report.ok:
        print(f"validation failed: {report.message}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# -- verify ------------------------------------------------------------------


def cmd_verify(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.instance:
        inst = read_instance(args.instance)
        if (inst.num_vars - 1) % 4 or inst.num_vars < 5:
            parser.error("instance size must be 4n+1 with n >= 1")
        cases = [((inst.num_vars - 1) // 4, inst)]
    else:
        if args.n_max < 1:
            parser.error("--n-max must be >= 1")
        cases = [(n, None) for n in range(1, args.n_max + 1)]
    print(_config_line(args))
    print(f"{'n':>3} {'length':>8} {'expected':>8} {'final_fitness':>16} {'peak':>5}  status")
    failed = False
    traces = []
    for n, inst in cases:
        row = check_prescribed_ascent(n, inst, keep_trace=(n == 1))
        status = "PASS" if row.passed else "FAIL"
        length = "-" if row.length is None else row.length
        final = "-" if row.final_fitness is None else row.final_fitness
        print(f"{n:>3} {length:>8} {row.expected_length:>8} {final:>16} {str(row.peak):>5}  {status}")
        if not row.passed:
            failed = True
            print(f"    {row.message}")
        if row.fitness_trace:
            traces.append(f"trace n=1: {','.join(map(str, row.fitness_trace))}")
    for t in traces:
        print(t)
    return EXIT_FAIL if failed else EXIT_OK


# -- oracle ------------------------------------------------------------------


def cmd_oracle(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    inst = read_instance(args.instance)
    starts_raw = args.start or ["zeros"]
    try:
        starts = [_start(s, inst.num_vars) for s in starts_raw]
    except (ValueError, DimensionError) as exc:
        parser.error(str(exc))
    try:
        c = census(inst, cap=args.cap)
    except OracleCapError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_REFUSED
    buf = io.StringIO()
    buf.write(_config_line(args) + "\n")
    if args.report == "peaks":
        for x in c.peak_assignments():
            buf.write(format_assignment(x) + "\n")
    else:
        buf.write(c.to_csv(starts))
        walk = longest_ascent_from if args.report == "longest" else shortest_ascent_from
        for s in starts:
            _, witness = walk(c, s)
            buf.write(f"\n# witness {args.report} ascent from {format_assignment(s)}\n")
            buf.write(witness.to_csv())
    _emit(buf.getvalue(), args.output)
    return EXIT_OK


# -- analyze -----------------------------------------------------------------


def greedy_elimination_tree(g) -> EliminationTree:
    """Elimination tree built by repeatedly removing a maximum-degree vertex
    of each component; always valid, not necessarily optimal."""
    parent: dict[int, int | None] = {}
    stack = [(comp, None) for comp in g.components()]
    while stack:
        comp, up = stack.pop()
        sub = g.induced(comp)
        root = max(sorted(comp), key=lambda v: len(sub.neighbors(v)))
        parent[root] = up
        rest = sub.delete_vertices([root])
        stack.extend((c, root) for c in rest.components())
    return EliminationTree(parent)


def cmd_analyze(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    inst = read_instance(args.instance)
    g = extract_graph(inst)
    deg = degrees(g)
    lines = [
        _config_line(args),
        f"vertices: {g.num_vertices}",
        f"edges: {g.num_edges}",
        f"max_degree: {max(deg.values(), default=0)}",
        f"min_degree: {min(deg.values(), default=0)}",
        f"is_forest: {is_forest(g)}",
    ]
    try:
        size, witness = fvsn(g, budget=args.fvs_budget)
        lines.append(f"fvsn: {size} witness={sorted(witness)}")
    except FvsBudgetExceeded as exc:
        lines.append(f"fvsn: <= {len(exc.upper_bound)} (budget exceeded) witness={sorted(exc.upper_bound)}")
    try:
        td, _ = treedepth_exact(g, cap=args.td_cap)
        lines.append(f"treedepth: {td} (exact)")
    except CapExceededError:
        check = validate_elimination_tree(g, greedy_elimination_tree(g))
        lines.append(f"treedepth: <= {check.height} (witness bound from a validated elimination tree)")
    print("\n".join(lines))
    return EXIT_OK


# -- sweep -------------------------------------------------------------------


def cmd_sweep(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.n_max < 1:
        parser.error("--n-max must be >= 1")
    cap = default_cap() if args.cap is None else args.cap
    buf = io.StringIO()
    buf.write(_config_line(args) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "prescribed_length", "oracle_longest", "steepest_length", "shortest"])
    failed = False
    for n in range(1, args.n_max + 1):
        row = check_prescribed_ascent(n)
        failed |= not row.passed
        inst = star_of_gadgets(n)
        start = zeros(inst.num_vars)
        steep = ascend(inst, start, SearchPolicy("steepest"))
        longest = shortest = ""
        if inst.num_vars <= cap:
            c = census(inst, cap=cap)
            longest = int(c.longest[0])
            shortest = int(c.shortest[0])
        writer.writerow([n, row.length if row.passed else "", longest, len(steep), shortest])
    _emit(buf.getvalue(), args.output)
    return EXIT_FAIL if failed else EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vcsp", description="Fitness landscapes of binary Boolean VCSPs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance or flip schedule")
    p.add_argument("kind", choices=GEN_KINDS)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--weight-bound", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("ascend", help="run strict local search and emit the trajectory as CSV")
    p.add_argument("instance")
    p.add_argument("--start", default="zeros", help="'zeros', 'ones' or a 0/1 literal")
    p.add_argument("--policy", choices=POLICIES, default="steepest")
    p.add_argument("--seed", type=int)
    p.add_argument("--schedule", help="file with one variable index per line")
    p.add_argument("--step-limit", type=int, default=DEFAULT_STEP_LIMIT)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_ascend)

    p = sub.add_parser("verify", help="reproduce the exponential ascent of the star of gadgets")
    p.add_argument("claim", choices=["theorem1"])
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--instance", help="check this star-sized instance instead of the generated ones")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="exhaustive landscape analysis")
    p.add_argument("instance")
    p.add_argument("--start", action="append", help="repeatable; default 'zeros'")
    p.add_argument("--report", choices=["longest", "shortest", "peaks"], default="longest")
    p.add_argument("--cap", type=int, default=None, help="maximum variable count to enumerate")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("analyze", help="constraint graph parameters")
    p.add_argument("instance")
    p.add_argument("--td-cap", type=int, default=16)
    p.add_argument("--fvs-budget", type=int, default=2_000_000)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="ascent lengths of the star of gadgets for n = 1..n-max")
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("-o", "--out", dest="output")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except (InstanceParseError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
