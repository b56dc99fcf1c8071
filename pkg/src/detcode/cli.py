"""Command-line front end.

One binary, one subcommand per operation. Exit codes: 0 for pass or
success, 1 for a failed check, an infeasible instance, or an exhausted
search, 2 for usage and file problems. All output is deterministic for
fixed inputs and --workers 1; --json mirrors every report as a single
sorted-keys JSON object on stdout.
"""

from __future__ import annotations

import argparse
import io
import json
import random
import sys
from fractions import Fraction

from . import __version__
from .codes import CodeKind, check_cubic_propositions, detic_exists, verify_code
from .graphs import (
    Graph,
    GraphError,
    enumerate_cubic,
    generate,
    parse_family,
    random_gnp,
    random_tree,
    read_detectors,
    read_graph,
    to_dot,
    write_detectors,
    write_graph,
)
from .grids import (
    PatternError,
    bundled_pattern,
    bundled_pattern_names,
    read_pattern,
    search_pattern,
    torus_consistency,
    verify_pattern,
    write_pattern,
)
from .reduction import (
    FormulaError,
    assignment_to_code,
    code_to_assignment,
    parse_dimacs,
    read_instance_map,
    reduce_to_detic,
    verify_gadget_contracts,
    write_instance_map,
)
from .solver import SolverLimitError, SolverTimeout, extremal_cubic, min_code


class _CliError(Exception):
    """Usage or I/O failure; message goes to stderr, exit code 2."""


def _read_text(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise _CliError(f"cannot read {path}: {exc.strerror}") from exc


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise _CliError(f"cannot write {path}: {exc.strerror}") from exc


def _load_graph(path: str) -> Graph:
    try:
        return read_graph(io.StringIO(_read_text(path)))
    except GraphError as exc:
        raise _CliError(f"bad graph file {path}: {exc}") from exc


def _load_detectors(path: str) -> list:
    try:
        return read_detectors(io.StringIO(_read_text(path)))
    except (GraphError, ValueError) as exc:
        raise _CliError(f"bad detector file {path}: {exc}") from exc


def _load_pattern(name_or_path: str):
    bundled = bundled_pattern_names()
    try:
        text = _read_text(name_or_path)
    except _CliError:
        if name_or_path in bundled:
            return bundled_pattern(name_or_path)
        raise
    try:
        return read_pattern(io.StringIO(text))
    except PatternError as exc:
        raise _CliError(f"bad pattern file {name_or_path}: {exc}") from exc


def _parse_kind(text: str) -> CodeKind:
    try:
        return CodeKind.parse(text)
    except ValueError as exc:
        raise _CliError(str(exc)) from exc


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise _CliError(f"bad fraction {text!r}") from exc


def _emit(args, payload: dict, text_lines: list) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


# ---------------------------------------------------------------------------
# subcommands

def cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    detectors = _load_detectors(args.set)
    kind = _parse_kind(args.kind)
    try:
        report = verify_code(g, detectors, kind, check_all_pairs=args.all_pairs)
    except ValueError as exc:
        raise _CliError(str(exc)) from exc
    if args.dot:
        _write_text(args.dot, to_dot(g, detectors))
    lines = [f"{kind.value} verify: {'pass' if report.ok else 'fail'} "
             f"({len(detectors)} detectors on {g.n} vertices)"]
    lines += [f"  {v}" for v in report.violations]
    _emit(args, report.to_dict(), lines)
    return 0 if report.ok else 1


def cmd_exists(args) -> int:
    g = _load_graph(args.graph)
    report = detic_exists(g)
    lines = [f"detic exists: {'yes' if report.exists else 'no'}"]
    if report.witness is not None:
        lines.append(f"  witness: {report.witness}")
    _emit(args, report.to_dict(), lines)
    return 0 if report.exists else 1


def cmd_solve(args) -> int:
    if (args.graph is None) == (args.family is None):
        raise _CliError("solve needs exactly one of --graph or --family")
    if args.graph is not None:
        g = _load_graph(args.graph)
        source = args.graph
    else:
        try:
            g = generate(parse_family(args.family))
        except (GraphError, ValueError) as exc:
            raise _CliError(str(exc)) from exc
        source = args.family
    kind = _parse_kind(args.kind)
    try:
        res = min_code(g, kind, budget=args.budget, workers=args.workers)
    except SolverLimitError as exc:
        raise _CliError(str(exc)) from exc
    except SolverTimeout as exc:
        print(f"timeout: {exc}", file=sys.stderr)
        return 1
    lines = [f"{kind.value} on {source}: n={g.n} m={g.m}"]
    if not res.feasible:
        lines.append(f"  infeasible: {res.infeasible_witness}")
        ok = False
    elif args.budget is not None:
        lines.append(f"  budget {args.budget}: "
                     f"{'witness found' if res.decision else 'no set within budget'}")
        if res.witness is not None:
            lines.append(f"  witness ({len(res.witness)}): {sorted(res.witness)}")
        ok = bool(res.decision)
    else:
        lines.append(f"  optimum {res.optimum} (density {res.density})")
        lines.append(f"  witness: {sorted(res.witness)}")
        ok = True
    lines.append(f"  nodes explored: {res.nodes_explored}")
    if args.out and res.witness is not None:
        buf = io.StringIO()
        write_detectors(sorted(res.witness), buf)
        _write_text(args.out, buf.getvalue())
    _emit(args, res.to_dict(), lines)
    return 0 if ok else 1


def cmd_reduce(args) -> int:
    try:
        formula = parse_dimacs(_read_text(args.cnf))
        inst = reduce_to_detic(formula)
    except FormulaError as exc:
        raise _CliError(f"bad cnf file {args.cnf}: {exc}") from exc
    if args.out:
        buf = io.StringIO()
        write_graph(inst.graph, buf, comments=[f"reduction of {args.cnf}"])
        _write_text(args.out, buf.getvalue())
    if args.map:
        buf = io.StringIO()
        write_instance_map(inst, buf)
        _write_text(args.map, buf.getvalue())
    payload = {"vertices": inst.graph.n, "edges": inst.graph.m, "k": inst.k,
               "n_vars": inst.formula.n_vars, "n_clauses": inst.formula.n_clauses}
    _emit(args, payload, [f"{inst.graph.n} vertices {inst.graph.m} edges K={inst.k}"])
    return 0


def cmd_translate(args) -> int:
    if args.set is not None:
        # detector set -> assignment
        if args.graph is None or args.map is None:
            raise _CliError("translate --set needs --graph and --map")
        g = _load_graph(args.graph)
        try:
            k, literal_vertex = read_instance_map(io.StringIO(_read_text(args.map)))
        except FormulaError as exc:
            raise _CliError(f"bad map file {args.map}: {exc}") from exc
        detectors = frozenset(_load_detectors(args.set))
        if len(detectors) > k:
            print(f"detector set of size {len(detectors)} exceeds K={k}", file=sys.stderr)
            return 1
        report = verify_code(g, detectors, CodeKind.DETIC)
        if not report.ok:
            print("detector set is not a valid code", file=sys.stderr)
            return 1
        n_vars = max(abs(lit) for lit in literal_vertex)
        assignment = {i: literal_vertex[i] in detectors for i in range(1, n_vars + 1)}
        lits = [i if assignment[i] else -i for i in range(1, n_vars + 1)]
        _emit(args, {"assignment": lits},
              ["v " + " ".join(str(x) for x in lits) + " 0"])
        return 0
    if args.assign is not None:
        # assignment -> detector set
        if args.cnf is None:
            raise _CliError("translate --assign needs --cnf")
        try:
            formula = parse_dimacs(_read_text(args.cnf))
            inst = reduce_to_detic(formula)
        except FormulaError as exc:
            raise _CliError(f"bad cnf file {args.cnf}: {exc}") from exc
        assignment = {}
        for tok in args.assign.split():
            lit = int(tok)
            if lit == 0:
                continue
            assignment[abs(lit)] = lit > 0
        try:
            code = assignment_to_code(inst, assignment)
        except ValueError as exc:
            raise _CliError(str(exc)) from exc
        lines = [f"detector set of size {len(code)} (K={inst.k})"]
        if args.out:
            buf = io.StringIO()
            write_detectors(sorted(code), buf)
            _write_text(args.out, buf.getvalue())
        else:
            lines.append(" ".join(str(v) for v in sorted(code)))
        _emit(args, {"detectors": sorted(code), "k": inst.k}, lines)
        return 0
    raise _CliError("translate needs --set (code to assignment) or --assign (assignment to code)")


def cmd_gadget_check(args) -> int:
    report = verify_gadget_contracts()
    lines = [f"gadget contracts: {'pass' if report.passed else 'FAIL'}"]
    lines += [f"  {cid:6s} {'ok' if ok else 'FAIL'}  {detail}"
              for cid, ok, detail in report.results]
    _emit(args, report.to_dict(), lines)
    return 0 if report.passed else 1


def cmd_pattern_verify(args) -> int:
    p = _load_pattern(args.pattern)
    report = verify_pattern(p)
    lines = [f"{p.lattice} ({p.width}x{p.height}) density {p.density}: "
             f"{'pass' if report.ok else 'fail'}"]
    lines += [f"  {v}" for v in report.violations]
    payload = report.to_dict()
    payload["pattern"] = p.to_dict()
    _emit(args, payload, lines)
    return 0 if report.ok else 1


def cmd_pattern_search(args) -> int:
    target = _parse_fraction(args.target)
    symmetry = tuple(args.symmetry) if args.symmetry else None
    try:
        p = search_pattern(args.lattice, tuple(args.period), target, symmetry=symmetry)
    except PatternError as exc:
        raise _CliError(str(exc)) from exc
    if p is None:
        _emit(args, {"found": False},
              [f"no {args.lattice} pattern of density <= {target} "
               f"at period {tuple(args.period)}"])
        return 1
    lines = [f"found {p.lattice} pattern, density {p.density}: {sorted(p.cells)}"]
    if args.out:
        buf = io.StringIO()
        write_pattern(p, buf)
        _write_text(args.out, buf.getvalue())
    _emit(args, {"found": True, "pattern": p.to_dict()}, lines)
    return 0


def cmd_torus_check(args) -> int:
    try:
        report = torus_consistency(args.lattice, args.period[0], args.period[1],
                                   workers=args.workers)
    except (PatternError, GraphError) as exc:
        raise _CliError(str(exc)) from exc
    lines = [f"torus {args.lattice} {tuple(args.period)}: "
             f"optimum {report.optimum} density {report.density}",
             f"  {report.advisory}"]
    _emit(args, report.to_dict(), lines)
    return 0 if report.optimum is not None else 1


def cmd_gen(args) -> int:
    try:
        spec = parse_family(args.family)
    except (GraphError, ValueError) as exc:
        raise _CliError(str(exc)) from exc
    try:
        if spec.kind == "gnp":
            if len(spec.args) != 2:
                raise _CliError("gnp spec is gnp:<n>:<edge percent>")
            g = random_gnp(spec.args[0], spec.args[1] / 100.0, random.Random(args.seed))
        elif spec.kind == "tree":
            if len(spec.args) != 1:
                raise _CliError("tree spec is tree:<n>")
            g = random_tree(spec.args[0], random.Random(args.seed))
        else:
            g = generate(spec)
    except (GraphError, ValueError) as exc:
        raise _CliError(str(exc)) from exc
    buf = io.StringIO()
    write_graph(g, buf, comments=[f"family {args.family}"])
    if args.out:
        _write_text(args.out, buf.getvalue())
    if args.dot:
        _write_text(args.dot, to_dot(g))
    lines = [f"{args.family}: n={g.n} m={g.m}"]
    if not args.out:
        lines.append(buf.getvalue().rstrip("\n"))
    _emit(args, {"family": args.family, "n": g.n, "m": g.m,
                 "edges": [list(e) for e in g.edges]}, lines)
    return 0


def cmd_enum_cubic(args) -> int:
    try:
        graphs = list(enumerate_cubic(args.n, dedup=not args.raw))
    except ValueError as exc:
        raise _CliError(str(exc)) from exc
    mode = "raw" if args.raw else "dedup"
    lines = [f"connected cubic graphs n={args.n} ({mode}): {len(graphs)}"]
    if args.list:
        lines += [f"  {i}: {list(g.edges)}" for i, g in enumerate(graphs)]
    _emit(args, {"n": args.n, "mode": mode, "count": len(graphs)}, lines)
    return 0


def cmd_extremal(args) -> int:
    try:
        value, g = extremal_cubic(args.n, args.objective)
    except ValueError as exc:
        raise _CliError(str(exc)) from exc
    res = min_code(g, CodeKind.DETIC)
    problems = check_cubic_propositions(g, res.witness)
    lines = [f"{args.objective} DETIC over connected cubic n={args.n}: {value}",
             f"  witness graph edges: {list(g.edges)}",
             f"  optimal code: {sorted(res.witness)}",
             f"  cubic propositions: {'pass' if not problems else problems}"]
    if args.out:
        buf = io.StringIO()
        write_graph(g, buf, comments=[f"{args.objective} cubic n={args.n}"])
        _write_text(args.out, buf.getvalue())
    _emit(args, {"n": args.n, "objective": args.objective, "value": value,
                 "edges": [list(e) for e in g.edges],
                 "code": sorted(res.witness)}, lines)
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="detcode",
        description="Detection codes on graphs: verify, solve, reduce, tile.")
    parser.add_argument("--version", action="version", version=f"detcode {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        return p

    p = add("verify", cmd_verify, help="check a detector set against a code kind")
    p.add_argument("--graph", required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--kind", default="detic")
    p.add_argument("--all-pairs", action="store_true",
                   help="also check pairs separated by domination alone")
    p.add_argument("--dot", help="write DOT with detectors marked")

    p = add("exists", cmd_exists, help="structural DETIC existence test")
    p.add_argument("--graph", required=True)

    p = add("solve", cmd_solve, help="exact minimum code or budget decision")
    p.add_argument("--graph")
    p.add_argument("--family", help="e.g. path:7, torus:SQR:5:5, g77")
    p.add_argument("--kind", default="detic")
    p.add_argument("--budget", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="write the witness detector set")

    p = add("reduce", cmd_reduce, help="3-SAT to DETIC decision instance")
    p.add_argument("--cnf", required=True)
    p.add_argument("--out", help="write the instance graph")
    p.add_argument("--map", help="write the literal/budget sidecar")

    p = add("translate", cmd_translate,
            help="move between detector sets and assignments")
    p.add_argument("--graph")
    p.add_argument("--map")
    p.add_argument("--set", help="detector set file to decode")
    p.add_argument("--cnf", help="formula for encoding an assignment")
    p.add_argument("--assign", help="space-separated literals, e.g. '1 -2 3'")
    p.add_argument("--out", help="write the encoded detector set")

    add("gadget-check", cmd_gadget_check, help="re-verify reduction gadget contracts")

    p = add("pattern-verify", cmd_pattern_verify,
            help="verify a periodic pattern on its infinite lattice")
    p.add_argument("--pattern", required=True,
                   help=f"pattern file or bundled name: {', '.join(bundled_pattern_names())}")

    p = add("pattern-search", cmd_pattern_search, help="search for a periodic pattern")
    p.add_argument("--lattice", required=True)
    p.add_argument("--period", nargs=2, type=int, required=True, metavar=("W", "H"))
    p.add_argument("--target", required=True, help="density bound, e.g. 11/18")
    p.add_argument("--symmetry", nargs=2, type=int, metavar=("DX", "DY"),
                   help="restrict to patterns invariant under this shift")
    p.add_argument("--out", help="write the found pattern")

    p = add("torus-check", cmd_torus_check,
            help="exact minimum on a finite torus (advisory)")
    p.add_argument("--lattice", required=True)
    p.add_argument("--period", nargs=2, type=int, required=True, metavar=("W", "H"))
    p.add_argument("--workers", type=int, default=1)

    p = add("gen", cmd_gen, help="write a named family or seeded random graph")
    p.add_argument("--family", required=True,
                   help="path:n cycle:n complete:n hypercube:d ladder:k prism:k "
                        "g77 torus:LAT:w:h gnp:n:pct tree:n")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--dot")

    p = add("enum-cubic", cmd_enum_cubic, help="enumerate connected cubic graphs")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--raw", action="store_true",
                   help="skip isomorphism dedup (faster, with repeats)")
    p.add_argument("--list", action="store_true", help="print edge lists")

    p = add("extremal", cmd_extremal, help="extremal DETIC value over cubic graphs")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--objective", choices=("min", "max"), default="max")
    p.add_argument("--out", help="write the witness graph")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
