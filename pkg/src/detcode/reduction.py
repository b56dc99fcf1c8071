"""Executable reduction from 3-SAT to the DETIC decision problem.

Each variable becomes a 10-vertex block with two literal vertices and 8
plumbing vertices; each clause becomes an 8-vertex block whose contact
vertex is wired to its three literal vertices. Unit propagation pins all
plumbing (8 per block) in every valid code, the y/z pair of a variable
block additionally demands one of its two literals, and the a/c pair of
a clause block demands a detector among the contact's outside neighbors.
With budget K = 9N + 8M this leaves exactly the satisfying assignments:
a code within budget picks one literal per variable and must hand every
clause contact a chosen literal.

The block topologies were found by exhaustive search over the 14-edge
budget against the behavioral contracts (see demos/gadget_design_search.py);
verify_gadget_contracts re-checks the shipped templates from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, TextIO

from .codes import CodeKind, verify_code
from .graphs import Graph, GraphError, build_graph
from .solver import InfeasibleError, forced_detectors

# variable block: roles x, xbar, y, z at 0..3, plumbing 2..9.
# y and z share the plumbing neighborhood {4,5,6} and are non-adjacent,
# so each is the other's only forced private vertex; the literal hung on
# y (or on z) is the second private that settles the pair.
VAR_SIZE = 10
VAR_X, VAR_XBAR, VAR_Y, VAR_Z = 0, 1, 2, 3
VAR_EDGES = (
    (0, 2), (0, 4),
    (1, 3), (1, 4),
    (2, 4), (2, 5), (2, 6),
    (3, 4), (3, 5), (3, 6),
    (4, 7), (5, 7), (5, 8), (6, 9),
)
VAR_PLUMBING = frozenset(range(2, 10))

# clause block: roles a, c at 0..1; a and c share the supports 3, 5, 7,
# each support carrying its own pendant (2, 4, 6). Everything is forced;
# the pair (a, c) stays undistinguished until an outside neighbor of c
# is a detector. c is the only vertex that takes clause edges.
CLAUSE_SIZE = 8
CLAUSE_A, CLAUSE_C = 0, 1
CLAUSE_EDGES = (
    (2, 3), (4, 5), (6, 7),
    (3, 0), (3, 1), (5, 0), (5, 1), (7, 0), (7, 1),
)
CLAUSE_PLUMBING = frozenset(range(8))


class FormulaError(ValueError):
    """Malformed 3-CNF input."""


@dataclass(frozen=True)
class Formula:
    """3-CNF with exactly-3 clauses over distinct variables.

    Literals are signed 1-based variable indices, DIMACS style.
    """

    n_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.n_vars < 0:
            raise FormulaError("variable count must be nonnegative")
        for clause in self.clauses:
            if len(clause) != 3:
                raise FormulaError(f"clause {clause} must have exactly 3 literals")
            for lit in clause:
                if lit == 0 or abs(lit) > self.n_vars:
                    raise FormulaError(f"literal {lit} out of range in {clause}")
            if len({abs(lit) for lit in clause}) != 3:
                raise FormulaError(f"clause {clause} repeats a variable")

    @property
    def n_clauses(self) -> int:
        return len(self.clauses)

    def evaluate(self, assignment: Mapping[int, bool]) -> bool:
        for clause in self.clauses:
            if not any(assignment[abs(lit)] == (lit > 0) for lit in clause):
                return False
        return True

    def satisfying_assignments(self) -> Iterable[dict[int, bool]]:
        """Brute enumeration, ascending binary order; fine for small n_vars."""
        for bits in range(1 << self.n_vars):
            assignment = {i + 1: bool((bits >> i) & 1) for i in range(self.n_vars)}
            if self.evaluate(assignment):
                yield assignment


def parse_dimacs(text: str) -> Formula:
    n_vars = None
    declared_m = None
    clauses: list[tuple[int, int, int]] = []
    pending: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormulaError(f"bad header {line!r}")
            n_vars, declared_m = int(parts[2]), int(parts[3])
            continue
        if n_vars is None:
            raise FormulaError("clause data before 'p cnf' header")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                if len(pending) != 3:
                    raise FormulaError(f"clause {pending} must have exactly 3 literals")
                clauses.append(tuple(pending))
                pending = []
            else:
                pending.append(lit)
    if n_vars is None:
        raise FormulaError("missing 'p cnf' header")
    if pending:
        raise FormulaError(f"unterminated clause {pending}")
    if len(clauses) != declared_m:
        raise FormulaError(f"header declares {declared_m} clauses, found {len(clauses)}")
    return Formula(n_vars=n_vars, clauses=tuple(clauses))


@dataclass(frozen=True)
class ReductionInstance:
    graph: Graph
    k: int
    formula: Formula
    literal_vertex: dict[int, int]
    clause_vertex: dict[int, int]
    variable_roles: tuple[dict, ...]
    clause_roles: tuple[dict, ...]
    designated: frozenset  # the 8N + 8M plumbing vertices

    def variable_base(self, i: int) -> int:
        return VAR_SIZE * (i - 1)

    def clause_base(self, j: int) -> int:
        return VAR_SIZE * self.formula.n_vars + CLAUSE_SIZE * (j - 1)


def reduce_to_detic(formula: Formula) -> ReductionInstance:
    """Build the decision instance (graph, K) for the given formula.

    Vertex numbering is deterministic: variable blocks first in variable
    order, then clause blocks in clause order.
    """
    n, m = formula.n_vars, formula.n_clauses
    edges: list[tuple[int, int]] = []
    literal_vertex: dict[int, int] = {}
    variable_roles = []
    for i in range(1, n + 1):
        off = VAR_SIZE * (i - 1)
        edges += [(a + off, b + off) for a, b in VAR_EDGES]
        literal_vertex[i] = off + VAR_X
        literal_vertex[-i] = off + VAR_XBAR
        variable_roles.append({
            "x": off + VAR_X, "xbar": off + VAR_XBAR,
            "y": off + VAR_Y, "z": off + VAR_Z,
            "plumbing": tuple(off + v for v in sorted(VAR_PLUMBING)),
        })
    clause_vertex: dict[int, int] = {}
    clause_roles = []
    h_base = VAR_SIZE * n
    for j, clause in enumerate(formula.clauses, start=1):
        off = h_base + CLAUSE_SIZE * (j - 1)
        edges += [(a + off, b + off) for a, b in CLAUSE_EDGES]
        clause_vertex[j] = off + CLAUSE_C
        clause_roles.append({
            "a": off + CLAUSE_A, "c": off + CLAUSE_C,
            "plumbing": tuple(off + v for v in sorted(CLAUSE_PLUMBING)),
        })
        for lit in clause:
            edges.append((off + CLAUSE_C, literal_vertex[lit]))
    graph = build_graph(h_base + CLAUSE_SIZE * m, edges)
    designated = frozenset(
        off + v
        for i in range(n) for off in (VAR_SIZE * i,) for v in VAR_PLUMBING
    ) | frozenset(
        h_base + CLAUSE_SIZE * j + v for j in range(m) for v in CLAUSE_PLUMBING
    )
    return ReductionInstance(
        graph=graph, k=9 * n + 8 * m, formula=formula,
        literal_vertex=literal_vertex, clause_vertex=clause_vertex,
        variable_roles=tuple(variable_roles), clause_roles=tuple(clause_roles),
        designated=designated,
    )


def assignment_to_code(inst: ReductionInstance, assignment: Mapping[int, bool]) -> frozenset:
    """Detector set of size exactly K: plumbing plus one literal per variable."""
    missing = [i for i in range(1, inst.formula.n_vars + 1) if i not in assignment]
    if missing:
        raise ValueError(f"assignment misses variables {missing}")
    chosen = {
        inst.literal_vertex[i if assignment[i] else -i]
        for i in range(1, inst.formula.n_vars + 1)
    }
    return frozenset(inst.designated | chosen)


def code_to_assignment(inst: ReductionInstance, detectors: Iterable[int]) -> dict[int, bool]:
    """Read the assignment off a valid within-budget detector set.

    The counting argument pins such a set to plumbing plus exactly one
    literal per variable, so membership of the positive literal vertex
    decides each variable. The result is checked against the formula; a
    failure there would falsify the reduction and raises.
    """
    s = frozenset(detectors)
    if len(s) > inst.k:
        raise ValueError(f"detector set of size {len(s)} exceeds the budget K={inst.k}")
    report = verify_code(inst.graph, s, CodeKind.DETIC)
    if not report.ok:
        raise ValueError(f"detector set is not a valid code ({len(report.violations)} violations)")
    assignment = {
        i: inst.literal_vertex[i] in s for i in range(1, inst.formula.n_vars + 1)
    }
    if not inst.formula.evaluate(assignment):
        raise AssertionError("valid within-budget code decoded to a falsifying assignment")
    return assignment


# ---------------------------------------------------------------------------
# contract verification

@dataclass(frozen=True)
class ContractReport:
    passed: bool
    results: tuple[tuple[str, bool, str], ...]

    def failures(self) -> list[tuple[str, bool, str]]:
        return [r for r in self.results if not r[1]]

    def to_dict(self) -> dict:
        return {"passed": self.passed,
                "results": [{"id": i, "ok": ok, "detail": d} for i, ok, d in self.results]}


def _assemble_raw(var_edges, clause_edges, n_vars: int, clauses) -> tuple:
    """Instance assembly from explicit templates, for the mutation harness."""
    edges = []
    for i in range(n_vars):
        off = VAR_SIZE * i
        edges += [(a + off, b + off) for a, b in var_edges]
    h_base = VAR_SIZE * n_vars
    for j, clause in enumerate(clauses):
        off = h_base + CLAUSE_SIZE * j
        edges += [(a + off, b + off) for a, b in clause_edges]
        for lit in clause:
            base = VAR_SIZE * (abs(lit) - 1)
            edges.append((off + CLAUSE_C, base + (VAR_X if lit > 0 else VAR_XBAR)))
    n = h_base + CLAUSE_SIZE * len(clauses)
    designated = {VAR_SIZE * i + v for i in range(n_vars) for v in VAR_PLUMBING}
    designated |= {h_base + CLAUSE_SIZE * j + v
                   for j in range(len(clauses)) for v in CLAUSE_PLUMBING}
    return build_graph(n, edges), frozenset(designated), h_base


def verify_gadget_contracts(var_edges=VAR_EDGES, clause_edges=CLAUSE_EDGES) -> ContractReport:
    """Machine-check the block templates against their behavioral contracts.

    Runs on the shipped templates by default; the mutation tests pass
    altered edge lists. Any exception inside a check counts as that
    contract failing, so mutants that break construction outright are
    still classified rather than crashing the harness.
    """
    results: list[tuple[str, bool, str]] = []

    def record(cid: str, fn) -> None:
        try:
            ok, detail = fn()
        except (InfeasibleError, GraphError, ValueError, AssertionError) as exc:
            ok, detail = False, f"exception: {exc}"
        results.append((cid, ok, detail))

    def v1():
        n_verts = len({v for e in var_edges for v in e})
        ok = n_verts == VAR_SIZE and len(set(var_edges)) == 14
        return ok, f"variable block has {n_verts} vertices, {len(set(var_edges))} edges"

    def v2():
        g = build_graph(VAR_SIZE, var_edges)
        forced = forced_detectors(g, CodeKind.DETIC)
        ok = forced == VAR_PLUMBING
        return ok, f"forced={sorted(forced)}"

    def v3():
        g = build_graph(VAR_SIZE, var_edges)
        s0 = set(VAR_PLUMBING)
        rep = verify_code(g, s0, CodeKind.DETIC)
        yz_fails = (not rep.ok) and any(v.vertices == (VAR_Y, VAR_Z) for v in rep.violations)
        with_x = verify_code(g, s0 | {VAR_X}, CodeKind.DETIC).ok
        with_xbar = verify_code(g, s0 | {VAR_XBAR}, CodeKind.DETIC).ok
        ok = yz_fails and with_x and with_xbar
        return ok, f"yz_fails={yz_fails} with_x={with_x} with_xbar={with_xbar}"

    def c1():
        n_verts = len({v for e in clause_edges for v in e})
        g, _, h_base = _assemble_raw(var_edges, clause_edges, 3, [(1, 2, 3)])
        stubs = sum(1 for u, v in g.edges
                    if (u == h_base + CLAUSE_C) != (v == h_base + CLAUSE_C)
                    and min(u, v) < h_base)
        ok = n_verts == CLAUSE_SIZE and len(set(clause_edges)) == 9 and stubs == 3
        return ok, f"clause block has {n_verts} vertices, {len(set(clause_edges))} edges, {stubs} stubs"

    def c2():
        g, designated, h_base = _assemble_raw(var_edges, clause_edges, 3, [(1, 2, 3)])
        forced = forced_detectors(g, CodeKind.DETIC)
        block = frozenset(range(h_base, h_base + CLAUSE_SIZE))
        ok = block <= forced and forced == designated
        return ok, f"clause plumbing forced: {block <= forced}, overall exact: {forced == designated}"

    def c3():
        g, designated, h_base = _assemble_raw(var_edges, clause_edges, 3, [(1, 2, 3)])
        a, c = h_base + CLAUSE_A, h_base + CLAUSE_C
        neg = {VAR_SIZE * i + VAR_XBAR for i in range(3)}
        rep = verify_code(g, designated | neg, CodeKind.DETIC)
        fails_without = (not rep.ok) and any(v.vertices == (a, c) for v in rep.violations)
        pos_one = designated | (neg - {VAR_XBAR}) | {VAR_X}
        rep_with = verify_code(g, pos_one, CodeKind.DETIC)
        clean_with = not any(v.vertices == (a, c) for v in rep_with.violations)
        ok = fails_without and clean_with and rep_with.ok
        return ok, f"fails_without_literal={fails_without} clean_with_literal={rep_with.ok}"

    def v4c4():
        details = []
        ok = True
        for m in (0, 1, 2, 3):
            clauses = [(1, 2, 3)] * m
            g, designated, h_base = _assemble_raw(var_edges, clause_edges, 3, clauses)
            forced = forced_detectors(g, CodeKind.DETIC)
            exact = forced == designated
            pos = {VAR_SIZE * i + VAR_X for i in range(3)}
            sat_ok = verify_code(g, designated | pos, CodeKind.DETIC).ok
            mixed = {VAR_X, VAR_SIZE + VAR_XBAR, 2 * VAR_SIZE + VAR_XBAR}
            mixed_ok = verify_code(g, designated | mixed, CodeKind.DETIC).ok
            if m == 0:
                unsat_right = True
            else:
                neg = {VAR_SIZE * i + VAR_XBAR for i in range(3)}
                rep = verify_code(g, designated | neg, CodeKind.DETIC)
                want = {(h_base + CLAUSE_SIZE * j + CLAUSE_A,
                         h_base + CLAUSE_SIZE * j + CLAUSE_C) for j in range(m)}
                unsat_right = (not rep.ok) and {v.vertices for v in rep.violations} == want
            step = exact and sat_ok and mixed_ok and unsat_right
            ok = ok and step
            details.append(f"m={m}:{'ok' if step else 'FAIL'}")
        return ok, " ".join(details)

    record("V1", v1)
    record("V2", v2)
    record("V3", v3)
    record("C1", c1)
    record("C2", c2)
    record("C3", c3)
    record("V4/C4", v4c4)
    return ContractReport(passed=all(ok for _, ok, _ in results), results=tuple(results))


# ---------------------------------------------------------------------------
# instance file output

def write_instance_map(inst: ReductionInstance, fh: TextIO) -> None:
    """Sidecar map: budget line 'k K' and one 'l <lit> <vertex>' per literal
    (1-based vertex ids, matching the graph file)."""
    fh.write(f"k {inst.k}\n")
    for i in range(1, inst.formula.n_vars + 1):
        fh.write(f"l {i} {inst.literal_vertex[i] + 1}\n")
        fh.write(f"l {-i} {inst.literal_vertex[-i] + 1}\n")


def read_instance_map(fh: TextIO) -> tuple[int, dict[int, int]]:
    k = None
    literal_vertex: dict[int, int] = {}
    for raw in fh:
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "k" and len(parts) == 2:
            k = int(parts[1])
        elif parts[0] == "l" and len(parts) == 3:
            literal_vertex[int(parts[1])] = int(parts[2]) - 1
        else:
            raise FormulaError(f"unrecognized map line {line!r}")
    if k is None:
        raise FormulaError("map file missing 'k' line")
    return k, literal_vertex
