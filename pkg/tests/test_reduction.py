import io
import itertools
import random

import pytest

from detcode import (
    CodeKind,
    Formula,
    FormulaError,
    assignment_to_code,
    code_to_assignment,
    forced_detectors,
    min_code,
    parse_dimacs,
    read_instance_map,
    reduce_to_detic,
    verify_code,
    verify_gadget_contracts,
    write_instance_map,
)
from detcode.reduction import CLAUSE_EDGES, VAR_EDGES


EXAMPLE = "p cnf 5 4\n-1 -2 -4 0\n1 -3 -5 0\n2 4 5 0\n-1 3 5 0\n"


def random_formula(rng: random.Random, n_vars: int, n_clauses: int) -> Formula:
    clauses = []
    for _ in range(n_clauses):
        variables = rng.sample(range(1, n_vars + 1), 3)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in variables))
    return Formula(n_vars, tuple(clauses))


class TestFormula:
    def test_validation(self):
        with pytest.raises(FormulaError):
            Formula(2, ((1, 2, 3),))        # literal out of range
        with pytest.raises(FormulaError):
            Formula(3, ((1, -1, 2),))       # repeated variable
        with pytest.raises(FormulaError):
            Formula(3, ((1, 2),))           # wrong width

    def test_evaluate(self):
        f = Formula(3, ((1, -2, 3),))
        assert f.evaluate({1: False, 2: False, 3: False})
        assert not f.evaluate({1: False, 2: True, 3: False})

    def test_satisfying_enumeration(self):
        f = Formula(3, ((1, 2, 3), (-1, -2, -3)))
        sats = list(f.satisfying_assignments())
        assert len(sats) == 6  # all but all-false and all-true


class TestDimacs:
    def test_parse_example(self):
        f = parse_dimacs(EXAMPLE)
        assert f.n_vars == 5 and f.n_clauses == 4
        assert f.clauses[0] == (-1, -2, -4)

    def test_comments_and_multiline(self):
        f = parse_dimacs("c hi\np cnf 3 1\n1 -2\n3 0\n")
        assert f.clauses == ((1, -2, 3),)

    @pytest.mark.parametrize("text", [
        "p cnf 3 1\n1 2 0\n",              # width 2
        "p cnf 3 1\n1 -1 2 0\n",           # repeated variable
        "p cnf 3 2\n1 2 3 0\n",            # header mismatch
        "p cnf 3 1\n1 2 3\n",              # unterminated
        "1 2 3 0\n",                       # clause before header
        "p cnf 3 1\n1 2 4 0\n",            # literal out of range
    ])
    def test_rejects(self, text):
        with pytest.raises(FormulaError):
            parse_dimacs(text)


class TestSizing:
    def test_example_instance(self):
        inst = reduce_to_detic(parse_dimacs(EXAMPLE))
        assert inst.graph.n == 82 and inst.graph.m == 118
        assert inst.k == 9 * 5 + 8 * 4

    def test_identity_sweep(self):
        for n in range(1, 7):
            for m in range(0, 7):
                clauses = tuple(tuple([((j + i) % n) + 1 if k == 0 else
                                       -((((j + i + 1) % n) + 1)) if k == 1 else
                                       (((j + i + 2) % n) + 1)
                                       for k in range(3)])
                                for i, j in zip(range(m), itertools.repeat(0)))
                if n < 3:
                    clauses = ()
                    if m:
                        continue
                f = Formula(n, clauses)
                inst = reduce_to_detic(f)
                assert inst.graph.n == 10 * n + 8 * len(clauses)
                assert inst.graph.m == 14 * n + 12 * len(clauses)
                assert inst.k == 9 * n + 8 * len(clauses)

    def test_structure(self):
        inst = reduce_to_detic(parse_dimacs(EXAMPLE))
        # every clause contact has exactly 3 edges leaving its block
        for j, clause in enumerate(inst.formula.clauses, start=1):
            c = inst.clause_vertex[j]
            base = inst.clause_base(j)
            outside = [u for u in inst.graph.neighbors(c) if not base <= u < base + 8]
            assert sorted(outside) == sorted(inst.literal_vertex[lit] for lit in clause)
        # designated plumbing is exactly what propagation forces
        assert forced_detectors(inst.graph, CodeKind.DETIC) == inst.designated
        assert len(inst.designated) == 8 * 5 + 8 * 4


class TestCertificates:
    def test_round_trip_both_ways(self):
        f = parse_dimacs(EXAMPLE)
        inst = reduce_to_detic(f)
        for assignment in itertools.islice(f.satisfying_assignments(), 5):
            code = assignment_to_code(inst, assignment)
            assert len(code) == inst.k
            assert verify_code(inst.graph, code, CodeKind.DETIC).ok
            assert code_to_assignment(inst, code) == assignment

    def test_falsifying_assignment_fails_verify(self):
        f = parse_dimacs(EXAMPLE)
        inst = reduce_to_detic(f)
        bad = {i: True for i in range(1, 6)}
        assert not f.evaluate(bad)
        assert not verify_code(inst.graph, assignment_to_code(inst, bad),
                               CodeKind.DETIC).ok

    def test_incomplete_assignment_rejected(self):
        inst = reduce_to_detic(Formula(2, ()))
        with pytest.raises(ValueError, match="misses"):
            assignment_to_code(inst, {1: True})

    def test_over_budget_rejected(self):
        inst = reduce_to_detic(Formula(1, ()))
        with pytest.raises(ValueError, match="budget"):
            code_to_assignment(inst, range(inst.graph.n))

    def test_invalid_code_rejected(self):
        inst = reduce_to_detic(Formula(1, ()))
        with pytest.raises(ValueError, match="not a valid code"):
            code_to_assignment(inst, range(inst.k))

    def test_solver_witness_decodes(self):
        f = Formula(2, ((1, 2, 0),)) if False else Formula(3, ((1, -2, 3),))
        inst = reduce_to_detic(f)
        res = min_code(inst.graph, CodeKind.DETIC, budget=inst.k)
        assert res.decision is True
        assignment = code_to_assignment(inst, res.witness)
        assert f.evaluate(assignment)


class TestMapIO:
    def test_round_trip(self):
        inst = reduce_to_detic(parse_dimacs(EXAMPLE))
        buf = io.StringIO()
        write_instance_map(inst, buf)
        k, literal_vertex = read_instance_map(io.StringIO(buf.getvalue()))
        assert k == inst.k and literal_vertex == inst.literal_vertex

    def test_reader_rejects_garbage(self):
        with pytest.raises(FormulaError):
            read_instance_map(io.StringIO("q nonsense\n"))
        with pytest.raises(FormulaError):
            read_instance_map(io.StringIO("l 1 5\n"))  # no k line


class TestGadgetContracts:
    def test_shipped_templates_pass(self):
        report = verify_gadget_contracts()
        assert report.passed
        assert {cid for cid, _, _ in report.results} == \
            {"V1", "V2", "V3", "C1", "C2", "C3", "V4/C4"}

    def test_single_edge_deletion_mutation_coverage(self):
        # every mutant must fail a contract, and in fact every one trips a
        # behavioral contract, not merely the edge-count checks
        behavioral = {"V2", "V3", "C2", "C3", "V4/C4"}
        for i in range(len(VAR_EDGES)):
            mutant = VAR_EDGES[:i] + VAR_EDGES[i + 1:]
            rep = verify_gadget_contracts(mutant, CLAUSE_EDGES)
            failed = {cid for cid, ok, _ in rep.results if not ok}
            assert failed, f"variable-gadget mutant {i} passed all contracts"
            assert failed & behavioral, f"variable-gadget mutant {i} only failed counting"
        for i in range(len(CLAUSE_EDGES)):
            mutant = CLAUSE_EDGES[:i] + CLAUSE_EDGES[i + 1:]
            rep = verify_gadget_contracts(VAR_EDGES, mutant)
            failed = {cid for cid, ok, _ in rep.results if not ok}
            assert failed, f"clause-gadget mutant {i} passed all contracts"
            assert failed & behavioral, f"clause-gadget mutant {i} only failed counting"


class TestDecisionEquivalence:
    def test_small_satisfiability_equivalence(self):
        rng = random.Random(4242)
        for _ in range(25):
            f = random_formula(rng, rng.randint(3, 4), rng.randint(1, 3))
            inst = reduce_to_detic(f)
            sat = any(True for _ in f.satisfying_assignments())
            res = min_code(inst.graph, CodeKind.DETIC, budget=inst.k)
            assert res.decision == sat, f.clauses
