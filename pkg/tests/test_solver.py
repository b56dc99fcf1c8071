import os
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from detcode import (
    CodeKind,
    SolverLimitError,
    SolverTimeout,
    TIME_LIMIT_ENV,
    build_graph,
    compile_constraints,
    cycle_graph,
    detic_exists,
    extremal_cubic,
    forced_detectors,
    g77,
    hypercube,
    is_valid_code,
    min_code,
    min_code_bruteforce,
    path_graph,
    prism,
    propagate,
    random_gnp,
    verify_code,
)
from conftest import naive_minimum, naive_verify, random_graphs


class TestCompileAndPropagate:
    def test_compile_feasibility_matches_full_set(self):
        for g in random_graphs(3, 80, 8):
            for kind in CodeKind:
                cons, reason = compile_constraints(g, kind)
                full_ok = verify_code(g, range(g.n), kind).ok
                assert (reason is None) == full_ok, (kind, g.edges)

    def test_infeasibility_reasons(self):
        # a lone vertex self-dominates under closed sensing, so only OLD rejects it
        _, reason = compile_constraints(build_graph(1, []), CodeKind.IC)
        assert reason is None
        _, reason = compile_constraints(build_graph(1, []), CodeKind.OLD)
        assert reason == ("isolated", 0)
        from detcode import complete_graph
        _, reason = compile_constraints(complete_graph(2), CodeKind.IC)
        assert reason == ("closed-twins", 0, 1)
        twins = build_graph(3, [(0, 2), (1, 2)])
        _, reason = compile_constraints(twins, CodeKind.OLD)
        assert reason == ("open-twins", 0, 1)

    def test_root_propagation_never_conflicts_when_feasible(self):
        for g in random_graphs(17, 60, 9):
            for kind in CodeKind:
                cons, reason = compile_constraints(g, kind)
                if reason is None:
                    _, _, conflict = propagate(cons, 0, 0)
                    assert conflict is None


class TestForced:
    def test_forced_subset_of_every_valid_code(self):
        from itertools import combinations
        for g in random_graphs(29, 25, 7):
            for kind in CodeKind:
                if not verify_code(g, range(g.n), kind).ok:
                    continue
                forced = forced_detectors(g, kind)
                for k in range(g.n + 1):
                    for combo in combinations(range(g.n), k):
                        if naive_verify(g, combo, kind):
                            assert forced <= set(combo), (kind, g.edges)

    def test_pendant_support_forced(self):
        # a pendant's support is in every dominating structure
        g = path_graph(4)
        assert {1, 2} <= forced_detectors(g, CodeKind.IC)


class TestMinCode:
    def test_known_values(self):
        assert min_code(g77(), CodeKind.DETIC).optimum == 7
        assert min_code(path_graph(3), CodeKind.IC).optimum == 2
        assert min_code(hypercube(3), CodeKind.DETIC).optimum == 7

    def test_infeasible_result(self):
        res = min_code(cycle_graph(12), CodeKind.DETIC)
        assert not res.feasible
        assert res.optimum is None and res.witness is None
        assert res.infeasible_witness == ("bad-edge", 0, 1, 0)

    def test_density(self):
        res = min_code(prism(8), CodeKind.DETIC)
        assert res.density == Fraction(res.optimum, 16) == Fraction(3, 4)

    def test_witness_is_valid_and_optimal_vs_oracle(self):
        for g in random_graphs(41, 40, 7):
            for kind in CodeKind:
                res = min_code(g, kind)
                naive = naive_minimum(g, kind)
                if not res.feasible:
                    assert naive is None
                    continue
                assert naive is not None and res.optimum == naive[0]
                assert naive_verify(g, res.witness, kind)

    @given(st.integers(1, 8), st.integers(0, 10 ** 6))
    @settings(max_examples=80, deadline=None)
    def test_property_matches_bruteforce(self, n, seed):
        g = random_gnp(n, 0.4, random.Random(seed))
        a = min_code(g, CodeKind.DETIC)
        b = min_code_bruteforce(g, CodeKind.DETIC)
        assert a.feasible == b.feasible and a.optimum == b.optimum

    def test_budget_semantics(self):
        g = prism(6)
        opt = min_code(g, CodeKind.DETIC).optimum
        yes = min_code(g, CodeKind.DETIC, budget=opt)
        no = min_code(g, CodeKind.DETIC, budget=opt - 1)
        assert yes.decision is True and len(yes.witness) <= opt
        assert is_valid_code(g, sum(1 << v for v in yes.witness), CodeKind.DETIC)
        assert no.decision is False and no.witness is None

    def test_budget_deterministic_witness(self):
        g = prism(6)
        a = min_code(g, CodeKind.DETIC, budget=12)
        b = min_code(g, CodeKind.DETIC, budget=12)
        assert a.witness == b.witness

    def test_workers_agree_on_optimum(self):
        for seed in (1, 2, 3):
            g = random_gnp(9, 0.45, random.Random(seed))
            one = min_code(g, CodeKind.DETIC)
            two = min_code(g, CodeKind.DETIC, workers=2)
            assert one.feasible == two.feasible
            assert one.optimum == two.optimum
            if one.feasible:
                assert one.witness == two.witness  # both minimize (size, mask)

    def test_max_free_limit(self):
        g = cycle_graph(30)
        with pytest.raises(SolverLimitError):
            min_code(g, CodeKind.IC, max_free=10)

    def test_time_limit(self):
        g = random_gnp(16, 0.35, random.Random(9))
        if not detic_exists(g):
            pytest.skip("unlucky seed")
        os.environ[TIME_LIMIT_ENV] = "0.000001"
        try:
            with pytest.raises(SolverTimeout):
                min_code(g, CodeKind.DETIC)
        finally:
            del os.environ[TIME_LIMIT_ENV]

    def test_argument_validation(self):
        with pytest.raises(ValueError):
            min_code(path_graph(3), CodeKind.IC, budget=-1)
        with pytest.raises(ValueError):
            min_code(path_graph(3), CodeKind.IC, workers=0)


class TestBruteforce:
    def test_scale_guard(self):
        with pytest.raises(ValueError):
            min_code_bruteforce(cycle_graph(25), CodeKind.IC)

    def test_infeasible_marker(self):
        res = min_code_bruteforce(cycle_graph(4), CodeKind.DETIC)
        assert not res.feasible
        assert res.infeasible_witness == ("exhausted-all-subsets",)


class TestExtremalCubic:
    def test_validation(self):
        with pytest.raises(ValueError):
            extremal_cubic(7, "max")
        with pytest.raises(ValueError):
            extremal_cubic(8, "median")

    def test_min_at_8(self):
        value, g = extremal_cubic(8, "min")
        res = min_code(g, CodeKind.DETIC)
        assert res.optimum == value
        # the witness is genuinely extremal among feasible cubic graphs
        from detcode import enumerate_cubic
        values = [min_code(h, CodeKind.DETIC).optimum
                  for h in enumerate_cubic(8) if detic_exists(h)]
        assert value == min(values)
