import random

import pytest
from hypothesis import given, settings, strategies as st

from detcode import (
    CodeKind,
    build_graph,
    check_cubic_propositions,
    complete_graph,
    cycle_graph,
    detic_exists,
    domination_level,
    g77,
    is_k_distinguished,
    is_sharp2_distinguished,
    is_valid_code,
    min_code,
    path_graph,
    prism,
    random_gnp,
    verify_code,
)
from conftest import naive_detic_exists, naive_verify, random_graphs


ALL_KINDS = (CodeKind.IC, CodeKind.LD, CodeKind.OLD, CodeKind.DETIC)


class TestKindParsing:
    @pytest.mark.parametrize("text,kind", [
        ("detic", CodeKind.DETIC), ("DET:IC", CodeKind.DETIC),
        ("det-ic", CodeKind.DETIC), ("ic", CodeKind.IC),
        ("LD", CodeKind.LD), ("old", CodeKind.OLD),
    ])
    def test_parse(self, text, kind):
        assert CodeKind.parse(text) is kind

    def test_parse_rejects_unknown(self):
        with pytest.raises(ValueError):
            CodeKind.parse("idc")


class TestPredicates:
    def test_domination_level(self):
        g = path_graph(3)
        assert domination_level(g, {0, 1, 2}, 1) == 3
        assert domination_level(g, {0}, 2) == 0

    def test_distinguishing(self):
        g = path_graph(4)
        assert is_k_distinguished(g, {0, 3}, 0, 3, 1)
        assert not is_k_distinguished(g, set(), 0, 3, 1)
        with pytest.raises(ValueError):
            is_k_distinguished(g, {0}, 1, 1, 1)

    def test_sharp2(self):
        # vertices 0 and 3 of P4: sides {0,1} and {2,3}
        g = path_graph(4)
        assert is_sharp2_distinguished(g, {0, 1}, 0, 3)
        assert not is_sharp2_distinguished(g, {0, 2}, 0, 3)

    def test_detector_set_types(self):
        g = path_graph(3)
        with pytest.raises(TypeError):
            verify_code(g, 5, CodeKind.IC)
        with pytest.raises(ValueError):
            verify_code(g, {7}, CodeKind.IC)


class TestVerifyAgainstOracle:
    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_random_agreement(self, kind):
        rng = random.Random(hash(kind.value) & 0xffff)
        for g in random_graphs(23 + len(kind.value), 120, 9):
            s = {v for v in range(g.n) if rng.random() < 0.6}
            expected = naive_verify(g, s, kind)
            report = verify_code(g, s, kind)
            assert report.ok == expected, (kind, g.edges, sorted(s))
            assert is_valid_code(g, sum(1 << v for v in s), kind) == expected

    @given(st.integers(1, 8), st.integers(0, 10 ** 6), st.integers(0, 255))
    @settings(max_examples=150, deadline=None)
    def test_property_agreement_detic(self, n, seed, smask):
        g = random_gnp(n, 0.5, random.Random(seed))
        s = {v for v in range(n) if (smask >> v) & 1}
        assert verify_code(g, s, CodeKind.DETIC).ok == naive_verify(g, s, CodeKind.DETIC)

    def test_full_set_verdicts(self):
        # cycles never admit a DETIC, even with every vertex a detector,
        # but the full set is a fine OLD set on C7
        g = cycle_graph(7)
        assert not verify_code(g, range(7), CodeKind.DETIC).ok
        assert verify_code(g, range(7), CodeKind.OLD).ok
        # prisms are cubic, twin-free, triangle-free for k >= 5
        p = prism(5)
        assert verify_code(p, range(p.n), CodeKind.DETIC).ok

    def test_check_all_pairs_matches_default_verdict(self):
        for g in random_graphs(91, 40, 8):
            s = set(range(0, g.n, 2))
            a = verify_code(g, s, CodeKind.DETIC)
            b = verify_code(g, s, CodeKind.DETIC, check_all_pairs=True)
            assert a.ok == b.ok


class TestViolations:
    def test_sorted_and_typed(self):
        g = path_graph(5)
        report = verify_code(g, {2}, CodeKind.DETIC)
        assert not report.ok
        keys = [v.sort_key() for v in report.violations]
        assert keys == sorted(keys)
        kinds = {v.kind for v in report.violations}
        assert kinds <= {"under-dominated", "undistinguished"}

    def test_under_domination_level_reported(self):
        g = path_graph(3)
        report = verify_code(g, {0}, CodeKind.DETIC)
        levels = {v.vertices[0]: v.level for v in report.violations
                  if v.kind == "under-dominated"}
        assert levels[2] == 0 and levels[0] == 1

    def test_report_to_dict(self):
        import json
        report = verify_code(path_graph(3), {0}, CodeKind.IC)
        json.dumps(report.to_dict(), sort_keys=True)


class TestExistence:
    def test_matches_full_set_verdict_small(self):
        # equivalence on every labeled graph with n <= 4 (full sweep in criterion 3)
        from conftest import all_labeled_graphs
        for n in range(1, 5):
            for g in all_labeled_graphs(n):
                assert detic_exists(g).exists == verify_code(g, range(g.n), CodeKind.DETIC).ok

    def test_matches_naive_rule(self):
        for g in random_graphs(37, 150, 10):
            assert detic_exists(g).exists == naive_detic_exists(g)

    def test_witness_kinds(self):
        assert detic_exists(build_graph(1, [])).witness == ("isolated", 0)
        # pendant pair: open twins
        g = build_graph(3, [(0, 2), (1, 2)])
        assert detic_exists(g).witness == ("open-twins", 0, 1)
        rep = detic_exists(cycle_graph(12))
        assert rep.witness == ("bad-edge", 0, 1, 0)
        assert detic_exists(g77()).exists

    def test_complete_graphs_have_closed_twins(self):
        rep = detic_exists(complete_graph(5))
        assert not rep.exists


class TestCubicPropositions:
    def test_requires_cubic(self):
        with pytest.raises(ValueError):
            check_cubic_propositions(path_graph(4), {0, 1, 2, 3})

    def test_requires_valid_code(self):
        g = prism(5)
        with pytest.raises(ValueError):
            check_cubic_propositions(g, {0})

    def test_empty_on_optimum(self):
        g = prism(5)
        res = min_code(g, CodeKind.DETIC)
        assert check_cubic_propositions(g, res.witness) == []

    def test_full_set_passes(self):
        g = prism(7)
        assert check_cubic_propositions(g, range(g.n)) == []
