import pytest

from conftest import build_triple_host
from semicomplete.digraph import PatternDigraph, RootedHost, SemiCompleteDigraph, gen_transitive
from semicomplete.errors import InputFormatError, ThresholdError
from semicomplete.irrelevant import (
    check_answer_preserved,
    find_irrelevant_vertex,
    flow_checkable,
    p_threshold,
)

SINGLE_ARC = PatternDigraph(2, ((0, 1),), roots=(0, 1))


class TestPThreshold:
    def test_values(self):
        assert p_threshold(0) == 5
        assert p_threshold(1) == 165
        assert p_threshold(2) == 485


class TestFlowCheckable:
    def test_single_arc(self):
        assert flow_checkable(SINGLE_ARC)

    def test_parallel_arcs(self):
        assert flow_checkable(PatternDigraph(2, ((0, 1),) * 3, roots=(0, 1)))

    def test_two_pairs_not(self):
        H = PatternDigraph(4, ((0, 1), (2, 3)), roots=(0, 1, 2, 3))
        assert not flow_checkable(H)

    def test_unrooted_endpoint_not(self):
        assert not flow_checkable(PatternDigraph(2, ((0, 1),), roots=(0,)))


class TestFindIrrelevantVertex:
    def test_basic_run_b_empty_branch(self):
        rooted, triple, meta = build_triple_host(165, seed=1)
        rep = find_irrelevant_vertex(SINGLE_ARC, rooted, triple, k=1)
        assert rep.phase1_branch == "B_empty"
        assert rep.x in set(meta["B"])
        assert len(rep.X) >= 16 + 16 + 1

    def test_aux_s_branch(self):
        rooted, triple, meta = build_triple_host(165, seed=2, phase1_spoilers=True)
        rep = find_irrelevant_vertex(SINGLE_ARC, rooted, triple, k=1)
        assert rep.phase1_branch == "aux_S"
        assert rep.s_size >= 4 * (16 + 16 + 1)
        assert rep.x in set(meta["B"])

    def test_aux_s_prime_branch(self):
        rooted, triple, meta = build_triple_host(165, seed=3, phase2_spoilers=True)
        rep = find_irrelevant_vertex(SINGLE_ARC, rooted, triple, k=1)
        assert rep.phase2_branch == "aux_S_prime"
        assert rep.x in set(meta["B"])

    def test_triple_too_small_rejected(self):
        rooted, triple, _meta = build_triple_host(40, seed=4)
        with pytest.raises(ThresholdError):
            find_irrelevant_vertex(SINGLE_ARC, rooted, triple, k=1)

    def test_roots_in_triple_rejected(self):
        rooted, triple, meta = build_triple_host(165, seed=5)
        bad = RootedHost(rooted.host, (meta["B"][0], meta["t"]))
        with pytest.raises(InputFormatError):
            find_irrelevant_vertex(SINGLE_ARC, bad, triple, k=1)

    def test_opportunistic_below_threshold(self):
        rooted, triple, meta = build_triple_host(40, seed=6)
        rep = find_irrelevant_vertex(SINGLE_ARC, rooted, triple, k=1, opportunistic=True)
        assert rep.x in set(meta["B"])

    def test_default_k_is_pattern_size(self):
        rooted, triple, _ = build_triple_host(165, seed=7)
        # |H| = 3 for a single arc, so p(3) = 965 > 165 under the default
        with pytest.raises(ThresholdError):
            find_irrelevant_vertex(SINGLE_ARC, rooted, triple)


class TestAnswerPreserved:
    def test_yes_instance_preserved(self):
        rooted, triple, meta = build_triple_host(165, seed=8)
        rep = find_irrelevant_vertex(SINGLE_ARC, rooted, triple, k=1)
        assert check_answer_preserved(SINGLE_ARC, rooted, rep.x)

    def test_no_instance_preserved(self):
        rooted, triple, meta = build_triple_host(165, seed=9, yes_instance=False)
        rep = find_irrelevant_vertex(SINGLE_ARC, rooted, triple, k=1)
        assert check_answer_preserved(SINGLE_ARC, rooted, rep.x)

    def test_deleting_a_root_is_rejected(self):
        rooted, _triple, _meta = build_triple_host(165, seed=10)
        with pytest.raises(InputFormatError):
            check_answer_preserved(SINGLE_ARC, rooted, rooted.roots[0])

    def test_root_adjacent_bridge_can_flip(self):
        # deleting the only middle vertex of the unique s -> t route flips
        # the answer, which the checker must report as False
        T = SemiCompleteDigraph(
            3, arcs=[(0, 1), (1, 2), (2, 0)]
        )  # 0 -> 1 -> 2, and 2 -> 0
        rooted = RootedHost(T, (0, 2))
        assert not check_answer_preserved(SINGLE_ARC, rooted, 1)

    def test_unsat_both_sides(self):
        rooted, triple, meta = build_triple_host(165, seed=11, yes_instance=False)
        x = meta["B"][3]
        assert check_answer_preserved(SINGLE_ARC, rooted, x)
