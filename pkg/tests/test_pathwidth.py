import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semicomplete.digraph import (
    SemiCompleteDigraph,
    gen_counterexample,
    gen_random_semicomplete,
    gen_random_tournament,
    gen_transitive,
)
from semicomplete.errors import CertificationError, InputFormatError, ThresholdError
from semicomplete.oracles import brute_force_separations, exact_cutwidth, exact_pathwidth
from semicomplete.pathwidth import (
    approximate_pathwidth,
    balanced_cut,
    build_bundle,
    cutwidth_of_order,
    decomposition_from_bundle,
    decomposition_from_cutwidth_order,
    extract_jungle,
    verify_jungle,
    verify_path_decomposition,
)
from semicomplete.separations import crosses, k_close


def three_cycle():
    return SemiCompleteDigraph(3, arcs=[(0, 1), (1, 2), (2, 0)])


class TestBalancedCut:
    def test_two_vertex_example(self):
        # arc w->u with w=1, u=0; the only candidate is ({u},{w})
        D = SemiCompleteDigraph(2, arcs=[(1, 0)])
        got = balanced_cut(D, {0}, {1}, 1, 0, 1)
        assert got is not None
        assert (got.A, got.B) == (frozenset({0}), frozenset({1}))

    def test_overlapping_terminals_infeasible(self):
        D = SemiCompleteDigraph(2, arcs=[(1, 0)])
        assert balanced_cut(D, {0}, {0}, 1, 0, 1) is None

    def test_negative_parameters_rejected(self):
        D = gen_transitive(3)
        with pytest.raises(InputFormatError):
            balanced_cut(D, set(), set(), -1, 0, 0)

    @pytest.mark.parametrize("seed,n", [(3, 5), (5, 6), (11, 7)])
    def test_completeness_vs_brute_force(self, seed, n):
        D = gen_random_semicomplete(n, seed, extra_rate=0.2)
        singles = [set()] + [{v} for v in range(n)]
        for a, b, c in itertools.product(range(3), repeat=3):
            seps = brute_force_separations(D, b)
            for X in singles:
                for Y in singles:
                    feasible = any(
                        X <= s.A
                        and Y <= s.B
                        and len(s.A - s.B) >= a
                        and len(s.B - s.A) >= c
                        and len(s.A & s.B) <= b
                        for s in seps
                    )
                    got = balanced_cut(D, X, Y, a, b, c)
                    assert (got is not None) == feasible
                    if got is not None:
                        assert X <= got.A and Y <= got.B
                        assert len(got.A - got.B) >= a
                        assert len(got.B - got.A) >= c
                        assert got.order <= b


class TestBuildBundle:
    def test_transitive4_k1_prefixes(self):
        b = build_bundle(gen_transitive(4), 1)
        assert len(b.members) == 5
        sizes = [m.a_mask.bit_count() for m in b.members]
        assert sizes == [0, 1, 2, 3, 4]

    def test_three_cycle_trivial(self):
        b = build_bundle(three_cycle(), 1)
        assert len(b.members) == 2
        assert b.members[0].A == frozenset()
        assert b.members[-1].B == frozenset()

    @given(st.integers(0, 500), st.integers(3, 8), st.integers(1, 3))
    @settings(max_examples=40, deadline=None)
    def test_cross_free_and_non_close(self, seed, n, k):
        D = gen_random_semicomplete(n, seed, extra_rate=0.15)
        members = build_bundle(D, k).members
        for s, t in itertools.combinations(members, 2):
            assert not crosses(s, t)
            assert not k_close(s, t, k)
            assert s.order < k and t.order < k


class TestDecompositionFromBundle:
    def test_transitive4_singletons(self):
        dec = decomposition_from_bundle(build_bundle(gen_transitive(4), 1))
        assert [sorted(b) for b in dec.bags] == [[3], [2], [1], [0]]
        assert dec.width == 0

    def test_three_cycle_single_bag(self):
        dec = decomposition_from_bundle(build_bundle(three_cycle(), 1))
        assert dec.bags == (frozenset({0, 1, 2}),)
        assert dec.width == 2

    def test_always_valid_on_seeded_corpus(self):
        for seed in range(100):
            n = 4 + seed % 9
            D = gen_random_tournament(n, seed)
            dec = decomposition_from_bundle(build_bundle(D, 1 + seed % 3))
            ok, _ = verify_path_decomposition(D, dec.bags)
            assert ok


class TestVerifyPathDecomposition:
    def test_three_cycle_two_bags(self):
        ok, width = verify_path_decomposition(three_cycle(), [{0, 2}, {0, 1}])
        assert ok and width == 1

    def test_transitive_reverse_singletons(self):
        n = 5
        bags = [{v} for v in range(n - 1, -1, -1)]
        ok, width = verify_path_decomposition(gen_transitive(n), bags)
        assert ok and width == 0

    def test_missing_vertex_fails(self):
        ok, _ = verify_path_decomposition(three_cycle(), [{0, 1}])
        assert not ok

    def test_interval_violation_fails(self):
        D = gen_transitive(3)
        ok, _ = verify_path_decomposition(D, [{2}, {1}, {2, 0}])
        assert not ok

    def test_forward_arc_violation_fails(self):
        D = gen_transitive(2)  # arc 0 -> 1
        ok, _ = verify_path_decomposition(D, [{0}, {1}])
        assert not ok


class TestVerifyJungle:
    def test_single_vertex_always(self):
        assert verify_jungle(three_cycle(), [1], 1)

    def test_transitive_pairs_fail(self):
        D = gen_transitive(4)
        for pair in itertools.combinations(range(4), 2):
            assert not verify_jungle(D, pair, 2)

    def test_wrong_size_fails(self):
        assert not verify_jungle(three_cycle(), [0, 1], 1)


class TestExtractJungle:
    def test_degree_scan_k1(self):
        D = gen_random_tournament(7, seed=5)
        j = extract_jungle(D, range(7), 1, 0)
        v = j.vertices[0]
        assert D.out_degree(v) >= 1 and D.in_degree(v) >= 1

    def test_size_precondition(self):
        with pytest.raises(ThresholdError):
            extract_jungle(gen_transitive(4), range(4), 1, 1)

    def test_transitive_region_candidate_bound(self):
        # semi-complete degree counting: at most 2d+1 vertices have
        # out-degree <= d, so with |W| = 5k + 4*ell exactly the candidate
        # count is at least |W| - 4(k + ell) + 2 even in a transitive region
        k, ell = 1, 2
        n = 5 * k + 4 * ell
        D = gen_transitive(n)
        region = range(n)
        need = k + ell
        cands = [
            w
            for w in region
            if D.out_degree(w) >= need and D.in_degree(w) >= need
        ]
        assert len(cands) >= n - 4 * (k + ell) + 2
        j = extract_jungle(D, region, k, ell)
        assert len(j.vertices) == k

    def test_counterexample_region(self):
        # ell relaxed from k^2 so 5k + 4*ell fits the 20-vertex host
        rh = gen_counterexample(10)
        j = extract_jungle(rh.host, range(rh.host.n), 2, 2)
        assert verify_jungle(rh.host, j.vertices, 2)


class TestApproximatePathwidth:
    def test_transitive6_k2(self):
        r = approximate_pathwidth(gen_transitive(6), 2)
        assert r.kind == "decomposition"
        assert r.decomposition.width <= 30

    def test_three_cycle_k1(self):
        r = approximate_pathwidth(three_cycle(), 1)
        assert r.kind == "decomposition"
        assert r.decomposition.width == 2  # approximation; exact pathwidth is 1
        assert exact_pathwidth(three_cycle()) == 1

    def test_every_run_verified_certificate(self):
        for seed in range(40):
            n = 8 + seed % 20
            T = gen_random_tournament(n, seed)
            for k in (1, 2, 3):
                r = approximate_pathwidth(T, k)
                if r.kind == "decomposition":
                    ok, w = verify_path_decomposition(T, r.decomposition.bags)
                    assert ok and w <= 4 * k * k + 7 * k
                else:
                    assert verify_jungle(T, r.jungle.vertices, k)

    def test_jungle_branch_vacuous_at_small_n(self):
        # a bag must exceed 4k^2+7k+1 >= 12 vertices for the jungle branch,
        # so hosts with n <= 9 always come back with a decomposition
        for seed in range(10):
            for n in (5, 7, 9):
                T = gen_random_tournament(n, seed)
                for k in (1, 2):
                    r = approximate_pathwidth(T, k, use_shortcut=False)
                    assert r.kind == "decomposition"

    def test_jungle_soundness_via_oracle(self):
        # direct form of the obstruction claim: any verified k-jungle forces
        # exact pathwidth >= k - 1
        for seed in range(8):
            T = gen_random_tournament(9, seed)
            for k in (2, 3):
                for Z in itertools.combinations(range(9), k):
                    if verify_jungle(T, Z, k):
                        assert exact_pathwidth(T) >= k - 1
                        break

    def test_shortcut_off_still_verified(self):
        T = gen_random_tournament(14, 3)
        r = approximate_pathwidth(T, 1, use_shortcut=False)
        if r.kind == "jungle":
            assert verify_jungle(T, r.jungle.vertices, 1)
        else:
            ok, _ = verify_path_decomposition(T, r.decomposition.bags)
            assert ok


class TestCutwidthConversions:
    def test_transitive_order_zero(self):
        D = gen_transitive(5)
        assert cutwidth_of_order(D, range(5)) == 0
        dec = decomposition_from_cutwidth_order(D, range(5))
        ok, width = verify_path_decomposition(D, dec.bags)
        assert ok and width == 0

    def test_three_cycle_order(self):
        D = three_cycle()
        assert cutwidth_of_order(D, [0, 1, 2]) == 1
        dec = decomposition_from_cutwidth_order(D, [0, 1, 2])
        ok, width = verify_path_decomposition(D, dec.bags)
        assert ok and width <= 2

    def test_non_permutation_rejected(self):
        with pytest.raises(InputFormatError):
            cutwidth_of_order(three_cycle(), [0, 1, 1])
        with pytest.raises(InputFormatError):
            decomposition_from_cutwidth_order(three_cycle(), [0, 1])

    def test_oracle_orders_within_double(self):
        for seed in range(30):
            n = 5 + seed % 5
            D = gen_random_tournament(n, seed)
            ctw, order = exact_cutwidth(D, witness=True)
            assert cutwidth_of_order(D, order) == ctw
            dec = decomposition_from_cutwidth_order(D, order)
            ok, width = verify_path_decomposition(D, dec.bags)
            assert ok and width <= 2 * ctw
