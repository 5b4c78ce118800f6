import pytest

from semicomplete.cliquewidth import cwexpr_from_decomposition, evaluate_cwexpr
from semicomplete.digraph import SemiCompleteDigraph, gen_random_tournament, gen_transitive
from semicomplete.errors import InputFormatError
from semicomplete.pathwidth import PathDecomposition, approximate_pathwidth


class TestConstruction:
    def test_transitive4_two_labels(self):
        T = gen_transitive(4)
        r = approximate_pathwidth(T, 1, use_shortcut=False)
        assert r.decomposition.width == 0
        expr = cwexpr_from_decomposition(T, r.decomposition)
        assert expr.label_count <= 2
        verts, arcs, _ = evaluate_cwexpr(expr)
        assert verts == frozenset(range(4)) and set(arcs) == set(T.arcs())

    def test_single_vertex_expression(self):
        T = SemiCompleteDigraph(1, arcs=[])
        expr = cwexpr_from_decomposition(T, PathDecomposition((frozenset({0}),)))
        assert expr.root == ("intro", 1, 0)

    def test_invalid_decomposition_rejected(self):
        T = gen_transitive(3)
        with pytest.raises(InputFormatError):
            cwexpr_from_decomposition(T, PathDecomposition((frozenset({0}),)))

    def test_label_budget(self):
        for seed in range(20):
            n = 5 + seed % 12
            T = gen_random_tournament(n, seed)
            r = approximate_pathwidth(T, 2)
            expr = cwexpr_from_decomposition(T, r.decomposition)
            assert expr.label_count <= r.decomposition.width + 2

    def test_replay_equality_on_corpus(self):
        for seed in range(50):
            n = 4 + seed % 22
            T = gen_random_tournament(n, seed)
            r = approximate_pathwidth(T, 3)
            expr = cwexpr_from_decomposition(T, r.decomposition)
            verts, arcs, _ = evaluate_cwexpr(expr)
            assert verts == frozenset(range(n))
            assert set(arcs) == set(T.arcs())


class TestEvaluate:
    def test_join_requires_distinct_labels(self):
        with pytest.raises(InputFormatError):
            evaluate_cwexpr(("join", 1, 1, ("intro", 1, 0)))

    def test_union_rejects_shared_vertices(self):
        node = ("intro", 1, 0)
        with pytest.raises(InputFormatError):
            evaluate_cwexpr(("union", node, ("intro", 2, 0)))

    def test_manual_expression(self):
        # 1(a) u 2(b), join 1->2 gives the single arc a->b
        expr = ("join", 1, 2, ("union", ("intro", 1, 0), ("intro", 2, 1)))
        verts, arcs, labels = evaluate_cwexpr(expr)
        assert verts == frozenset({0, 1})
        assert arcs == frozenset({(0, 1)})
        assert labels == {0: 1, 1: 2}

    def test_relabel(self):
        expr = ("relabel", 1, 3, ("intro", 1, 0))
        _verts, _arcs, labels = evaluate_cwexpr(expr)
        assert labels == {0: 3}
