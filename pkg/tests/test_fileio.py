import pytest

from semicomplete.digraph import PatternDigraph, SemiCompleteDigraph, gen_random_tournament
from semicomplete.errors import InputFormatError
from semicomplete.fileio import (
    format_decomposition,
    format_digraph,
    format_pattern,
    format_separation,
    parse_decomposition,
    parse_digraph,
    parse_pattern,
    parse_separation,
    parse_triple_parts,
)
from semicomplete.separations import Separation, separation_from_sets


class TestDigraphFile:
    def test_roundtrip(self):
        D = gen_random_tournament(6, seed=2)
        n, arcs = parse_digraph(format_digraph(D))
        assert n == 6
        assert SemiCompleteDigraph(n, arcs=arcs) == D

    def test_rejects_out_of_range(self):
        with pytest.raises(InputFormatError):
            parse_digraph("2 1\n1 3\n")

    def test_rejects_wrong_count(self):
        with pytest.raises(InputFormatError):
            parse_digraph("2 2\n1 2\n")

    def test_rejects_duplicate_arc(self):
        with pytest.raises(InputFormatError):
            parse_digraph("2 2\n1 2\n1 2\n")

    def test_comments_ignored(self):
        n, arcs = parse_digraph("# a tournament\n2 1\n1 2 # forward\n")
        assert n == 2 and arcs == [(0, 1)]


class TestPatternFile:
    def test_roundtrip_with_roots(self):
        H = PatternDigraph(3, ((0, 1), (0, 1), (1, 2)), roots=(0, 2))
        parsed = parse_pattern(format_pattern(H))
        assert parsed == H

    def test_multiplicity_preserved(self):
        H = parse_pattern("2 3 0\n\n1 2\n1 2\n2 1\n")
        assert H.arcs == ((0, 1), (0, 1), (1, 0))

    def test_loop_subdivided(self):
        H = parse_pattern("1 1 0\n\n1 1\n")
        assert H.n == 2
        assert set(H.arcs) == {(0, 1), (1, 0)}

    def test_missing_roots_rejected(self):
        with pytest.raises(InputFormatError):
            parse_pattern("2 1 1\n\n1 2\n")

    def test_root_out_of_range(self):
        with pytest.raises(InputFormatError):
            parse_pattern("2 0 1\n3\n")


class TestDecompositionFile:
    def test_roundtrip(self):
        bags = (frozenset({0, 2}), frozenset({0, 1}))
        text = format_decomposition(bags)
        assert parse_decomposition(text, 3) == bags

    def test_comments_and_blanks(self):
        bags = parse_decomposition("# width 1\n1 3\n\n1 2\n", 3)
        assert bags == (frozenset({0, 2}), frozenset({0, 1}))

    def test_out_of_range(self):
        with pytest.raises(InputFormatError):
            parse_decomposition("1 4\n", 3)


class TestTripleFile:
    def test_parse(self):
        parts = parse_triple_parts("1 2\n3 4\n5 6\n", 6)
        assert parts == ((0, 1), (2, 3), (4, 5))

    def test_wrong_line_count(self):
        with pytest.raises(InputFormatError):
            parse_triple_parts("1\n2\n", 2)


class TestSeparationText:
    def test_roundtrip(self):
        sep = separation_from_sets({0, 1}, {1, 2})
        text = format_separation(sep)
        assert text == "A: 1 2 | B: 2 3"
        assert parse_separation(text, 3) == sep

    def test_empty_side(self):
        sep = Separation(0, 0b111)
        text = format_separation(sep)
        assert parse_separation(text, 3) == sep

    def test_malformed(self):
        with pytest.raises(InputFormatError):
            parse_separation("A: 1 2 B: 3", 3)
