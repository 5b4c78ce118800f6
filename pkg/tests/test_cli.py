import json

import pytest

from semicomplete.cli import main
from semicomplete.digraph import gen_counterexample, gen_random_tournament
from semicomplete.fileio import format_digraph, format_pattern
from semicomplete.digraph import PatternDigraph


@pytest.fixture()
def host_file(tmp_path):
    def write(D, name="host.txt"):
        path = tmp_path / name
        path.write_text(format_digraph(D))
        return str(path)

    return write


@pytest.fixture()
def pattern_file(tmp_path):
    def write(H, name="pattern.txt"):
        path = tmp_path / name
        path.write_text(format_pattern(H))
        return str(path)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestGenValidate:
    def test_gen_random_requires_seed(self, capsys):
        code, _out, err = run(capsys, "gen", "random", "--n", "6")
        assert code == 2 and "seed" in err

    def test_gen_and_validate_roundtrip(self, capsys, tmp_path):
        code, out, _ = run(capsys, "gen", "random", "--n", "7", "--seed", "3")
        assert code == 0
        host = tmp_path / "t.txt"
        host.write_text(out)
        code, out2, _ = run(capsys, "--json", "validate", str(host))
        assert code == 0
        flags = json.loads(out2)
        assert flags == {"simple": True, "semicomplete": True, "tournament": True}

    def test_gen_counterexample_prints_roots(self, capsys):
        code, out, err = run(capsys, "gen", "counterexample", "--n", "6")
        assert code == 0
        assert out.startswith("12 ")
        assert "roots" in err

    def test_gen_counterexample_odd_rejected(self, capsys):
        code, _out, _err = run(capsys, "gen", "counterexample", "--n", "5")
        assert code == 2


class TestDecompose:
    def test_decomposition_output(self, capsys, host_file):
        path = host_file(gen_random_tournament(8, 1))
        code, out, _ = run(capsys, "decompose", path, "--k", "2")
        assert code == 0
        assert out.splitlines()[0] == "DECOMPOSITION"

    def test_jungle_output(self, capsys, host_file):
        path = host_file(gen_random_tournament(16, 2))
        code, out, _ = run(capsys, "decompose", path, "--k", "1", "--no-shortcut")
        assert code == 0
        assert out.splitlines()[0] in ("DECOMPOSITION", "JUNGLE")

    def test_json_mode(self, capsys, host_file):
        path = host_file(gen_random_tournament(8, 1))
        code, out, _ = run(capsys, "--json", "decompose", path, "--k", "2")
        assert code == 0
        payload = json.loads(out)
        assert payload["kind"] == "decomposition"


class TestContainmentCommands:
    def test_check_containment_yes_with_witness(self, capsys, host_file, pattern_file, tmp_path):
        host = host_file(gen_counterexample(8).host)
        pat = pattern_file(PatternDigraph(2, ((0, 1),)))
        code, out, _ = run(
            capsys, "check-containment", "--pattern", pat, "--host", host, "--witness"
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "YES"
        assert any(line.startswith("MODEL") for line in lines)

    def test_check_immersion_rooted(self, capsys, host_file, pattern_file):
        from semicomplete.digraph import gen_transitive

        host = host_file(gen_transitive(4))
        pat = pattern_file(PatternDigraph(2, ((0, 1),), roots=(0, 1)))
        code, out, _ = run(
            capsys,
            "check-immersion",
            "--rooted",
            "--pattern",
            pat,
            "--host",
            host,
            "--roots",
            "1",
            "4",
        )
        assert code == 0 and out.splitlines()[0] == "YES"
        code, out, _ = run(
            capsys,
            "check-immersion",
            "--rooted",
            "--pattern",
            pat,
            "--host",
            host,
            "--roots",
            "4",
            "1",
        )
        assert code == 0 and out.splitlines()[0] == "NO"

    def test_with_explicit_decomposition(self, capsys, host_file, pattern_file, tmp_path):
        from semicomplete.digraph import gen_transitive

        T = gen_transitive(4)
        host = host_file(T)
        pat = pattern_file(PatternDigraph(2, ((0, 1),)))
        dec = tmp_path / "dec.txt"
        dec.write_text("4\n3\n2\n1\n")
        code, out, _ = run(
            capsys,
            "check-containment",
            "--pattern",
            pat,
            "--host",
            host,
            "--decomposition",
            str(dec),
        )
        assert code == 0 and out.splitlines()[0] == "YES"


class TestVerifyAndOracle:
    def test_verify_decomposition(self, capsys, host_file, tmp_path):
        from semicomplete.digraph import gen_transitive

        host = host_file(gen_transitive(3))
        dec = tmp_path / "dec.txt"
        dec.write_text("3\n2\n1\n")
        code, out, _ = run(
            capsys, "verify", "decomposition", "--host", host, "--file", str(dec)
        )
        assert code == 0 and out.startswith("VALID width=0")

    def test_verify_separation(self, capsys, host_file):
        from semicomplete.digraph import SemiCompleteDigraph

        host = host_file(SemiCompleteDigraph(2, arcs=[(0, 1)]))
        code, out, _ = run(
            capsys, "verify", "separation", "--host", host, "--separation", "A: 2 | B: 1"
        )
        assert code == 0 and out.startswith("VALID order=0")

    def test_oracle_pathwidth(self, capsys, host_file):
        from semicomplete.digraph import SemiCompleteDigraph

        host = host_file(SemiCompleteDigraph(3, arcs=[(0, 1), (1, 2), (2, 0)]))
        code, out, _ = run(capsys, "oracle", "pathwidth", "--host", host)
        assert code == 0 and out.strip().endswith("1")

    def test_oracle_vdp_counterexample(self, capsys, host_file):
        rooted = gen_counterexample(6)
        host = host_file(rooted.host)
        pairs = " ".join(str(r + 1) for r in rooted.roots)
        code, out, _ = run(capsys, "oracle", "vdp", "--host", host, "--pairs", pairs)
        assert code == 0
        assert out.splitlines()[0] == "solutions 1"

    def test_oracle_containment_compare(self, capsys, host_file, pattern_file):
        from semicomplete.digraph import gen_transitive

        host = host_file(gen_transitive(5))
        pat = pattern_file(PatternDigraph(3, ((0, 1), (1, 2), (2, 0))))
        code, out, _ = run(
            capsys,
            "oracle",
            "containment",
            "--host",
            host,
            "--pattern",
            pat,
            "--compare",
        )
        assert code == 0
        assert "NO" in out and "agrees" in out


class TestFindTriple:
    def test_find_triple_on_counterexample(self, capsys, host_file):
        host = host_file(gen_counterexample(12).host)
        code, out, _ = run(capsys, "find-triple", host, "--k", "2", "--opportunistic")
        assert code == 0
        assert "matching:" in out

    def test_theoretical_refuses(self, capsys, host_file):
        host = host_file(gen_counterexample(8).host)
        code, out, _ = run(capsys, "find-triple", host, "--k", "2")
        assert code == 3
        assert "NO TRIPLE" in out


class TestIrrelevantCommand:
    def test_full_run(self, capsys, tmp_path):
        from conftest import build_triple_host
        from semicomplete.fileio import format_digraph

        rooted, triple, meta = build_triple_host(165, seed=4)
        host = tmp_path / "host.txt"
        host.write_text(format_digraph(rooted.host))
        pat = tmp_path / "pat.txt"
        pat.write_text("2 1 2\n1 2\n1 2\n")
        trip = tmp_path / "triple.txt"
        trip.write_text(
            "\n".join(
                " ".join(str(v + 1) for v in part)
                for part in (triple.a, triple.b, triple.c)
            )
            + "\n"
        )
        code = main(
            [
                "irrelevant",
                "--pattern",
                str(pat),
                "--host",
                str(host),
                "--triple",
                str(trip),
                "--roots",
                str(rooted.roots[0] + 1),
                str(rooted.roots[1] + 1),
                "--k",
                "1",
            ]
        )
        out = capsys.readouterr().out
        assert code == 0
        assert "irrelevant vertex:" in out

    def test_threshold_exit_code(self, capsys, tmp_path):
        from conftest import build_triple_host
        from semicomplete.fileio import format_digraph

        rooted, triple, _meta = build_triple_host(40, seed=4)
        host = tmp_path / "host.txt"
        host.write_text(format_digraph(rooted.host))
        pat = tmp_path / "pat.txt"
        pat.write_text("2 1 2\n1 2\n1 2\n")
        trip = tmp_path / "triple.txt"
        trip.write_text(
            "\n".join(
                " ".join(str(v + 1) for v in part)
                for part in (triple.a, triple.b, triple.c)
            )
            + "\n"
        )
        code = main(
            [
                "irrelevant",
                "--pattern",
                str(pat),
                "--host",
                str(host),
                "--triple",
                str(trip),
                "--roots",
                str(rooted.roots[0] + 1),
                str(rooted.roots[1] + 1),
                "--k",
                "1",
            ]
        )
        assert code == 3
