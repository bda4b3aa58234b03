import json
from fractions import Fraction as F

import pytest

from factional_belief.cli import main
from factional_belief.fileio import dump_edge_list
from factional_belief.model import ConcreteGraph

MOTIVATING = {
    "p": "2/5",
    "mu": "1/2",
    "states": {
        "A": {"prob": "1/2", "types": {"alpha": "0", "chi": "4/5", "nu": "1/5"}},
        "B": {"prob": "1/2", "types": {"alpha": "0", "chi": "1/5", "nu": "4/5"}},
    },
}


@pytest.fixture
def prior_file(tmp_path):
    path = tmp_path / "prior.json"
    path.write_text(json.dumps(MOTIVATING))
    return str(path)


@pytest.fixture
def const4_file(tmp_path):
    path = tmp_path / "degs.txt"
    path.write_text("1000 x 4\n")
    return str(path)


class TestAnalyze:
    def test_largest(self, prior_file, const4_file, capsys):
        assert main(["analyze", "--prior", prior_file, "--degrees", const4_file]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "state,X_exact,X_decimal"
        assert out[1] == "A,2432/3125,0.77824"
        assert out[2] == "B,113/3125,0.03616"

    def test_smallest_leq_largest(self, prior_file, const4_file, capsys):
        assert (
            main(
                [
                    "analyze",
                    "--prior",
                    prior_file,
                    "--degrees",
                    const4_file,
                    "--smallest",
                ]
            )
            == 0
        )
        rows = capsys.readouterr().out.splitlines()[1:]
        values = {r.split(",")[0]: F(r.split(",")[1]) for r in rows}
        assert values["A"] <= F(2432, 3125) and values["B"] <= F(113, 3125)

    def test_empty_degree_file(self, prior_file, tmp_path, capsys):
        empty = tmp_path / "empty.txt"
        empty.write_text("")
        assert (
            main(["analyze", "--prior", prior_file, "--degrees", str(empty)]) == 2
        )
        assert "error" in capsys.readouterr().err

    def test_auto_relabel(self, tmp_path, const4_file, capsys):
        swapped = dict(MOTIVATING, states={
            "A": MOTIVATING["states"]["B"],
            "B": MOTIVATING["states"]["A"],
        })
        path = tmp_path / "swapped.json"
        path.write_text(json.dumps(swapped))
        assert main(["analyze", "--prior", str(path), "--degrees", const4_file]) == 2
        assert "--auto-relabel" in capsys.readouterr().err
        assert (
            main(
                [
                    "analyze",
                    "--prior",
                    str(path),
                    "--degrees",
                    const4_file,
                    "--auto-relabel",
                ]
            )
            == 0
        )
        captured = capsys.readouterr()
        assert "swapped" in captured.err

    def test_json_format(self, prior_file, const4_file, capsys):
        assert (
            main(
                [
                    "analyze",
                    "--prior",
                    prior_file,
                    "--degrees",
                    const4_file,
                    "--format",
                    "json",
                ]
            )
            == 0
        )
        doc = json.loads(capsys.readouterr().out)
        assert doc["sizes"] == {"A": "2432/3125", "B": "113/3125"}


class TestPromise:
    def test_single_point(self, prior_file, const4_file, capsys):
        assert (
            main(
                [
                    "promise",
                    "--prior",
                    prior_file,
                    "--degrees",
                    const4_file,
                    "--mu-star",
                    "0",
                    "--epsilon",
                    "1/200",
                    "--delta",
                    "1/200",
                    "--format",
                    "json",
                ]
            )
            == 0
        )
        assert json.loads(capsys.readouterr().out)["outcome"] == "omega"

    def test_strict_null_exit_code(self, tmp_path, const4_file):
        # mu placed inside the epsilon/3 window around e_B(chi+alpha) = 1/5
        doc = dict(MOTIVATING, mu="241/1200")
        path = tmp_path / "null.json"
        path.write_text(json.dumps(doc))
        args = [
            "promise",
            "--prior",
            str(path),
            "--degrees",
            const4_file,
            "--mu-star",
            "3/20",
            "--epsilon",
            "1/200",
            "--delta",
            "1/200",
        ]
        assert main(args) == 0
        assert main(args + ["--strict"]) == 4


class TestSweepDeterminism:
    def test_same_seed_byte_identical(self, prior_file, tmp_path):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        args = [
            "sweep",
            "--prior",
            prior_file,
            "--family",
            "er",
            "--axis",
            "param",
            "--start",
            "1/500",
            "--stop",
            "1/100",
            "--step",
            "1/250",
            "--n",
            "120",
            "--trials",
            "4",
            "--seed",
            "99",
        ]
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_different_seed_differs(self, prior_file, tmp_path):
        outs = []
        for seed in ("99", "100"):
            path = tmp_path / f"s{seed}.csv"
            main(
                [
                    "sweep",
                    "--prior",
                    prior_file,
                    "--family",
                    "er",
                    "--axis",
                    "param",
                    "--start",
                    "1/100",
                    "--stop",
                    "1/100",
                    "--step",
                    "1",
                    "--n",
                    "120",
                    "--trials",
                    "4",
                    "--seed",
                    seed,
                    "--out",
                    str(path),
                ]
            )
            outs.append(path.read_bytes())
        assert outs[0] != outs[1]


class TestOracleCommand:
    def test_triangle_clique_reduce(self, tmp_path, capsys):
        path = tmp_path / "tri.txt"
        dump_edge_list(ConcreteGraph(3, [(0, 1), (1, 2), (0, 2)]), path)
        assert main(["oracle", "--graph", str(path), "--clique-reduce", "3"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["revolt_supported"] and doc["clique_exists"]
        assert doc["probability_exact"] == "970299/2000000"

    def test_budget_exit_code(self, tmp_path, capsys):
        path = tmp_path / "c30.txt"
        dump_edge_list(
            ConcreteGraph(30, [(i, (i + 1) % 30) for i in range(30)]), path
        )
        assert main(["oracle", "--graph", str(path), "--clique-reduce", "3"]) == 3

    def test_inline_edges(self, capsys):
        assert main(["oracle", "--edges", "0-1,1-2,0-2", "--clique-reduce", "3"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["revolt_supported"]

    def test_bad_inline_edges(self, capsys):
        assert main(["oracle", "--edges", "0:1", "--clique-reduce", "1"]) == 2


class TestEpistemicCommand:
    def test_die_report(self, tmp_path, capsys):
        model = {
            "outcomes": ["1", "2", "3", "4", "5", "6"],
            "prob": {str(i): "1/6" for i in range(1, 7)},
            "partitions": {"i": [["1", "2", "3", "4", "5", "6"]]},
        }
        path = tmp_path / "die.json"
        path.write_text(json.dumps(model))
        assert (
            main(
                [
                    "epistemic",
                    "--model",
                    str(path),
                    "--p",
                    "1/2",
                    "--mu",
                    "1",
                    "--event",
                    "2,4,6",
                    "--omega",
                    "3",
                ]
            )
            == 0
        )
        doc = json.loads(capsys.readouterr().out)
        assert doc["common_belief_event"] == ["1", "2", "3", "4", "5", "6"]
        assert doc["common_at_omega_fixpoint"] and doc["common_at_omega_search"]

    def test_verify_prop1(self, capsys):
        assert main(["epistemic", "--verify-prop1", "8", "--seed", "5"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["all_agree"] and doc["models"] == 8


class TestGenCommand:
    def test_sequence_deterministic(self, tmp_path):
        args = [
            "gen",
            "--family",
            "ba",
            "--n",
            "40",
            "--param",
            "2",
            "--seed",
            "8",
        ]
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_graph_output(self, tmp_path):
        out = tmp_path / "g.txt"
        assert (
            main(
                [
                    "gen",
                    "--family",
                    "er",
                    "--n",
                    "15",
                    "--param",
                    "1/5",
                    "--seed",
                    "3",
                    "--kind",
                    "graph",
                    "--out",
                    str(out),
                ]
            )
            == 0
        )
        from factional_belief.fileio import load_edge_list

        assert load_edge_list(out).n == 15


class TestBoundsCommand:
    def test_table(self, prior_file, const4_file, capsys):
        assert (
            main(["bounds", "--prior", prior_file, "--degrees", const4_file]) == 0
        )
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "name,value,clamped,inputs"
        table = {line.split(",")[0]: line.split(",")[1] for line in out[1:]}
        assert table["dependency_chi_star_bound"] == "17"
        assert table["noncandidate_expectation_A"] == "693/3125"
        assert table["markov_noncandidate_bound"] == "1386/3125"


class TestConfigFile:
    def test_config_supplies_defaults(self, prior_file, const4_file, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"prior": prior_file, "degrees": const4_file}))
        assert main(["analyze", "--config", str(cfg)]) == 0
        assert "2432/3125" in capsys.readouterr().out

    def test_flag_overrides_config(self, prior_file, const4_file, tmp_path, capsys):
        other = tmp_path / "degs1.txt"
        other.write_text("1000 x 1\n")
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"prior": prior_file, "degrees": str(other)}))
        assert (
            main(["analyze", "--config", str(cfg), "--degrees", const4_file]) == 0
        )
        assert "2432/3125" in capsys.readouterr().out

    def test_validate_command_on_small_torus(self, prior_file, capsys):
        assert (
            main(
                [
                    "validate",
                    "--prior",
                    prior_file,
                    "--torus",
                    "5",
                    "8",
                    "--trials",
                    "20",
                    "--seed",
                    "4",
                    "--format",
                    "json",
                ]
            )
            == 0
        )
        doc = json.loads(capsys.readouterr().out)
        assert doc["trials"] == 20
        assert doc["expected_candidate_fraction"] == "2432/3125"
        assert doc["envelope_violations"] == 0
