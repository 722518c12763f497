import json

import pytest

from hodgeq.cli import main


@pytest.fixture
def path_csv(tmp_path):
    p = tmp_path / "path.csv"
    p.write_text("voter,i,j,value\nv1,0,1,1.0\nv1,1,2,1.0\n")
    return str(p)


@pytest.fixture
def k3_files(tmp_path):
    edges = tmp_path / "k3.edges"
    edges.write_text("0 1\n0 2\n1 2\n")
    sig = tmp_path / "k3.sig"
    sig.write_text("3\n4\n-5\n")
    return str(edges), str(sig)


@pytest.fixture
def near_curl_files(tmp_path):
    edges = tmp_path / "k3.edges"
    edges.write_text("0 1\n0 2\n1 2\n")
    sig = tmp_path / "curlish.sig"
    # curl direction plus a tiny gradient component: N_* << 0.1
    sig.write_text("1.001\n-1.0\n1.0\n")
    return str(edges), str(sig)


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestRank:
    def test_path_fixture(self, capsys, path_csv):
        code, out, _ = run(capsys, ["rank", "--pairwise", path_csv])
        assert code == 0
        payload = json.loads(out.splitlines()[0])
        assert payload["ranking"] == [2, 1, 0]
        assert "top alternatives" in out

    def test_empty_file(self, capsys, tmp_path):
        p = tmp_path / "empty.csv"
        p.write_text("")
        code, _, err = run(capsys, ["rank", "--pairwise", str(p)])
        assert code != 0
        assert "empty data" in err

    def test_malformed_row_line_number(self, capsys, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("voter,i,j,value\nv1,0,1,1.0\nv1,x,2,1.0\n")
        code, _, err = run(capsys, ["rank", "--pairwise", str(p)])
        assert code != 0
        assert ":3:" in err

    def test_unbalanced_surfaced(self, capsys, tmp_path):
        p = tmp_path / "unbal.csv"
        p.write_text("voter,i,j,value\nv1,0,1,1.0\nv2,0,1,1.0\nv1,1,2,1.0\n")
        code, _, err = run(capsys, ["rank", "--pairwise", str(p)])
        assert code != 0
        assert "unbalanced" in err

    def test_missing_input(self, capsys):
        code, _, err = run(capsys, ["rank"])
        assert code != 0


class TestQsim:
    def test_fixture_passes(self, capsys, k3_files):
        edges, sig = k3_files
        code, out, _ = run(
            capsys, ["qsim", "--edges", edges, "--signal", sig, "--epsilon", "1e-3"]
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["status"] == "ok"
        assert payload["oracle_distance"] <= payload["distance_bound"]

    def test_bounds_invalid_mode(self, capsys, near_curl_files):
        edges, sig = near_curl_files
        code, out, _ = run(
            capsys, ["qsim", "--edges", edges, "--signal", sig, "--epsilon", "0.1"]
        )
        assert code == 0
        assert json.loads(out)["status"] == "bounds-invalid"

    def test_sweep_rows(self, capsys, k3_files):
        edges, sig = k3_files
        code, out, _ = run(
            capsys,
            [
                "qsim",
                "--edges",
                edges,
                "--signal",
                sig,
                "--sweep-epsilons",
                "1e-2,5e-3,1e-3",
            ],
        )
        assert code == 0
        lines = [l for l in out.splitlines() if l.strip()]
        assert lines[0].startswith("n,k,kappa,epsilon,degree")
        assert len(lines) == 4

    def test_signal_length_mismatch(self, capsys, tmp_path, k3_files):
        edges, _ = k3_files
        sig = tmp_path / "short.sig"
        sig.write_text("1\n2\n")
        code, _, err = run(capsys, ["qsim", "--edges", edges, "--signal", str(sig)])
        assert code != 0
        assert "signal length" in err

    def test_byte_identical_reruns(self, tmp_path, k3_files):
        edges, sig = k3_files
        outs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            assert (
                main(
                    [
                        "qsim",
                        "--edges",
                        edges,
                        "--signal",
                        sig,
                        "--seed",
                        "7",
                        "--out",
                        str(out),
                    ]
                )
                == 0
            )
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]


class TestEstimate:
    def test_consistency_fixture(self, capsys, k3_files):
        edges, sig = k3_files
        code, out, _ = run(
            capsys,
            ["estimate", "--edges", edges, "--signal", sig, "--estimator", "consistency-g"],
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["within_tolerance"] is True
        assert payload["shots_used"] == payload["schedule"]["shots"]

    def test_bad_subset(self, capsys, k3_files):
        edges, sig = k3_files
        code, _, err = run(
            capsys,
            [
                "estimate",
                "--edges",
                edges,
                "--signal",
                sig,
                "--estimator",
                "relative",
                "--subset",
                "0,9",
            ],
        )
        assert code != 0
        assert "out of range" in err

    def test_sweep_csv(self, capsys, k3_files):
        edges, sig = k3_files
        code, out, _ = run(
            capsys,
            [
                "estimate",
                "--edges",
                edges,
                "--signal",
                sig,
                "--estimator",
                "tomography",
                "--sweep-epsilons",
                "0.1,0.05",
            ],
        )
        assert code == 0
        lines = [l for l in out.splitlines() if l.strip()]
        assert lines[0] == "estimator,epsilon,delta,shots,error,pass"
        assert len(lines) == 3

    def test_byte_identical_reruns(self, tmp_path, k3_files):
        edges, sig = k3_files
        outs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            assert (
                main(
                    [
                        "estimate",
                        "--edges",
                        edges,
                        "--signal",
                        sig,
                        "--estimator",
                        "relative",
                        "--seed",
                        "11",
                        "--out",
                        str(out),
                    ]
                )
                == 0
            )
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]


class TestVerify:
    def test_clean_run(self, capsys):
        code, out, _ = run(capsys, ["verify", "--n", "6"])
        assert code == 0
        assert "FAIL" not in out

    def test_mutation_hook_fails(self, capsys):
        code, out, _ = run(capsys, ["verify", "--n", "6", "--inject-sign-flip"])
        assert code == 1
        assert "pue_identity" in out and "FAIL" in out


class TestConfig:
    def test_config_file_applies(self, capsys, tmp_path, k3_files):
        edges, sig = k3_files
        conf = tmp_path / "conf.txt"
        conf.write_text(f"epsilon = 1e-2\nedges = {edges}\nsignal = {sig}\n")
        code, out, _ = run(capsys, ["qsim", "--config", str(conf)])
        assert code == 0
        assert json.loads(out)["epsilon"] == 1e-2

    def test_flags_override_config(self, capsys, tmp_path, k3_files):
        edges, sig = k3_files
        conf = tmp_path / "conf.txt"
        conf.write_text(f"epsilon = 1e-2\nedges = {edges}\nsignal = {sig}\n")
        code, out, _ = run(
            capsys, ["qsim", "--config", str(conf), "--epsilon", "1e-3"]
        )
        assert code == 0
        assert json.loads(out)["epsilon"] == 1e-3

    def test_unknown_key_rejected(self, capsys, tmp_path):
        conf = tmp_path / "conf.txt"
        conf.write_text("mystery = 1\n")
        code, _, err = run(capsys, ["rank", "--config", str(conf)])
        assert code != 0
        assert "unknown config key" in err
