import json
import subprocess
import sys

import pytest

from orientlab import cli
from orientlab.dynamics import TRACE_COLUMNS
from orientlab.generators import gen_complete, gen_petersen
from orientlab.graph import format_edge_list, load_graph, parse_weights


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def k4_file(tmp_path):
    p = tmp_path / "k4.txt"
    p.write_text(format_edge_list(gen_complete(4)))
    return str(p)


class TestOrient:
    def test_k4_file(self, k4_file, capsys):
        code, out, _ = run(["orient", "--input", k4_file], capsys)
        rep = json.loads(out)
        assert code == 0
        assert rep["schema"] == 1 and rep["command"] == "orient"
        assert rep["results"]["orientation_number"] == 2
        assert len(rep["results"]["sidewalk_cover"]) == 2
        assert len(rep["source"]["sha256"]) == 64
        assert all(ch["pass"] for ch in rep["checks"])

    def test_tree(self, capsys):
        code, out, _ = run(["orient", "--spec", "path:n=9"], capsys)
        assert code == 0 and json.loads(out)["results"]["orientation_number"] == 1

    def test_infeasible_k(self, k4_file, capsys):
        code, out, _ = run(["orient", "--input", k4_file, "--k", "1"], capsys)
        res = json.loads(out)["results"]
        assert code == 0 and res["feasible"] is False
        assert res["certificate"]["edge_count"] > res["certificate"]["size"]

    def test_feasible_k(self, k4_file, capsys):
        code, out, _ = run(["orient", "--input", k4_file, "--k", "2"], capsys)
        res = json.loads(out)["results"]
        assert res["feasible"] and res["max_out_degree"] <= 2 and len(res["orientation"]) == 6

    def test_rationals_are_exact_strings(self, k4_file, capsys):
        _, out, _ = run(["orient", "--input", k4_file], capsys)
        rep = json.loads(out)
        assert rep["results"]["density_certificate"]["density"] == "3/2"
        for ch in rep["checks"]:
            assert isinstance(ch["lhs"], str) and isinstance(ch["rhs"], str)


class TestInputErrors:
    def test_both_sources(self, k4_file, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["orient", "--input", k4_file, "--spec", "K:n=4"])
        assert exc.value.code == 2

    def test_missing_file(self, tmp_path, capsys):
        code, _, err = run(["orient", "--input", str(tmp_path / "nope.txt")], capsys)
        assert code == 2 and "error" in err

    def test_bad_file(self, tmp_path, capsys):
        p = tmp_path / "bad.txt"
        p.write_text("3 1\n0 x\n")
        code, _, err = run(["verify", "--input", str(p)], capsys)
        assert code == 2 and "line 2" in err

    def test_bad_spec(self, capsys):
        assert run(["orient", "--spec", "bogus:n=3"], capsys)[0] == 2

    def test_brute_force_guard_is_not_fatal(self, capsys):
        code, out, _ = run(["verify", "--spec", "K:n=9"], capsys)
        res = json.loads(out)["results"]
        assert code == 0 and res["brute_force"] is None and res["orientation_number"] == 4


class TestVerify:
    @pytest.mark.parametrize("spec", ["K:n=4", "petersen"])
    def test_battery(self, spec, capsys):
        code, out, _ = run(["verify", "--spec", spec], capsys)
        res = json.loads(out)["results"]
        assert code == 0 and res["agree"]
        assert res["brute_force"] == res["orientation_number"] == res["edmonds"] == \
            res["ceil_density"] == 2


class TestSimulate:
    def test_torus_with_trace(self, tmp_path, capsys):
        out_path, trace = tmp_path / "rep.json", tmp_path / "trace.csv"
        code, out, _ = run(["simulate", "--spec", "torus:dims=16x16", "--k", "3",
                            "--stages", "4", "--seed", "2", "--out", str(out_path),
                            "--trace", str(trace)], capsys)
        assert code == 0 and out == ""
        rep = json.loads(out_path.read_text())
        assert rep["results"]["final_max_out_degree"] <= 3
        assert all(ch["pass"] for ch in rep["checks"])
        lines = trace.read_text().splitlines()
        assert lines[0] == ",".join(TRACE_COLUMNS)
        assert lines[1].startswith("0,")

    def test_stages_zero(self, tmp_path, capsys):
        trace = tmp_path / "t.csv"
        code, out, _ = run(["simulate", "--spec", "torus:dims=8x8", "--k", "3", "--stages", "0",
                            "--trace", str(trace)], capsys)
        assert code == 0
        assert json.loads(out)["results"]["stages_run"] == 0
        assert len(trace.read_text().splitlines()) == 2

    def test_expansive(self, capsys):
        code, out, _ = run(["simulate", "--spec", "rr:n=500,d=6,seed=3", "--mode", "expansive",
                            "--stages", "30"], capsys)
        res = json.loads(out)["results"]
        assert code == 0 and res["final_max_out_degree"] == 3 and res["target"] == 3

    def test_expansive_rejects_weights(self, capsys):
        code, _, _ = run(["simulate", "--spec", "rr:n=50,d=4", "--mode", "expansive",
                          "--weights", "two-level:2"], capsys)
        assert code == 2

    def test_truncated_exit_code(self, capsys):
        code, out, _ = run(["simulate", "--spec", "rr:n=200,d=4,seed=1", "--k", "2",
                            "--stages", "6", "--budget", "3"], capsys)
        assert code == 3 and json.loads(out)["results"]["truncated"]

    def test_weight_file(self, tmp_path, capsys):
        w = tmp_path / "w.txt"
        assert cli.main(["gen", "--spec", "torus:dims=6x6", "--out", str(tmp_path / "g.txt"),
                         "--weights", "two-level:2", "--weights-out", str(w)]) == 0
        code, out, _ = run(["simulate", "--input", str(tmp_path / "g.txt"), "--weights", str(w),
                            "--k", "9", "--stages", "3"], capsys)
        rep = json.loads(out)
        assert code == 0 and rep["results"]["rho"] == "2"
        assert rep["parameters"]["weights"].startswith("file:")

    def test_default_k_is_above_hypothesis(self, capsys):
        code, out, _ = run(["simulate", "--spec", "torus:dims=8x8", "--stages", "3"], capsys)
        rep = json.loads(out)
        assert code == 0 and rep["parameters"]["k"] == 3
        assert rep["results"]["hypothesis_k_gt_rho2_alpha"]

    def test_deterministic_bytes(self, tmp_path, capsys):
        blobs = []
        for i in range(2):
            o, t = tmp_path / f"r{i}.json", tmp_path / f"t{i}.csv"
            cli.main(["simulate", "--spec", "z2:n=400,m=3,seed=1", "--k", "2", "--stages", "5",
                      "--weights", "two-level:2", "--seed", "9", "--out", str(o), "--trace", str(t)])
            blobs.append((o.read_bytes(), t.read_bytes()))
        assert blobs[0] == blobs[1]


class TestDensityExpansion:
    def test_density(self, k4_file, capsys):
        code, out, _ = run(["density", "--input", k4_file], capsys)
        res = json.loads(out)["results"]
        assert code == 0 and res["alpha"] == "3/2" and res["cost_lower_bound"] == 2

    def test_expansion(self, capsys):
        code, out, _ = run(["expansion", "--spec", "K:n=4"], capsys)
        res = json.loads(out)["results"]
        assert code == 0 and res["exact"] == "2" and res["expansive_c"] == 3.0


class TestGen:
    def test_stdout(self, capsys):
        code, out, _ = run(["gen", "--spec", "petersen"], capsys)
        assert code == 0 and load_graph(out) == gen_petersen()

    def test_weights_out(self, tmp_path, capsys):
        g, w = tmp_path / "g.txt", tmp_path / "w.txt"
        assert cli.main(["gen", "--spec", "cycle:n=6", "--out", str(g), "--weights", "random:1:2",
                         "--seed", "3", "--weights-out", str(w)]) == 0
        mu = parse_weights(w.read_text(), 6)
        assert sum(mu.numerators) == mu.total

    def test_atomic_write_leaves_no_temp(self, tmp_path, capsys):
        target = tmp_path / "g.txt"
        target.write_text("old")
        cli.main(["gen", "--spec", "cycle:n=5", "--out", str(target)])
        assert load_graph(target.read_text()).edge_count == 5
        assert sorted(p.name for p in tmp_path.iterdir()) == ["g.txt"]


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "orientlab", "orient", "--spec", "K:n=5"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["orientation_number"] == 2


def test_timings_only_on_request(capsys):
    _, out, _ = run(["orient", "--spec", "K:n=4"], capsys)
    assert "timings" not in json.loads(out)
    _, out, _ = run(["orient", "--spec", "K:n=4", "--timings"], capsys)
    assert "total_s" in json.loads(out)["timings"]
