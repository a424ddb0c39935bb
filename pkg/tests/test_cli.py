import csv
import io
import json
import subprocess
import sys

import pytest

from thinrig.cli import main
from thinrig.estimators import Estimates
from thinrig.graph import Graph, read_edge_list, write_edge_list
from thinrig.theory import attainable_bound


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def k4_file(tmp_path):
    path = tmp_path / "k4.txt"
    write_edge_list(Graph.complete(4), path)
    return path


def test_generate_k5(tmp_path, capsys):
    out = tmp_path / "k5.txt"
    code, stdout, _ = run(capsys, "generate", "--n", 5, "--m", 1, "--dist", "dirac:5", "--q", 1, "-o", out)
    assert code == 0
    assert read_edge_list(out) == Graph.complete(5)
    assert json.loads(stdout) == {"n": 5, "m": 1, "edges": 10, "mean_degree": 4.0}


def test_generate_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for path in (a, b):
        code, _, _ = run(capsys, "generate", "--bernoulli", "5,2,0.5", "--n", 10000, "--seed", 7, "-o", path)
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    assert read_edge_list(a).n == 10000


def test_generate_bad_bernoulli(capsys):
    code, _, err = run(capsys, "generate", "--bernoulli", "10,1,0.1", "--n", 50)
    assert code == 2
    assert "p out of range" in err


def test_generate_missing_model_flags(capsys):
    code, _, err = run(capsys, "generate", "--n", 5, "--m", 1)
    assert code == 2


def test_generate_pmf_dist(tmp_path, capsys):
    pmf = tmp_path / "pmf.txt"
    pmf.write_text("2 0.5\n3 0.5\n")
    out = tmp_path / "g.txt"
    code, _, _ = run(capsys, "generate", "--n", 30, "--m", 10, "--dist", f"pmf:{pmf}", "--q", 0.5, "-o", out)
    assert code == 0
    code, _, err = run(capsys, "generate", "--n", 30, "--m", 10, "--dist", "poisson:3", "--q", 0.5)
    assert code == 2 and "--dist" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["generate", "--n", "x"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--bernoulli", "5,2", "--ns", "100"])
    assert exc.value.code == 2


def test_census_k4(k4_file, capsys):
    code, out, _ = run(capsys, "census", k4_file)
    assert code == 0
    assert json.loads(out) == {"n0": 4, "links": 6, "two_stars": 12, "triangles": 4}


def test_census_oracle(tmp_path, capsys):
    path = tmp_path / "g.txt"
    run(capsys, "generate", "--bernoulli", "6,1.5,0.8", "--n", 150, "--seed", 3, "-o", path)
    code, out, _ = run(capsys, "census", path, "--oracle")
    d = json.loads(out)
    assert code == 0 and d["equal"] and d["optimized"] == d["oracle"]


def test_census_n0_too_large(k4_file, capsys):
    code, _, err = run(capsys, "census", k4_file, "--n0", 10)
    assert code == 3


def test_census_unreadable(tmp_path, capsys):
    code, _, _ = run(capsys, "census", tmp_path / "missing.txt")
    assert code == 3
    bad = tmp_path / "bad.txt"
    bad.write_text("0 a\n")
    assert run(capsys, "census", bad)[0] == 3


def test_loader_tolerates_mess(tmp_path, capsys):
    path = tmp_path / "messy.txt"
    path.write_text("# comment\n0 1\n1 0\n0 1\n2 2\n1\t2 # trailing\n\n")
    code, out, err = run(capsys, "census", path)
    assert code == 0
    assert json.loads(out) == {"n0": 3, "links": 2, "two_stars": 1, "triangles": 0}
    assert "self-loop" in err


def test_fit_roundtrip(tmp_path, capsys):
    g = tmp_path / "g.txt"
    run(capsys, "generate", "--bernoulli", "5,2,0.5", "--n", 20000, "--seed", 1, "-o", g)
    code, out, _ = run(capsys, "fit", g)
    assert code == 0
    d = json.loads(out)
    est = Estimates.from_dict(d)
    assert est.to_dict() == {k: d[k] for k in est.to_dict()}
    assert est.lambda_hat == pytest.approx(5, rel=0.05)
    assert est.mu_hat == pytest.approx(2, rel=0.15)
    assert est.q_hat == pytest.approx(0.5, rel=0.15)
    code2, out2, _ = run(capsys, "fit", g)
    assert out2 == out


def test_fit_empty_file(tmp_path, capsys):
    path = tmp_path / "empty.txt"
    path.write_text("")
    code, out, _ = run(capsys, "fit", path)
    d = json.loads(out)
    assert code == 0
    assert d["lambda"] == 0.0
    assert d["mu"] is None and d["q"] is None
    assert d["denominator_positive"] is False


def test_fit_header_node_count(tmp_path, capsys):
    # isolated nodes declared in the header count toward n
    path = tmp_path / "g.txt"
    write_edge_list(Graph(10, [(0, 1), (1, 2), (0, 2)]), path)
    d = json.loads(run(capsys, "fit", path)[1])
    assert d["n"] == 10
    assert d["lambda"] == pytest.approx(9 * 3 / 45)


def test_fit_relabel(tmp_path, capsys):
    path = tmp_path / "one_based.txt"
    path.write_text("1 2\n2 3\n1 3\n3 4\n")
    d = json.loads(run(capsys, "fit", path, "--relabel")[1])
    assert d["n"] == 4 and d["counts"]["links"] == 4


def test_fit_degenerate(tmp_path, capsys):
    path = tmp_path / "edge.txt"
    path.write_text("0 1\n")
    assert run(capsys, "fit", path)[0] == 3


def _read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_simulate_header_only(capsys):
    code, out, _ = run(capsys, "simulate", "--bernoulli", "5,2,0.5", "--ns", "4000", "--reps", 0)
    assert code == 0
    assert out == "n,rep,lambda_hat,mu_hat,q_hat,runtime_ms\n"


def test_simulate_rows_and_determinism(tmp_path, capsys):
    argv = ["simulate", "--bernoulli", "5,2,0.5", "--ns", "2000,4000", "--reps", 3, "--seed", 5]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, *argv, "-o", a)[0] == 0
    assert run(capsys, *argv, "-o", b)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    rows = _read_csv(a.read_text())
    data = [r for r in rows if r["rep"] != "median_rel_err"]
    summary = [r for r in rows if r["rep"] == "median_rel_err"]
    assert [(int(r["n"]), int(r["rep"])) for r in data] == [(n, k) for n in (2000, 4000) for k in range(3)]
    assert [int(r["n"]) for r in summary] == [2000, 4000]
    assert all(r["runtime_ms"] == "" for r in rows)


def test_simulate_timing_column(capsys):
    code, out, _ = run(capsys, "simulate", "--bernoulli", "5,2,0.5", "--ns", "2000", "--reps", 1, "--timing")
    rows = _read_csv(out)
    assert float(rows[0]["runtime_ms"]) > 0


def test_simulate_parallel_matches_serial(tmp_path, capsys, monkeypatch):
    argv = ["simulate", "--bernoulli", "5,2,0.5", "--ns", "2000", "--reps", 3]
    serial = run(capsys, *argv)[1]
    monkeypatch.setenv("THINRIG_THREADS", "2")
    assert run(capsys, *argv)[1] == serial


def test_simulate_q_one(capsys):
    code, out, _ = run(capsys, "simulate", "--bernoulli", "5,2,1", "--ns", "20000", "--reps", 3)
    rows = [r for r in _read_csv(out) if r["rep"] != "median_rel_err"]
    for r in rows:
        assert float(r["q_hat"]) == pytest.approx(1.0, rel=0.15)


def test_simulate_bad_params(capsys):
    assert run(capsys, "simulate", "--bernoulli", "10,1,0.1", "--ns", "50", "--reps", 1)[0] == 2


def test_region_values_and_ordering(capsys):
    code, out, err = run(capsys, "region", "--sigma-min", 0.5, "--sigma-max", 40, "--sigma-steps", 80)
    assert code == 0
    rows = _read_csv(out)
    by = {}
    for r in rows:
        lam, s, t = float(r["lambda"]), float(r["sigma"]), float(r["tau_max"])
        assert s * s > lam
        assert t == attainable_bound(lam, s * s)
        by.setdefault(s, {})[lam] = t
    assert {float(r["lambda"]) for r in rows} == {1, 2, 4, 7, 11, 16}
    for s, curve in by.items():
        lams = sorted(curve)
        assert all(curve[a] > curve[b] for a, b in zip(lams, lams[1:]))
    assert "skipped" in err


def test_region_point(capsys):
    code, out, _ = run(capsys, "region", "--lambdas", "1", "--sigma", str(2**0.5))
    assert float(_read_csv(out)[0]["tau_max"]) == pytest.approx(0.5, rel=1e-15)


def test_region_keep_invalid(capsys):
    code, out, _ = run(capsys, "region", "--lambdas", "4", "--sigma", "1,3", "--keep-invalid")
    rows = _read_csv(out)
    assert rows[0]["tau_max"] == "" and rows[1]["tau_max"] != ""


def test_describe(capsys):
    code, out, _ = run(capsys, "describe", "--bernoulli", "5,2,0.5", "--n", 50000)
    d = json.loads(out)
    assert code == 0
    assert d["degree_mean"] == pytest.approx(5)
    assert d["sparse_ok"] is True


def test_kappa_cmd(capsys):
    assert run(capsys, "kappa", "0-1,1-2,2-3,0-3")[1].strip() == "3"
    assert run(capsys, "kappa", "")[0] == 2


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "thinrig.cli", "generate", "--bernoulli", "10,1,0.1", "--n", "50"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2
    assert "p out of range" in proc.stderr
