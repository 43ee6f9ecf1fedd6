import json
import subprocess
import sys

import pytest

from connectit.cli import main
from connectit.graph import barabasi_albert, erdos_renyi, torus, write_adjacency_graph
from connectit.parallel import THREADS_ENV, chunk_bounds, default_workers, parallel_for
from connectit.recommend import GraphStats, estimate_diameter, is_low_diameter, recommend
from connectit.verify import COUNTER_EXAMPLE_EDGES, counter_example_graph


@pytest.fixture
def cex_file(tmp_path):
    path = tmp_path / "g.adj"
    write_adjacency_graph(counter_example_graph(), path)
    return str(path)


def _json_lines(text):
    return [json.loads(line) for line in text.strip().splitlines()]


def test_cc_verify_counter_example(cex_file, capsys):
    code = main(["cc", "--algo", "uf_rem_cas;split_atomic_one;find_naive", "--sample", "kout",
                 "--graph", cex_file, "--verify"])
    out = _json_lines(capsys.readouterr().out)
    assert code == 0
    assert out[0]["num_components"] == 1 and out[0]["verified"] is True
    assert out[0]["spec_string"] == "kout + uf_rem_cas;split_atomic_one;find_naive"


def test_cc_rejects_exclusion(cex_file, capsys):
    code = main(["cc", "--algo", "uf_rem_cas;splice_atomic;find_compress", "--graph", cex_file])
    err = capsys.readouterr().err
    assert code != 0
    assert "incorrect algorithm" in err


def test_cc_formats_and_params(cex_file, capsys):
    assert main(["cc", "--algo", "lt_prfa", "--sample", "kout", "--kout-k", "3", "--kout-variant", "maxdeg",
                 "--graph", cex_file, "--format", "csv", "--reps", "2"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("graph,") and len(lines) == 3
    assert main(["cc", "--algo", "sv", "--sample", "ldd", "--ldd-beta", "0.4", "--ldd-permute",
                 "--gen", "er:n=300,avg_deg=3,seed=2", "--format", "human", "--verify"]) == 0
    assert "ldd[beta=0.4,permute=true] + sv" in capsys.readouterr().out


def test_cc_usage_errors(capsys, tmp_path):
    assert main(["cc", "--graph", str(tmp_path / "missing.adj")]) == 2
    assert main(["cc", "--algo", "sv"]) == 2
    bad = tmp_path / "bad.adj"
    bad.write_text("AdjacencyGraph\n3\n4\n0\n2\n3\n1\n2\n0\n")
    assert main(["cc", "--graph", str(bad)]) == 2
    assert "edge count mismatch" in capsys.readouterr().err


def test_sf(cex_file, tmp_path, capsys):
    out_path = tmp_path / "forest.txt"
    assert main(["sf", "--algo", "uf_hooks;find_compress", "--sample", "bfs", "--graph", cex_file,
                 "--verify", "--out", str(out_path)]) == 0
    assert len(out_path.read_text().strip().splitlines()) == 5
    assert main(["sf", "--algo", "stergiou", "--graph", cex_file]) == 2


def test_stream(tmp_path, capsys):
    path = tmp_path / "e.txt"
    path.write_text("".join(f"{u} {v}\n" for u, v in COUNTER_EXAMPLE_EDGES))
    assert main(["stream", "--edges", str(path), "--batch-size", "2", "--queries-per-batch", "3",
                 "--algo", "uf_rem_cas;splice_atomic;find_naive", "--verify"]) == 0
    rows = _json_lines(capsys.readouterr().out)
    assert len(rows) == 4
    assert rows[-1]["class"] == "phase_concurrent" and rows[-1]["verified"] and rows[-1]["num_components"] == 1
    assert main(["stream", "--edges", str(path), "--algo", "label_prop"]) == 2


def test_amsf_cli(tmp_path, capsys):
    path = tmp_path / "w.txt"
    path.write_text("0 1 1\n1 2 1\n0 2 10\n")
    assert main(["amsf", "--edges", str(path), "--variant", "nf_s", "--verify"]) == 0
    row = json.loads(capsys.readouterr().out)
    assert row["W_apx"] == 2 and row["W_opt"] == 2 and row["ratio"] == 1.0
    unweighted = tmp_path / "u.txt"
    unweighted.write_text("0 1\n")
    assert main(["amsf", "--edges", str(unweighted)]) == 2


def test_gen_roundtrip(tmp_path, capsys):
    out = tmp_path / "t.adj"
    assert main(["gen", "--model", "torus", "--side", "4", "--d", "2", "--out", str(out)]) == 0
    assert main(["cc", "--graph", str(out), "--verify"]) == 0
    assert json.loads(capsys.readouterr().out)["n"] == 16
    assert main(["gen", "--model", "er", "--n", "20", "--avg-deg", "2", "--format", "edges"]) == 0
    assert all(len(line.split()) == 2 for line in capsys.readouterr().out.strip().splitlines())
    assert main(["gen", "--model", "ba"]) == 2


def test_verify_small_grid(capsys):
    assert main(["verify", "--grid", "small"]) == 0
    summary = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert summary["failures"] == 0 and summary["runs"] > 1000


def test_bench(cex_file, capsys):
    assert main(["bench", "--graph", cex_file, "--spec", "kout + sv", "--spec", "uf_async;find_naive", "--reps", "3"]) == 0
    rows = _json_lines(capsys.readouterr().out)
    assert [r["spec_string"] for r in rows] == ["kout + sv", "none + uf_async;find_naive"]
    for r in rows:
        assert r["min_s"] <= r["median_s"] and r["min_s"] <= r["mean_s"] and r["reps"] == 3


def test_recommend_cli(capsys):
    assert main(["recommend", "--n", "1000", "--m", "2400"]) == 0
    assert json.loads(capsys.readouterr().out)["spec"] == "none + uf_rem_cas;split_atomic_one;find_naive"
    assert main(["recommend"]) == 2


def test_recommend_rules():
    assert recommend(GraphStats(1000, 2400, 50)) == "none + uf_rem_cas;split_atomic_one;find_naive"
    assert recommend(GraphStats(1000, 20000)).startswith("kout + ")
    ba = barabasi_albert(2000, 32, seed=1)
    assert ba.m / ba.n > 60
    assert recommend(ba).split(" + ")[0] in ("ldd", "bfs")
    # a large torus is dense enough but has a long diameter
    t = torus(40, 2)
    t_dense = GraphStats(t.n, 8 * t.n, estimate_diameter(t))
    assert recommend(t_dense).startswith("kout + ")


def test_diameter_estimates():
    assert estimate_diameter(torus(10, 1)) == 5
    assert is_low_diameter(1024, 20) and not is_low_diameter(1024, 21)
    assert estimate_diameter(erdos_renyi(2000, avg_deg=10, seed=1)) <= 8


def test_parallel_helpers(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "3")
    assert default_workers() == 3
    assert chunk_bounds(10, 3)[0][0] == 0 and chunk_bounds(10, 3)[-1][1] == 10
    seen = []
    parallel_for(100, lambda lo, hi: seen.extend(range(lo, hi)), workers=4)
    assert sorted(seen) == list(range(100))
    spans = parallel_for(0, lambda lo, hi: (lo, hi), workers=4)
    assert all(lo == hi for lo, hi in spans)


def test_console_entry_point(cex_file):
    proc = subprocess.run([sys.executable, "-m", "connectit.cli", "cc", "--graph", cex_file],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["num_components"] == 1
