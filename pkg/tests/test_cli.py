import json
import subprocess
import sys

import pytest

CMD = [sys.executable, "-m", "episource"]


def run(*args, **kw):
    return subprocess.run(CMD + list(args), capture_output=True, text=True, **kw)


IRREGULAR_LEAF_FILE = """\
v1 v2
v2 v3
v2 v4
v1 v5
v5 v6
v1 d1
v3 d2
v3 d3
v4 d4
v4 d5
v6 d6
v6 d7
"""


@pytest.fixture
def leaf_tree_path(tmp_path):
    p = tmp_path / "net.txt"
    p.write_text(IRREGULAR_LEAF_FILE)
    return str(p)


def test_generate_grid(tmp_path):
    r = run("generate", "grid:3x3", "--seed", "1")
    assert r.returncode == 0
    lines = [l for l in r.stdout.splitlines() if l and not l.startswith("%")]
    assert len(lines) == 12


def test_generate_circulant_cycle():
    r = run("generate", "circulant:6:set=1", "--seed", "0")
    assert r.returncode == 0
    assert len([l for l in r.stdout.splitlines() if l and not l.startswith("%")]) == 6


def test_generate_deterministic(tmp_path):
    a = run("generate", "rbt:dmax=4:n=50", "--seed", "3").stdout
    b = run("generate", "rbt:dmax=4:n=50", "--seed", "3").stdout
    assert a == b


def test_generate_bad_spec_usage_error():
    r = run("generate", "grid:wat")
    assert r.returncode == 2


def test_unknown_flag_rejected():
    r = run("generate", "grid:3x3", "--frobnicate")
    assert r.returncode == 2


def test_simulate_and_estimate_snapshot(tmp_path, leaf_tree_path):
    r = run("simulate", "--graph", leaf_tree_path, "--source", "v1", "--n", "4",
            "--seed", "5")
    assert r.returncode == 0
    snap = json.loads(r.stdout)
    assert snap["source"] == "v1" and len(snap["order"]) == 4
    sp = tmp_path / "snap.json"
    sp.write_text(r.stdout)
    r2 = run("estimate", "--graph", leaf_tree_path, "--snapshot", str(sp),
             "--est", "distance")
    assert r2.returncode == 0
    assert json.loads(r2.stdout)["candidates"]


def test_estimate_sct_prefers_junction(leaf_tree_path, tmp_path):
    # snapshot = the six labeled vertices; on the bare snapshot tree the
    # weighted vote lands on v1
    p = tmp_path / "gn.txt"
    p.write_text("v1 v2\nv2 v3\nv2 v4\nv1 v5\nv5 v6\n")
    r = run("estimate", "--graph", str(p), "--est", "sct")
    assert r.returncode == 0
    assert json.loads(r.stdout)["candidates"] == ["v1"]


def test_estimate_all_emits_one_object_per_estimator(tmp_path):
    p = tmp_path / "p3.txt"
    p.write_text("a b\nb c\n")
    r = run("estimate", "--graph", str(p), "--est", "all")
    assert r.returncode == 0
    objs = [json.loads(line) for line in r.stdout.splitlines()]
    names = {o["estimator"] for o in objs}
    assert names == {"sct", "algo1", "bfs-rc", "distance", "jordan", "epidemic"}
    epi = next(o for o in objs if o["estimator"] == "epidemic")
    assert epi["candidates"] == ["b"]


def test_estimate_disconnected_exit_code(tmp_path):
    p = tmp_path / "two.txt"
    p.write_text("a b\nc d\n")
    assert run("estimate", "--graph", str(p), "--est", "sct").returncode == 3
    r = run("estimate", "--graph", str(p), "--est", "sct", "--per-component")
    assert r.returncode == 0
    assert len(r.stdout.splitlines()) == 2


def test_oracle_table_ordering(leaf_tree_path):
    r = run("oracle", "--graph", leaf_tree_path,
            "--infected", "v1,v2,v3,v4,v5,v6", "--marker", "v5")
    assert r.returncode == 0
    obj = json.loads(r.stdout)
    assert obj["ranking"] == ["v1", "v5", "v2", "v3", "v4", "v6"]
    tie = {obj["likelihood"]["v3"]["numerator"], obj["likelihood"]["v4"]["numerator"]}
    assert len(tie) == 1


def test_oracle_single_vertex(tmp_path):
    p = tmp_path / "e.txt"
    p.write_text("a b\n")
    r = run("oracle", "--graph", str(p), "--infected", "a")
    assert json.loads(r.stdout)["likelihood"]["a"]["numerator"] == "1"


def test_oracle_cap_exit_code(leaf_tree_path):
    assert run("oracle", "--graph", leaf_tree_path, "--max-n", "3").returncode == 4


def test_bench_csv_deterministic(tmp_path):
    args = ("bench", "--gen", "grid:10x10", "--n", "12", "--trials", "3",
            "--estimators", "sct", "--seed", "9", "--out")
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert run(*args, str(a)).returncode == 0
    assert run(*args, str(b)).returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_bench_config_file(tmp_path):
    cfgp = tmp_path / "exp.cfg"
    cfgp.write_text("generator=grid:8x8\nn=10\ntrials=2\nestimators=sct\nseed=4\n")
    r = run("bench", "--config", str(cfgp))
    assert r.returncode == 0
    assert "trial,seed,source,estimator,k,error,micros" in r.stdout


def test_bench_missing_options_usage():
    assert run("bench", "--gen", "grid:4x4").returncode == 2


def test_replay_cli(tmp_path):
    p = tmp_path / "places.txt"
    lines = ["WTG S11", "S11 STL", "STL CCD", "CCD WTG"]
    for place, c in {"WTG": 23, "S11": 5, "STL": 4, "CCD": 3}.items():
        lines += [f"{place} case_{place}_{i}" for i in range(c)]
    p.write_text("\n".join(lines) + "\n")
    r = run("replay", "--graph", str(p), "--source", "WTG", "--est", "sct")
    assert r.returncode == 0
    obj = json.loads(r.stdout)
    assert obj["estimators"]["sct"]["candidates"] == ["WTG"]
