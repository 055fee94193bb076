"""End-to-end tests of the hkq command-line tool."""

import json
import os
import subprocess

import pytest

CLI = os.environ.get("HKQ_CLI")
FIXTURES = os.environ.get("HKQ_FIXTURES", os.path.join(os.path.dirname(__file__), "..", "fixtures"))

pytestmark = pytest.mark.skipif(CLI is None, reason="HKQ_CLI not set")


def run(*args, expect=0):
    proc = subprocess.run([CLI, *map(str, args)], capture_output=True, text=True)
    assert proc.returncode == expect, (proc.stdout, proc.stderr)
    return proc


def parse_pointset(text):
    meta, rows = {}, []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key.strip()] = value
        elif line.strip():
            rows.append([float(v) for v in line.split()])
    return meta, rows


def test_generate_halton(tmp_path):
    out = tmp_path / "halton.txt"
    run("generate", "--manifold", "torus", "--d", 2, "--n", 89,
        "--method", "halton", "--out", out)
    meta, rows = parse_pointset(out.read_text())
    assert meta["method"] == "halton"
    assert meta["N"] == "89"
    assert len(rows) == 89
    assert rows[0] == [0.5, 1 / 3]


def test_generate_fibonacci_is_the_lattice(tmp_path):
    out = tmp_path / "fib.txt"
    run("generate", "--manifold", "torus", "--d", 2, "--n", 89,
        "--method", "fibonacci", "--out", out)
    meta, rows = parse_pointset(out.read_text())
    assert meta["generator"] == "1,55"
    assert rows[1] == [1 / 89, 55 / 89]
    # non-Fibonacci N is a usage error
    run("generate", "--manifold", "torus", "--d", 2, "--n", 90,
        "--method", "fibonacci", "--out", tmp_path / "no.txt", expect=1)
    assert not (tmp_path / "no.txt").exists()


def test_generate_anneal_deterministic(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    args = ("generate", "--manifold", "sphere", "--n", 20,
            "--method", "gaussian-anneal", "--steps", 400, "--seed", 7)
    run(*args, "--out", a)
    run(*args, "--out", b)
    assert a.read_bytes() == b.read_bytes()


def test_generate_reproducible_from_header(tmp_path):
    out = tmp_path / "run.txt"
    run("generate", "--manifold", "torus", "--d", 2, "--n", 15,
        "--method", "gaussian-anneal", "--steps", 300, "--seed", 3,
        "--out", out)
    meta, _ = parse_pointset(out.read_text())
    again = tmp_path / "again.txt"
    run("generate", "--manifold", "torus", "--d", meta["d"], "--n", meta["N"],
        "--method", meta["method"], "--steps", meta["steps"],
        "--seed", meta["seed"], "--t", meta["t"], "--dt", meta["dt"],
        "--gamma", meta["gamma"], "--cool-c", meta["cool_c"],
        "--trace-every", meta["trace_every"], "--init", meta["init"],
        "--out", again)
    assert out.read_bytes() == again.read_bytes()


def test_weights_idempotent_and_uniform(tmp_path):
    pts = tmp_path / "eq.txt"
    run("generate", "--manifold", "torus", "--d", 1, "--n", 8,
        "--method", "korobov", "--korobov-a", 1, "--out", pts)
    weighted = tmp_path / "w.txt"
    run("weights", "--in", pts, "--t", 0.25 / 64, "--out", weighted)
    meta, rows = parse_pointset(weighted.read_text())
    assert meta["weights"] == "1"
    for row in rows:
        assert row[-1] == pytest.approx(0.125, abs=1e-10)
    again = tmp_path / "w2.txt"
    run("weights", "--in", weighted, "--t", 0.25 / 64, "--out", again)
    _, rows2 = parse_pointset(again.read_text())
    for r1, r2 in zip(rows, rows2):
        assert r1[-1] == pytest.approx(r2[-1], abs=1e-12)


def test_eval_lattice_and_cum_property(tmp_path):
    pts = tmp_path / "fib.txt"
    run("generate", "--manifold", "torus", "--d", 2, "--n", 13,
        "--method", "fibonacci", "--out", pts)
    csv = tmp_path / "err.csv"
    run("eval", "--in", pts, "--count", 50, "--out", csv)
    lines = csv.read_text().splitlines()
    assert lines[0] == "index,lambda,l_or_k,m_or_blank,E_lambda,E_cum"
    acc = 0.0
    for line in lines[1:]:
        cells = line.split(",")
        acc += float(cells[4])
        assert float(cells[5]) == pytest.approx(acc, rel=1e-12, abs=1e-300)

    as_json = tmp_path / "err.json"
    run("eval", "--in", pts, "--count", 5, "--format", "json", "--out", as_json)
    data = json.loads(as_json.read_text())
    assert len(data) == 5 and "E_lambda" in data[0]


def test_eval_qualitative_only_manifold(tmp_path):
    pts = tmp_path / "dent.txt"
    run("generate", "--manifold", "dented-sphere", "--alpha", 0.1, "--n", 12,
        "--method", "gaussian-anneal", "--steps", 200, "--seed", 1,
        "--out", pts)
    proc = run("eval", "--in", pts, "--count", 5, expect=1)
    assert "qualitative-only" in proc.stderr


def test_designs_import(tmp_path):
    out = tmp_path / "design.txt"
    run("designs", "import", "--in",
        os.path.join(FIXTURES, "sphdesign_86_deg12.txt"), "--out", out)
    meta, rows = parse_pointset(out.read_text())
    assert meta["method"] == "design"
    assert len(rows) == 86
    assert all(len(r) == 4 for r in rows)  # xyz + weight
    csv = tmp_path / "design_err.csv"
    run("eval", "--in", out, "--count", 25, "--out", csv)
    for line in csv.read_text().splitlines()[1:]:
        assert float(line.split(",")[4]) <= 1e-20


def test_bench_outputs_and_determinism(tmp_path):
    prefix_a = tmp_path / "ba"
    prefix_b = tmp_path / "bb"
    args = ("bench", "--manifold", "torus", "--d", 2, "--n", 13,
            "--methods", "uniform,halton,gaussian-anneal+w", "--runs", 2,
            "--count", 10, "--steps", 200, "--seed", 5)
    run(*args, "--out-prefix", prefix_a)
    run(*args, "--out-prefix", prefix_b)
    for stem in ("uniform", "halton", "gaussian-anneal_w"):
        for suffix in (".csv", "_stat.csv", "_runs.csv"):
            fa = tmp_path / f"ba_{stem}{suffix}"
            fb = tmp_path / f"bb_{stem}{suffix}"
            assert fa.exists(), fa
            assert fa.read_bytes() == fb.read_bytes()
    # deterministic methods run once
    runs_lines = (tmp_path / "ba_halton_runs.csv").read_text().splitlines()
    assert len(runs_lines) == 2  # header + one run
    long_lines = (tmp_path / "ba_uniform.csv").read_text().splitlines()
    assert long_lines[0].startswith("run_id,")
    assert len(long_lines) == 1 + 2 * 10


def test_bench_all_failed_method_exit_code(tmp_path):
    run("bench", "--manifold", "torus", "--d", 2, "--n", 7,
        "--methods", "fibonacci", "--runs", 1, "--count", 5,
        "--out-prefix", tmp_path / "bad", expect=2)


def test_config_file_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "seed": 11,
        "generate": {"manifold": "torus", "d": 2, "n": 13, "method": "halton"},
    }))
    out = tmp_path / "cfg_out.txt"
    run("generate", "--config", cfg, "--out", out)
    meta, rows = parse_pointset(out.read_text())
    assert meta["method"] == "halton" and len(rows) == 13

    # a flag overrides the config value
    out2 = tmp_path / "cfg_out2.txt"
    run("generate", "--config", cfg, "--method", "sobol", "--out", out2)
    meta2, _ = parse_pointset(out2.read_text())
    assert meta2["method"] == "sobol"


def test_usage_errors(tmp_path):
    run("generate", "--manifold", "torus", "--n", 10, "--method", "nope",
        expect=1)
    run("generate", "--manifold", "sphere", "--n", 10, "--method", "halton",
        expect=1)
    run("eval", "--in", tmp_path / "missing.txt", "--count", 5, expect=2)


def test_hyperboloid_disk_projection(tmp_path):
    out = tmp_path / "disk.txt"
    run("generate", "--manifold", "hyperboloid", "--r", 0.8, "--n", 40,
        "--method", "gaussian-anneal", "--steps", 300, "--seed", 2,
        "--project-disk", "--out", out)
    meta, rows = parse_pointset(out.read_text())
    assert meta["projection"] == "poincare_disk"
    assert all(len(r) == 2 for r in rows)
    assert all(r[0] ** 2 + r[1] ** 2 < 1.0 for r in rows)
