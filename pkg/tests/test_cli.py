import csv
import io
import json
import subprocess
import sys

import pytest

from submatch import fixtures, load_graph, save_graph
from submatch.cli import main


@pytest.fixture(scope="module")
def worked_paths():
    return str(fixtures.data_path("worked_data")), str(fixtures.data_path("worked_query"))


@pytest.fixture(scope="module")
def bench_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("bench") / "bench.graph"
    save_graph(fixtures.benchmark_graph(), path)
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_run_reports_two_embeddings(capsys, worked_paths):
    data, query = worked_paths
    code, out = run_cli(capsys, "run", "--data", data, "--query", query)
    assert code == 0
    report = json.loads(out)
    assert report["embeddings"] == 2
    assert list(report) == [
        "embeddings", "partitions", "w_c", "w_f",
        "cycles_basic", "cycles_task", "cycles_sep", "wall_ms",
    ]
    assert all(isinstance(v, (int, float)) for v in report.values())


def test_run_empty_result_exits_zero(capsys, worked_paths, tmp_path):
    data, _ = worked_paths
    query = tmp_path / "impossible.graph"
    query.write_text("t 2 1\nv 0 9 1\nv 1 8 1\ne 0 1\n")
    code, out = run_cli(capsys, "run", "--data", data, "--query", str(query))
    assert code == 0
    assert json.loads(out)["embeddings"] == 0


def test_run_variants_agree(capsys, worked_paths):
    data, query = worked_paths
    counts = set()
    for variant in ("basic", "task", "sep"):
        code, out = run_cli(capsys, "run", "--data", data, "--query", query, "--variant", variant)
        assert code == 0
        counts.add(json.loads(out)["embeddings"])
    assert counts == {2}


def test_run_parse_error_is_machine_readable(capsys, tmp_path, worked_paths):
    bad = tmp_path / "bad.graph"
    bad.write_text("t 2 1\nv 0 0 1\nv 1 0 1\ne 1 1\n")
    code, out = run_cli(capsys, "run", "--data", str(bad), "--query", worked_paths[1])
    assert code == 1
    err = json.loads(out)["error"]
    assert err["type"] == "format" and err["line"] == 4


def test_run_writes_trace_csv(capsys, worked_paths, tmp_path):
    data, query = worked_paths
    trace_path = tmp_path / "trace.csv"
    code, _ = run_cli(capsys, "run", "--data", data, "--query", query, "--trace", str(trace_path))
    assert code == 0
    rows = list(csv.reader(trace_path.open()))
    assert rows[0] == ["round", "depth", "p_o", "t_v", "t_n", "accepted"]
    assert len(rows) > 1
    assert [r[0] for r in rows[1:]] == [str(i) for i in range(len(rows) - 1)]


def test_compare_variant_sweep_orders_cycles(capsys, worked_paths):
    data, query = worked_paths
    code, out = run_cli(capsys, "compare", "--data", data, "--query", query, "--variant", "basic,task,sep")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["variant"] for r in rows] == ["basic", "task", "sep"]
    cycles = [float(r["cycles"]) for r in rows]
    assert cycles[0] >= cycles[1] >= cycles[2]
    assert len({r["embeddings"] for r in rows}) == 1


def test_compare_delta_sweep_keeps_embeddings_constant(capsys, bench_path):
    query = str(fixtures.data_path("q1"))
    code, out = run_cli(
        capsys, "compare", "--data", bench_path, "--query", query,
        "--variant", "share", "--delta", "0,0.05,0.1,0.15,0.2",
        "--delta-s", "3000",
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 5
    assert len({r["embeddings"] for r in rows}) == 1
    assert int(rows[0]["embeddings"]) == 52


def test_compare_k_sweep_automatic_is_no_worse(capsys, bench_path):
    query = str(fixtures.data_path("q8"))
    code, out = run_cli(
        capsys, "compare", "--data", bench_path, "--query", query,
        "--variant", "sep", "--k", "auto,2,4,6,8,10", "--delta-s", "3294",
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    by_k = {r["k"]: int(r["partitions"]) for r in rows}
    assert all(by_k["auto"] <= by_k[k] for k in by_k if k != "auto")


def test_gen_round_trips_and_is_deterministic(capsys, tmp_path):
    out1 = tmp_path / "a.graph"
    out2 = tmp_path / "b.graph"
    for out in (out1, out2):
        code, _ = run_cli(capsys, "gen", "--out", str(out), "--n", "10", "--p", "0.3", "--labels", "3", "--seed", "7")
        assert code == 0
    assert out1.read_bytes() == out2.read_bytes()
    g = load_graph(out1)
    assert g.num_vertices == 10
    assert g.num_edges == round(0.3 * 45)


def test_gen_single_vertex(capsys, tmp_path):
    out = tmp_path / "one.graph"
    code, _ = run_cli(capsys, "gen", "--out", str(out), "--n", "1", "--p", "0.5", "--labels", "2", "--seed", "1")
    assert code == 0
    assert load_graph(out).num_vertices == 1


def test_gen_power_law(capsys, tmp_path):
    out = tmp_path / "pl.graph"
    code, _ = run_cli(
        capsys, "gen", "--out", str(out), "--n", "200", "--power-law", "2.5", "--labels", "4", "--seed", "3"
    )
    assert code == 0
    g = load_graph(out)
    assert g.num_vertices == 200 and g.num_edges > 100


def test_gen_rejects_both_models(capsys, tmp_path):
    code, _ = run_cli(
        capsys, "gen", "--out", str(tmp_path / "x.graph"), "--n", "5", "--p", "0.2", "--power-law", "2.0", "--json"
    )
    assert code == 1


def test_oracle_subcommand_counts(capsys, worked_paths):
    data, query = worked_paths
    code, out = run_cli(capsys, "oracle", "--data", data, "--query", query)
    assert code == 0
    assert json.loads(out)["embeddings"] == 2


def test_oracle_hidden_from_help():
    import submatch.cli as cli

    help_text = cli.build_parser().format_help()
    assert "{run,compare,gen}" in help_text


def test_entry_point_runs_as_module(worked_paths):
    data, query = worked_paths
    proc = subprocess.run(
        [sys.executable, "-m", "submatch.cli", "run", "--data", data, "--query", query],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["embeddings"] == 2


def test_dram_ratio_scales_basic_cycles(capsys, worked_paths):
    data, query = worked_paths
    _, out1 = run_cli(capsys, "run", "--data", data, "--query", query, "--no", "4")
    _, out7 = run_cli(capsys, "run", "--data", data, "--query", query, "--no", "4", "--dram-ratio", "7")
    assert json.loads(out7)["cycles_basic"] > json.loads(out1)["cycles_basic"]
