#!/usr/bin/env python3
"""
Phase 5 Test Script
Test the benchmark harness, result files, tables, experiment files and the CLI
"""

import contextlib
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from unittest.mock import patch

import numpy as np
import pytest

# Add current directory to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import main as cli
from evaluation import p_value
from gnn import RELAXATION, TrainConfig, init_model
from graphs import cut_value, generate_regular, read_edge_list
from harness import (
    ExperimentConfig,
    ExperimentConfigError,
    ExperimentFile,
    GnnArchitecture,
    ResultsStore,
    TrialRecord,
    benchmark_graph_seeds,
    compare_methods,
    emit_table,
    execute,
    load_experiment_file,
    records_csv,
    run_experiment,
    train_for,
)
from harness.results_file import RECORD_HEADER, STUDY_HEADER, SUMMARY_HEADER
from harness.tables import render_table
from seeding import training_seed
from solvers import EoParams, SdpParams, eo_run, gw_solve

HERE = Path(__file__).resolve().parent
C5 = str(HERE / "data" / "c5.txt")


def _eo_cell(n: int = 16, d: int = 3, count: int = 4, **kw) -> ExperimentConfig:
    return ExperimentConfig(method="eo", n=n, d=d, graph_count=count, master_seed=3,
                            eo=EoParams(t_max=600), **kw)


def _sdp_cell(n: int = 16, d: int = 3, count: int = 4) -> ExperimentConfig:
    return ExperimentConfig(method="sdp", n=n, d=d, graph_count=count, master_seed=3,
                            sdp=SdpParams(rounding_trials=50))


def _record(method, n, d, index, P, error="", config=None) -> TrialRecord:
    return TrialRecord(method=method, n=n, d=d, graph_index=index, graph_seed=index, trial_seed=index,
                       cut_value=None if error else 1.0, P=None if error else P, error=error,
                       config=config)


# ════════════════════════════════════════════════════════════
# ORCHESTRATION
# ════════════════════════════════════════════════════════════

def test_benchmark_seeds_are_pure_and_disjoint():
    print("\n" + "=" * 60)
    print("TEST 1: Experiment orchestration")
    print("=" * 60)

    seeds = benchmark_graph_seeds(20190101, 50)
    assert seeds == benchmark_graph_seeds(20190101, 50)
    assert benchmark_graph_seeds(20190101, 10) == seeds[:10]
    assert len(set(seeds)) == 50
    assert not set(seeds) & {training_seed(20190101, t) for t in range(1000)}
    assert benchmark_graph_seeds(1, 5) != benchmark_graph_seeds(2, 5)


def test_eo_on_k4_cuts_four_edges():
    records = run_experiment(_eo_cell(n=4, d=3, count=1), threads=1)
    assert len(records) == 1
    assert records[0].error == ""
    assert records[0].cut_value == 4
    assert records[0].P == p_value(4, 4, 3)


def test_records_independent_of_thread_count():
    for cell in (_eo_cell(count=6), _sdp_cell(count=6)):
        single = records_csv(run_experiment(cell, threads=1))
        pooled = records_csv(run_experiment(cell, threads=3))
        assert single == pooled
    print("✓ Records are byte-identical for 1 and 3 workers")


def test_parallel_trials_run_in_worker_processes():
    with patch("harness.experiment.ProcessPoolExecutor", wraps=ProcessPoolExecutor) as pool_cls:
        pooled = run_experiment(_eo_cell(count=4), threads=2)
    pool_cls.assert_called_once()
    assert pool_cls.call_args.kwargs["max_workers"] == 2
    assert records_csv(pooled) == records_csv(run_experiment(_eo_cell(count=4), threads=1))

    with patch("harness.experiment.ProcessPoolExecutor") as pool_cls:
        run_experiment(_eo_cell(count=2), threads=1)
    pool_cls.assert_not_called()


def test_records_carry_recomputable_values():
    state = execute(_sdp_cell(count=5), threads=2)
    assert [r.graph_index for r in state.records] == list(range(5))
    for r in state.records:
        g = generate_regular(r.n, r.d, r.graph_seed)
        assert r.cut_value == cut_value(g, r.config)
        assert r.P == p_value(r.cut_value, r.n, r.d)
        assert r.wall_time_ms >= 0.0
    assert any("STAGE 3" in line for line in state.workflow_log)
    assert not state.failures


def test_failed_trials_become_error_records():
    with patch("harness.experiment._solve", side_effect=RuntimeError("solver exploded")):
        state = execute(_eo_cell(count=3), threads=1)
    assert len(state.failures) == 3
    for r in state.records:
        assert r.error == "RuntimeError: solver exploded"
        assert r.cut_value is None and r.P is None
    lines = records_csv(state.records).splitlines()
    assert lines[1].endswith(",,,RuntimeError: solver exploded")
    assert emit_table(state.records).summaries == []


def test_invalid_cells_are_rejected():
    with pytest.raises(ExperimentConfigError):
        execute(ExperimentConfig(method="tabu", n=10, d=3))
    with pytest.raises(ExperimentConfigError):
        execute(ExperimentConfig(method="eo", n=5, d=3))
    with pytest.raises(ExperimentConfigError):
        execute(ExperimentConfig(method="eo", n=4, d=4))
    with pytest.raises(ExperimentConfigError):
        execute(_eo_cell(), threads=0)


def test_gnn_block_controls_normalization():
    exp_file = ExperimentFile.model_validate({
        "methods": "gnn-relax", "n": 8, "d": 3,
        "gnn": {"layers": 2, "hops": 1, "width": 3, "train_graphs": 2, "normalize": False},
    })
    cell = exp_file.expand()[0]
    assert cell.architecture.normalize is False
    model, curve = train_for(cell)
    assert model.normalize is False
    assert len(curve.objective) == cell.train.epochs

    default = ExperimentFile.model_validate({"methods": "gnn-relax", "n": 8, "d": 3})
    assert default.expand()[0].architecture.normalize is True


def test_gnn_cell_trains_then_solves():
    cfg = ExperimentConfig(method="gnn-relax", n=8, d=3, graph_count=3, master_seed=4,
                           train=TrainConfig(train_graphs=3, learning_rate=0.01, epochs=1),
                           architecture=GnnArchitecture(layers=2, hops=1, width=3))
    state = execute(cfg, threads=1)
    assert state.model is not None and state.model.loss_kind == RELAXATION
    assert state.curve is not None and len(state.curve.objective) == 1
    assert not state.failures


def test_supplied_model_must_match_method():
    cfg = ExperimentConfig(method="gnn-pg", n=8, d=3, graph_count=2,
                           architecture=GnnArchitecture(layers=2, hops=1, width=3))
    with pytest.raises(ExperimentConfigError):
        execute(cfg, model=init_model(layers=2, hops=1, width=3, loss_kind=RELAXATION))


def test_compare_methods_pairs_shared_graphs():
    x = np.array([1, -1, 1, 1])
    records = [
        _record("eo", 4, 3, 0, 0.5, config=x),
        _record("sdp", 4, 3, 0, 0.5, config=-x),
        _record("eo", 4, 3, 1, 0.5, config=x),
        _record("sdp", 4, 3, 1, 0.5, config=np.array([1, 1, -1, -1])),
        _record("sdp", 4, 3, 2, 0.5, config=x),
        _record("eo", 4, 3, 3, 0.5, error="boom"),
    ]
    rows = compare_methods(records)
    assert len(rows) == 1
    row = rows[0]
    assert (row.method_a, row.method_b, row.count) == ("eo", "sdp", 2)
    assert row.mean_nu == pytest.approx(0.75)
    assert row.std_nu == pytest.approx(0.25)
    assert compare_methods([_record("eo", 4, 3, 0, 0.5, config=x)]) == []


# ════════════════════════════════════════════════════════════
# RESULT FILES AND TABLES
# ════════════════════════════════════════════════════════════

def test_results_store_roundtrip(tmp_path):
    print("\n" + "=" * 60)
    print("TEST 2: Result files and tables")
    print("=" * 60)

    records = run_experiment(_eo_cell(count=3), threads=1)
    records.append(_record("eo", 16, 3, 9, 0.0, error="ValueError: bad"))
    store = ResultsStore(tmp_path / "run")
    assert store.records_path.name == "run.csv"
    store.save(records)

    assert store.records_path.read_text().splitlines()[0] == ",".join(RECORD_HEADER)
    assert store.sibling("timings").exists()
    loaded = store.load()
    assert [(r.graph_index, r.cut_value, r.P, r.error) for r in loaded] == \
           [(r.graph_index, r.cut_value, r.P, r.error) for r in records]
    assert records_csv(loaded) == records_csv(records)

    with pytest.raises(FileNotFoundError):
        ResultsStore(tmp_path / "absent.csv").load()


def test_emit_table_empty_and_single_group():
    empty = emit_table([])
    assert empty.text == ""
    assert empty.csv == ",".join(SUMMARY_HEADER) + "\n"

    single = emit_table([_record("eo", 100, 3, i, 0.70 + 0.01 * i) for i in range(3)])
    assert len(single.summaries) == 1
    assert single.csv.splitlines()[1] == "eo,100,3,3,0.7100,0.0082,0.7000,0.7200"
    assert "0.7100" in single.text


def test_degree_sweep_table_shape():
    methods = ("eo", "sdp", "gnn-relax", "gnn-pg")
    degrees = (20, 15, 10, 5, 3)
    records = [_record(m, 500, d, 0, 0.7) for m in methods for d in degrees]
    out = emit_table(records)
    assert len(out.summaries) == 20

    table = render_table(out.summaries)
    assert table.row_count == 5
    assert len(table.columns) == 5
    assert [c.header for c in table.columns][1:] == list(methods)
    assert list(table.columns[0].cells) == ["20", "15", "10", "5", "3"]


def test_size_sweep_table_rows_ascend():
    records = [_record("eo", n, 3, 0, 0.7) for n in (200, 50, 100)]
    table = render_table(emit_table(records).summaries)
    assert table.columns[0].header == "n (d=3)"
    assert list(table.columns[0].cells) == ["50", "100", "200"]


# ════════════════════════════════════════════════════════════
# EXPERIMENT FILES
# ════════════════════════════════════════════════════════════

def _write_json(path: Path, doc) -> Path:
    path.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return path


def test_experiment_file_expansion(tmp_path):
    print("\n" + "=" * 60)
    print("TEST 3: Experiment files")
    print("=" * 60)

    exp_file = load_experiment_file(_write_json(tmp_path / "a.json", {
        "methods": ["eo", "sdp"], "n": [50, 100], "d": 3, "graph_count": 5,
        "output": "ignored.csv", "eo": {"tmax_factor": 7},
    }))
    cells = exp_file.expand()
    assert [(c.method, c.n, c.d) for c in cells] == [("eo", 50, 3), ("eo", 100, 3), ("sdp", 50, 3), ("sdp", 100, 3)]
    assert all(c.output is None and c.graph_count == 5 for c in cells)
    assert cells[1].eo.t_max == 700

    one = ExperimentFile.model_validate({"methods": "sdp", "n": 20, "d": 3, "output": "x.csv"})
    assert [c.output for c in one.expand()] == ["x.csv"]

    for name in ("table1.json", "table2.json", "table3.json", "smoke.json"):
        for cell in load_experiment_file(HERE / "configs" / name).expand():
            cell.validate()


def test_experiment_file_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_experiment_file(tmp_path / "missing.json")
    with pytest.raises(ExperimentConfigError):
        load_experiment_file(_write_json(tmp_path / "bad.json", "{not json"))
    with pytest.raises(ExperimentConfigError):
        load_experiment_file(_write_json(tmp_path / "m.json", {"methods": ["tabu"], "n": 10, "d": 3}))
    with pytest.raises(ExperimentConfigError):
        load_experiment_file(_write_json(tmp_path / "g.json", {"methods": "eo", "n": 10, "d": 3, "graph_count": 0}))
    with pytest.raises(ExperimentConfigError):
        load_experiment_file(_write_json(tmp_path / "s.json", {"methods": "sdp", "n": 10, "d": 3, "sdp": {"rank": 1}}))


# ════════════════════════════════════════════════════════════
# COMMAND LINE
# ════════════════════════════════════════════════════════════

def _run(*argv) -> tuple:
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = cli.main([str(a) for a in argv])
    return code, out.getvalue()


def test_cli_oracle():
    print("\n" + "=" * 60)
    print("TEST 4: Command line")
    print("=" * 60)

    code, out = _run("oracle", "--graph", C5)
    assert code == 0
    assert out.strip() == "4"


def test_cli_usage_and_parameter_errors(tmp_path):
    assert _run("solve", "--graph", C5, "--method", "eo", "--bogus")[0] == 1
    assert _run("solve", "--graph", C5, "--method", "tabu")[0] == 1
    assert _run("oracle", "--graph", tmp_path / "missing.txt")[0] == 1
    assert _run("gen", "--n", 5, "--d", 3, "--out", tmp_path)[0] == 1
    assert _run("bench", "--method", "eo")[0] == 1
    assert _run("solve", "--graph", C5, "--method", "gnn-relax")[0] == 1


def test_cli_runtime_error_exit_code():
    with patch("main.exact_maxcut", side_effect=RuntimeError("enumeration failed")):
        assert _run("oracle", "--graph", C5)[0] == 2


def test_cli_solve_is_reproducible():
    first = _run("solve", "--method", "eo", "--graph", C5, "--steps", 2000)
    second = _run("solve", "--method", "eo", "--graph", C5, "--steps", 2000)
    assert first[0] == 0 and first == second
    header, row = first[1].splitlines()
    assert header == ",".join(cli.SOLVE_HEADER)
    fields = row.split(",")
    assert fields[0] == "eo" and fields[5] == "4"

    code, out = _run("solve", "--method", "sdp", "--graph", C5)
    fields = out.splitlines()[1].split(",")
    assert code == 0
    assert fields[5] == "4"
    assert float(fields[7]) >= float(fields[6])


def test_cli_solve_reads_experiment_file(tmp_path):
    cfg = _write_json(tmp_path / "solve.json", {
        "methods": ["eo", "sdp"], "n": 100, "d": 3,
        "eo": {"tau": 1.7, "t_max": 300, "restarts": 1},
        "sdp": {"rounding_trials": 7},
    })
    with patch("main.eo_run", wraps=eo_run) as run:
        code, out = _run("solve", "--method", "eo", "--graph", C5, "--config", cfg)
    assert code == 0 and out.startswith("method,")
    params = run.call_args.args[1]
    assert (params.tau, params.t_max, params.restarts) == (1.7, 300, 1)

    with patch("main.eo_run", wraps=eo_run) as run:
        assert _run("solve", "--method", "eo", "--graph", C5, "--config", cfg, "--steps", 40)[0] == 0
    assert run.call_args.args[1].t_max == 40

    with patch("main.gw_solve", wraps=gw_solve) as solve:
        assert _run("solve", "--method", "sdp", "--graph", C5, "--config", cfg)[0] == 0
    assert solve.call_args.args[1].rounding_trials == 7


def test_cli_config_flag_is_checked(tmp_path):
    missing = tmp_path / "missing.json"
    assert _run("solve", "--method", "eo", "--graph", C5, "--config", missing)[0] == 1
    assert _run("study", "--graph", C5, "--runs", 2, "--config", missing)[0] == 1

    cfg = _write_json(tmp_path / "any.json", {"methods": "eo", "n": 10, "d": 3})
    assert _run("gen", "--n", 10, "--d", 3, "--out", tmp_path, "--config", cfg)[0] == 1
    assert _run("oracle", "--graph", C5, "--config", cfg)[0] == 1
    assert not list(tmp_path.glob("graph_*.txt"))


def test_cli_solve_writes_trace(tmp_path):
    trace = tmp_path / "trace.csv"
    out = tmp_path / "solve.csv"
    code, _ = _run("solve", "--method", "eo", "--graph", C5, "--steps", 50, "--trace", trace, "--out", out)
    assert code == 0
    assert trace.read_text().splitlines()[0] == "step,cut"
    assert out.read_text().startswith("method,")


def test_cli_gen_writes_graph_files(tmp_path):
    code, out = _run("gen", "--n", 10, "--d", 3, "--count", 2, "--seed", 11, "--out", tmp_path)
    assert code == 0
    paths = out.split()
    assert [Path(p).name for p in paths] == ["graph_n10_d3_0000.txt", "graph_n10_d3_0001.txt"]
    for p in paths:
        g = read_edge_list(p)
        assert g.n == 10 and g.is_regular()


def test_cli_bench_rerun_is_byte_identical(tmp_path):
    args = ["bench", "--method", "eo", "--method", "sdp", "--n", 12, "--d", 3,
            "--graphs", 3, "--steps", 400, "--seed", 5, "--threads", 2, "--overlap"]
    assert _run(*args, "--out", tmp_path / "a.csv")[0] == 0
    assert _run(*args, "--out", tmp_path / "b.csv")[0] == 0
    for suffix in (".csv", "_summary.csv", "_overlap.csv"):
        a = (tmp_path / f"a{suffix}").read_bytes()
        assert a == (tmp_path / f"b{suffix}").read_bytes()
    assert len((tmp_path / "a.csv").read_text().splitlines()) == 1 + 6
    assert (tmp_path / "a_timings.csv").exists()


def test_cli_bench_from_config(tmp_path):
    out = tmp_path / "smoke.csv"
    assert _run("bench", "--config", HERE / "configs" / "smoke.json", "--out", out)[0] == 0
    summary = (tmp_path / "smoke_summary.csv").read_text().splitlines()
    assert summary[0] == ",".join(SUMMARY_HEADER)
    assert len(summary) == 1 + 4


def test_cli_study(tmp_path):
    code, out = _run("study", "--graph", C5, "--runs", 3, "--steps", 300)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == ",".join(STUDY_HEADER)
    assert lines[1].startswith("0,0,3,")
    assert _run("study", "--graph", C5, "--runs", 0)[0] == 1


def test_cli_train_then_solve(tmp_path):
    config = _write_json(tmp_path / "tiny.json", {
        "methods": "gnn-relax", "n": 8, "d": 3, "master_seed": 2,
        "gnn": {"layers": 2, "hops": 1, "width": 3, "train_graphs": 3, "learning_rate": 0.01},
    })
    ckpt = tmp_path / "tiny.ckpt"
    code, out = _run("train", "--config", config, "--loss", "relaxation", "--out", ckpt)
    assert code == 0
    assert out.strip() == str(ckpt)

    _run("gen", "--n", 8, "--d", 3, "--out", tmp_path)
    graph = tmp_path / "graph_n8_d3_0000.txt"
    code, out = _run("solve", "--method", "gnn-relax", "--graph", graph, "--checkpoint", ckpt)
    assert code == 0
    assert out.splitlines()[1].startswith("gnn-relax,8,3,")
    assert _run("solve", "--method", "gnn-pg", "--graph", graph, "--checkpoint", ckpt)[0] == 1


def main():
    """Run all Phase 5 tests."""
    import tempfile

    print("\n")
    print("╔" + "=" * 58 + "╗")
    print("║" + " " * 58 + "║")
    print("║" + "  RegCut Phase 5 Test Suite".center(58) + "║")
    print("║" + "  Harness + Result Files + CLI".center(58) + "║")
    print("║" + " " * 58 + "║")
    print("╚" + "=" * 58 + "╝")

    test_benchmark_seeds_are_pure_and_disjoint()
    test_eo_on_k4_cuts_four_edges()
    test_records_independent_of_thread_count()
    test_parallel_trials_run_in_worker_processes()
    test_records_carry_recomputable_values()
    test_failed_trials_become_error_records()
    test_invalid_cells_are_rejected()
    test_gnn_block_controls_normalization()
    test_gnn_cell_trains_then_solves()
    test_supplied_model_must_match_method()
    test_compare_methods_pairs_shared_graphs()
    test_emit_table_empty_and_single_group()
    test_degree_sweep_table_shape()
    test_size_sweep_table_rows_ascend()
    test_cli_oracle()
    test_cli_runtime_error_exit_code()
    test_cli_solve_is_reproducible()

    for test in (test_results_store_roundtrip, test_experiment_file_expansion, test_experiment_file_errors,
                 test_cli_usage_and_parameter_errors, test_cli_solve_reads_experiment_file,
                 test_cli_config_flag_is_checked, test_cli_solve_writes_trace,
                 test_cli_gen_writes_graph_files, test_cli_bench_rerun_is_byte_identical,
                 test_cli_bench_from_config, test_cli_study, test_cli_train_then_solve):
        with tempfile.TemporaryDirectory() as tmp:
            test(Path(tmp))

    print("\n" + "=" * 60)
    print("Phase 5 Testing Complete")
    print("=" * 60)


if __name__ == "__main__":
    main()
