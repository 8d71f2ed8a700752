import json
import os

import pandas as pd
import pytest
from pydantic import BaseModel, ValidationError

from wireless_vne.cli.main import EXIT_ERROR, EXIT_OK, EXIT_REJECTED, main
from wireless_vne.config import INSTANCE_DIR, PresetManager, SweepPreset, load_config, merge_config, parse_override
from wireless_vne.engine import SweepExecutor, SweepPlan, plot_series
from wireless_vne.engine.sweep_executor import SUMMARY_COLUMNS, TIMING_COLUMN
from wireless_vne.model import FeasibilityVerdict, LoadVector
from wireless_vne.network import load_substrate
from wireless_vne.registry import ERROR_PREFIX, CheckerRegistry

SMALL_SWEEP_BASE = [
    "substrate.n_nodes=10",
    "substrate.square_side=35",
    "requests.arrival_rate=1",
    "requests.node_count=[2, 4]",
    "checker.method=sufficient",
    "windows=5",
    "warmup=1",
    "k_search=2",
]


# ---- checker registry ----

def test_registry_builtin_checkers(corridor):
    sn, loads = corridor
    registry = CheckerRegistry()
    assert registry.names() == ["exact", "simulation", "sufficient"]
    assert all("parameters" in entry for entry in registry.describe())
    assert not registry.create("exact")(sn.conflict_graph, loads).feasible
    checker = registry.create("simulation", epsilon=0.3, horizon=500)
    assert checker.keywords["horizon"] == 500


def test_registry_error_verdicts(corridor):
    sn, loads = corridor
    registry = CheckerRegistry()
    unknown = registry.execute_check("oracle", cg=sn.conflict_graph, loads=loads)
    assert not unknown.feasible
    assert unknown.detail["error"].startswith(ERROR_PREFIX)
    bad = registry.execute_check("simulation", cg=sn.conflict_graph, loads=loads, epsilon=2.0)
    assert bad.detail["error"].startswith(ERROR_PREFIX)
    with pytest.raises(KeyError):
        registry.execute_check("oracle", cg=sn.conflict_graph, loads=loads, raise_on_error=True)


def test_registry_handler_failure_becomes_error_verdict():
    from wireless_vne.model import ConflictGraph

    ring = ConflictGraph.from_edges(range(25), [(i, (i + 1) % 25) for i in range(25)])
    loads = LoadVector({v: 0.1 for v in range(25)})
    verdict = CheckerRegistry().execute_check("exact", cg=ring, loads=loads)
    assert not verdict.feasible
    assert "執行失敗" in verdict.detail["error"]


def test_register_custom_checker(corridor):
    class NoParams(BaseModel):
        pass

    registry = CheckerRegistry()
    registry.register_checker(name="always", description="accept everything", parameters=NoParams,
                              handler=lambda cg, loads: FeasibilityVerdict(True, "sufficient"))
    sn, loads = corridor
    assert registry.execute_check("always", cg=sn.conflict_graph, loads=loads).feasible
    with pytest.raises(ValueError):
        registry.register_checker(name="", description="", parameters=NoParams, handler=print)


# ---- configuration ----

def test_default_config():
    config = load_config()
    assert config.algorithm == "alg6"
    assert config.checker.method == "simulation"
    assert config.checker.epsilon == 0.3
    assert config.requests.arrival_rate == 5.0
    assert config.variant.name == "alg6"


def test_overrides_and_config_file(tmp_path):
    path = tmp_path / "exp.json"
    path.write_text(json.dumps({"algorithm": "alg2", "substrate": {"density": "high"}, "k_search": 4}),
                    encoding="utf-8")
    config = load_config(path, ["k_search=2", "requests.shape=star"])
    assert config.algorithm == "alg2"
    assert config.substrate.density == "high"
    assert config.k_search == 2
    assert config.requests.shape == "star"


@pytest.mark.parametrize("override", [
    "algorithm=alg9",
    "substrate.colour=blue",
    "warmup=500",
    "checker.epsilon=1.5",
    "k_search=0",
])
def test_invalid_config_rejected(override):
    with pytest.raises(ValidationError):
        load_config(overrides=[override])


def test_parse_override():
    assert parse_override("requests.arrival_rate=2.5") == ("requests.arrival_rate", 2.5)
    assert parse_override("algorithm=alg3") == ("algorithm", "alg3")
    with pytest.raises(ValueError):
        parse_override("no-equals-sign")


def test_merge_config_revalidates():
    config = merge_config(load_config(), {"algorithm": "alg1", "substrate.kind": "grid"})
    assert config.algorithm == "alg1"
    assert config.substrate.kind == "grid"
    with pytest.raises(ValidationError):
        merge_config(config, {"substrate.kind": "file"})


def test_exact_checker_limited_to_small_substrates():
    from wireless_vne.engine import run_experiment

    with pytest.raises(ValidationError, match="checker.max_vertices"):
        load_config(overrides=["checker.method=exact"])
    with pytest.raises(ValidationError):
        load_config(overrides=["checker.method=exact", "substrate.kind=grid"])
    small = ["checker.method=exact", "substrate.kind=grid", "substrate.grid_width=3", "substrate.grid_height=2",
             "requests.node_count=[2, 3]", "requests.arrival_rate=1", "windows=4", "warmup=1", "k_search=2"]
    config = load_config(overrides=small)
    assert config.substrate.max_link_count() == 7
    assert len(run_experiment(config, seed=0).records) == 4

    from_file = small[:1] + ["substrate.kind=file",
                             f"substrate.path={os.path.join(INSTANCE_DIR, 'five_node_substrate.json')}",
                             "checker.max_vertices=5"] + small[4:]
    with pytest.raises(ValueError, match="checker.max_vertices"):
        run_experiment(load_config(overrides=from_file), seed=0)


# ---- presets, sweeps and plot data ----

def test_builtin_presets():
    manager = PresetManager()
    assert set(manager.names()) >= {"feasibility_methods", "substrate_density", "grid_topology", "vn_shape",
                                    "arrival_rate", "search_count"}
    assert len(manager.get("arrival_rate").cells()) == 48
    assert len(manager.get("substrate_density").cells()) == 18
    search = manager.get("search_count")
    assert len(search.cells()) == 18
    assert {cell["substrate.n_nodes"] for cell in search.cells()} == {30, 50, 70}
    assert search.series == "substrate.n_nodes"
    for name in manager.names():
        preset = manager.get(name)
        base = merge_config(load_config(), preset.base)
        for cell in preset.cells():
            merge_config(base, cell)
    with pytest.raises(KeyError):
        manager.get("nope")


def test_missing_preset_file():
    with pytest.raises(FileNotFoundError):
        PresetManager("does_not_exist.json")


def test_sweep_plan_and_execution():
    preset = SweepPreset(description="two variants", base={"requests.arrival_rate": 2},
                         grid={"algorithm": ["alg1", "alg6"]}, x="algorithm")
    base = load_config(overrides=SMALL_SWEEP_BASE + ["replications=2"])
    plan = SweepPlan.from_preset(preset, base)
    assert [(c.values["algorithm"], c.seed) for c in plan.cells] == [
        ("alg1", 0), ("alg1", 1), ("alg6", 0), ("alg6", 1)]

    frame = SweepExecutor(1).execute_plan(plan, base)
    assert list(frame.columns) == ["algorithm", "seed"] + SUMMARY_COLUMNS
    assert TIMING_COLUMN not in frame.columns
    assert len(frame) == 4


def test_sweep_timing_column():
    preset = SweepPreset(description="one cell", grid={"k_search": [1]}, x="k_search")
    base = load_config(overrides=SMALL_SWEEP_BASE + ["timing=true"])
    frame = SweepExecutor(1).execute_plan(SweepPlan.from_preset(preset, base), base)
    assert TIMING_COLUMN in frame.columns
    assert (frame[TIMING_COLUMN] >= 0).all()


def test_sweep_executor_argument_check():
    with pytest.raises(ValueError):
        SweepExecutor(0)


def test_plot_series_aggregates():
    frame = pd.DataFrame({
        "algorithm": ["alg1", "alg1", "alg6", "alg6", "alg6"],
        "density": ["high", "high", "high", "low", "low"],
        "avg_revenue": [10.0, 14.0, 20.0, 30.0, 30.0],
    })
    out = plot_series(frame, "density", "algorithm")
    assert list(out.columns) == ["density", "algorithm", "metric", "mean", "std", "count", "ci95_half_width"]
    row = out[(out["density"] == "high") & (out["algorithm"] == "alg1")].iloc[0]
    assert row["mean"] == pytest.approx(12.0)
    assert row["count"] == 2
    assert row["ci95_half_width"] == pytest.approx(1.959963984540054 * row["std"] / 2 ** 0.5)
    single = out[(out["density"] == "high") & (out["algorithm"] == "alg6")].iloc[0]
    assert single["std"] == 0.0
    with pytest.raises(KeyError):
        plot_series(frame, "missing")


# ---- command line ----

def _instance(name):
    return os.path.join(INSTANCE_DIR, name)


def test_cli_check_corridor(capsys):
    assert main(["check", "--input", _instance("corridor_check.json")]) == EXIT_REJECTED
    verdict = json.loads(capsys.readouterr().out)
    assert verdict["method"] == "sufficient"
    assert verdict["detail"]["vertex"] == ["A", "C"]
    assert main(["check", "--input", _instance("corridor_check.json"), "--method", "exact"]) == EXIT_REJECTED


def test_cli_embed_walkthrough(capsys):
    code = main(["embed", "--substrate", _instance("five_node_substrate.json"),
                 "--request", _instance("five_node_request.json"), "-k", "1"])
    assert code == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["accepted"] is True
    assert out["sigma"] == pytest.approx(1.101)
    assert out["embedding"]["node_map"] == [["a", "C"], ["b", "A"], ["c", "B"]]


def test_cli_embed_rejection(tmp_path, capsys):
    request = tmp_path / "huge.json"
    request.write_text(json.dumps({"vn_id": "huge", "nodes": [{"id": "a", "cpu": 500.0}, {"id": "b", "cpu": 1.0}],
                                   "links": [{"u": "a", "v": "b", "bw": 1.0}]}), encoding="utf-8")
    code = main(["embed", "--substrate", _instance("five_node_substrate.json"), "--request", str(request),
                 "--method", "sufficient"])
    assert code == EXIT_REJECTED
    assert json.loads(capsys.readouterr().out)["accepted"] is False


def test_cli_gen_topology_and_requests(tmp_path):
    topo = tmp_path / "grid.json"
    assert main(["gen-topology", "--kind", "grid", "--grid-width", "3", "--grid-height", "3",
                 "--out", str(topo)]) == EXIT_OK
    assert len(load_substrate(topo).links) == 12

    reqs = tmp_path / "reqs.json"
    assert main(["gen-requests", "--count", "3", "--shape", "tree", "--out", str(reqs)]) == EXIT_OK
    assert len(json.loads(reqs.read_text(encoding="utf-8"))["requests"]) == 3


def test_cli_simulate_writes_metrics(tmp_path, capsys):
    out = tmp_path / "metrics.csv"
    argv = ["simulate", "--out", str(out)]
    for item in SMALL_SWEEP_BASE:
        argv += ["--set", item]
    assert main(argv) == EXIT_OK
    summary = json.loads(capsys.readouterr().out)
    assert "embed_time_ms" not in summary
    assert len(pd.read_csv(out)) == 5


def test_cli_plot_data(tmp_path):
    sweep = tmp_path / "sweep.csv"
    pd.DataFrame({"algorithm": ["alg1", "alg6"], "seed": [0, 0], "avg_revenue": [1.0, 2.0]}).to_csv(sweep, index=False)
    out = tmp_path / "plot.csv"
    assert main(["plot-data", "--input", str(sweep), "--x", "algorithm", "--out", str(out)]) == EXIT_OK
    assert list(pd.read_csv(out)["mean"]) == [1.0, 2.0]


def test_cli_errors_exit_with_one(tmp_path):
    assert main(["sweep", "--preset", "nope", "--out", str(tmp_path / "x.csv")]) == EXIT_ERROR
    assert main(["check", "--input", str(tmp_path / "missing.json")]) == EXIT_ERROR
    with pytest.raises(SystemExit) as exc:
        main(["embed", "--algorithm", "alg9"])
    assert exc.value.code == EXIT_ERROR


def test_cli_lists_presets(capsys):
    assert main(["presets"]) == EXIT_OK
    assert "arrival_rate" in capsys.readouterr().out


def test_sweep_csv_is_byte_identical_on_rerun(tmp_path):
    from wireless_vne.engine import write_sweep_csv

    preset = SweepPreset(description="rates", grid={"requests.arrival_rate": [1, 2]}, x="requests.arrival_rate")
    base = load_config(overrides=SMALL_SWEEP_BASE)
    for name in ("a.csv", "b.csv"):
        write_sweep_csv(SweepExecutor(1).execute_plan(SweepPlan.from_preset(preset, base), base), tmp_path / name)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert len(pd.read_csv(tmp_path / "a.csv")) == 2
