import json
from pathlib import Path

import pandas as pd
import pytest

from errors import ConfigError, UnknownVariant
from experiments.runner import (
    ExperimentConfig,
    ExperimentSummary,
    derive_seed,
    emit_anytime_table,
    run_experiment,
    run_particle_sweep,
)
from settings import load_settings
from solvers.config import SwarmConfig
from solvers.trace import read_trace_csv
from tools.benchmark_generator import BenchSpec
from tools.oracle import check_anytime


def small_experiment(out, **overrides):
    values = {
        "bench": BenchSpec(family="erdos_renyi", n=6, p=0.6),
        "solver": SwarmConfig(num_particles=10, t_max=15),
        "num_instances": 2,
        "repeats": 2,
        "master_seed": 5,
        "output_dir": str(out),
    }
    values.update(overrides)
    return ExperimentConfig(**values)


def relative_files(root: Path):
    return sorted(p.relative_to(root) for p in root.rglob("*") if p.is_file())


def test_output_layout(tmp_path):
    summary = run_experiment(small_experiment(tmp_path))
    assert summary.trace_files == 8
    assert summary.ok
    traces = sorted((tmp_path / "traces").rglob("*.csv"))
    assert len(traces) == 8
    assert (tmp_path / "traces" / "PCD_CrossOver" / "instance_001_run_001.csv").exists()
    assert (tmp_path / "instances" / "instance_000.json").exists()

    curve = pd.read_csv(tmp_path / "mean_curve.csv")
    assert list(curve.columns) == ["cycle", "PCD", "PCD_CrossOver"]
    assert len(curve) == 15

    written = json.loads((tmp_path / "summary.json").read_text(encoding="utf-8"))
    assert written["variants"] == ["PCD", "PCD_CrossOver"]
    assert set(written["win_rate"]) == {"PCD_CrossOver vs PCD"}
    assert written["resources"] is None


def test_traces_parse_back_and_are_anytime(tmp_path):
    run_experiment(small_experiment(tmp_path))
    for path in (tmp_path / "traces").rglob("*.csv"):
        frame = read_trace_csv(path)
        assert check_anytime(frame["g_best_cost"].tolist()) is None
        assert (frame["messages_cost"] == 5).all()


def test_rerun_is_byte_identical(tmp_path):
    run_experiment(small_experiment(tmp_path / "a"))
    run_experiment(small_experiment(tmp_path / "b"))
    files = relative_files(tmp_path / "a")
    assert files == relative_files(tmp_path / "b")
    for name in files:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_variant_list_does_not_change_other_seeds(tmp_path):
    run_experiment(small_experiment(tmp_path / "both"))
    run_experiment(small_experiment(tmp_path / "one", variants=["PCD"]))
    for path in (tmp_path / "one" / "traces" / "PCD").glob("*.csv"):
        twin = tmp_path / "both" / "traces" / "PCD" / path.name
        assert path.read_bytes() == twin.read_bytes()


def test_message_logs(tmp_path):
    run_experiment(small_experiment(tmp_path, repeats=1, num_instances=1, message_log=True))
    logs = list((tmp_path / "traces" / "PCD").glob("*_messages.csv"))
    assert len(logs) == 1
    assert set(pd.read_csv(logs[0])["kind"]) == {"VALUE", "COST", "BEST"}


def test_maximisation_experiment(tmp_path):
    cfg = small_experiment(
        tmp_path,
        bench=BenchSpec(family="sensor_grid", rows=2, cols=2),
        num_instances=1,
        variants=["PCD"],
    )
    summary = run_experiment(cfg)
    assert summary.maximize
    assert summary.mean_final("PCD") > 0
    for path in (tmp_path / "traces").rglob("*.csv"):
        costs = read_trace_csv(path)["g_best_cost"].tolist()
        assert check_anytime(costs, maximize=True) is None


def test_instance_files_as_source(tmp_path, example):
    from cdcop.instance_file import dump_instance

    path = dump_instance(example, tmp_path / "example.json")
    cfg = small_experiment(tmp_path / "out", bench=None, instance_files=[str(path)], repeats=1)
    summary = run_experiment(cfg)
    assert summary.trace_files == 2
    assert summary.setting == "1 files"


def test_config_validation(tmp_path):
    with pytest.raises(ValueError):
        small_experiment(tmp_path, repeats=0)
    with pytest.raises(ValueError):
        small_experiment(tmp_path, variants=[])
    with pytest.raises(ValueError):
        small_experiment(tmp_path, instance_files=["x.json"])
    with pytest.raises(UnknownVariant):
        run_experiment(small_experiment(tmp_path, variants=["PCD", "GA"]))


def test_config_from_settings():
    cfg = ExperimentConfig.from_settings(
        load_settings(), bench=BenchSpec(family="random_tree", n=5), repeats=3
    )
    assert cfg.num_instances == 25
    assert cfg.repeats == 3
    assert cfg.solver.num_particles == 200
    assert cfg.setting == "random_tree n=5"
    with pytest.raises(ConfigError):
        ExperimentConfig.from_settings(load_settings(), repeats=3)


def test_derive_seed():
    assert derive_seed(0, 1, 2, "PCD") == derive_seed(0, 1, 2, "PCD")
    assert derive_seed(0, 1, 2, "PCD") != derive_seed(0, 1, 2, "PCD_CrossOver")
    assert derive_seed(0, 1, 2, "PCD") != derive_seed(1, 1, 2, "PCD")
    assert 0 <= derive_seed(123, "instance", 4) < 2**64


def make_summary(setting, finals, maximize=False):
    return ExperimentSummary(
        setting=setting,
        variants=list(finals),
        maximize=maximize,
        final_means={v: [c] for v, c in finals.items()},
        mean_curve=pd.DataFrame(),
        win_rate={},
        trace_files=0,
        output_dir=Path("."),
    )


def test_anytime_table():
    table = emit_anytime_table(make_summary("er n=30 p=0.2", {"PCD": -100.0, "PCD_CrossOver": -110.0}))
    lines = table.splitlines()
    assert len(lines) == 3
    assert "PCD_CrossOver vs PCD (%)" in lines[0]
    assert lines[2].startswith("er n=30 p=0.2")
    assert lines[2].split()[-1] == "10.00"


def test_anytime_table_for_maximisation():
    table = emit_anytime_table(
        [
            make_summary("a", {"PCD": 50.0, "PCD_CrossOver": 60.0}, maximize=True),
            make_summary("b", {"PCD": 40.0, "PCD_CrossOver": 30.0}, maximize=True),
        ]
    )
    rows = table.splitlines()[2:]
    assert rows[0].split()[-1] == "20.00"
    assert rows[1].split()[-1] == "-25.00"


def test_anytime_table_unknown_variant():
    summary = make_summary("a", {"PCD": 1.0})
    with pytest.raises(UnknownVariant, match="unknown variant"):
        emit_anytime_table(summary, variants=["PCD", "PCD_CrossOver"])


def test_mixed_objectives_are_rejected(tmp_path, example):
    from cdcop.instance_file import dump_instance
    from tools.benchmark_generator import gen_sensor_grid

    files = [
        str(dump_instance(example, tmp_path / "min.json")),
        str(dump_instance(gen_sensor_grid(2, 2, seed=0), tmp_path / "max.json")),
    ]
    cfg = small_experiment(tmp_path / "out", bench=None, instance_files=files, repeats=1)
    with pytest.raises(ConfigError, match="mix objectives"):
        run_experiment(cfg)


def test_particle_sweep_shares_instances(tmp_path):
    cfg = small_experiment(tmp_path, num_instances=1, repeats=1, variants=["PCD"])
    summaries = run_particle_sweep(cfg, [4, 8])
    assert [s.setting for s in summaries] == ["erdos_renyi n=6 p=0.6 K=4", "erdos_renyi n=6 p=0.6 K=8"]
    for k in (4, 8):
        assert (tmp_path / f"K_{k}" / "summary.json").exists()
    assert (tmp_path / "K_4" / "instances" / "instance_000.json").read_bytes() == (
        tmp_path / "K_8" / "instances" / "instance_000.json"
    ).read_bytes()
    table = emit_anytime_table(summaries)
    assert len(table.splitlines()) == 4


def test_resources_recorded_with_wall_clock(tmp_path):
    summary = run_experiment(small_experiment(tmp_path, num_instances=1, repeats=1, record_wall_clock=True))
    assert summary.resources["rss_bytes"] > 0
    assert summary.resources["cpu_count"] >= 1


@pytest.mark.slow
def test_crossover_at_least_as_good_on_most_instances(tmp_path):
    cfg = ExperimentConfig(
        bench=BenchSpec(family="erdos_renyi", n=30, p=0.2),
        solver=SwarmConfig(num_particles=50, t_max=200),
        num_instances=25,
        repeats=3,
        master_seed=0,
        output_dir=str(tmp_path),
    )
    summary = run_experiment(cfg)
    assert summary.ok
    assert summary.win_rate["PCD_CrossOver vs PCD"] >= 0.6
