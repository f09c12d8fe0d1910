import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from lyapclamp import cli
from lyapclamp.config import ConfigError, RunConfig, preset


def run_cli(*argv):
    return cli.main(list(argv))


def test_preset_writes_artifacts_and_passes(tmp_path):
    out = tmp_path / "t1"
    assert run_cli("preset", "test1", "--seed", "1", "--out", str(out)) == 0
    assert (out / "trace.csv").exists()
    assert (out / "summary.json").exists()
    assert (out / "plot.svg").exists()
    summary = json.loads((out / "summary.json").read_text())
    assert summary["metrics"]["max_abs_e_after"] <= 0.2
    assert summary["termination"]["status"] == "completed"
    assert summary["preset"] == "test1"
    assert all(summary["criteria"].values())


def test_no_plot_skips_svg(tmp_path):
    out = tmp_path / "noplot"
    assert run_cli("preset", "test2", "--seed", "1", "--out", str(out), "--no-plot") == 0
    assert not (out / "plot.svg").exists()


def test_csv_round_trip_full_precision(tmp_path):
    cfg = preset("test1", 3)
    plant, ref, base, scfg = cfg.build()
    from lyapclamp.harness import simulate

    trace = simulate(plant, ref, base, scfg, cfg.dt, 2.0, x0=cfg.x0())
    path = tmp_path / "trace.csv"
    cli.write_trace_csv(trace, path)
    data = cli.read_trace_csv(path)
    for name in ("t", "x1", "x2", "e", "s", "u_b", "threshold", "u", "V1", "V2"):
        assert np.array_equal(np.asarray(data[name]), getattr(trace, name)), name
    assert np.array_equal(np.asarray(data["overridden"]), trace.overridden)
    assert np.array_equal(np.asarray(data["decrease_ok"]), trace.decrease_ok)


def test_run_config_matches_preset_byte_identical(tmp_path):
    cfg = preset("test1", 7)
    cfg_file = tmp_path / "t1.ini"
    cfg_file.write_text(cfg.to_ini())
    out_a = tmp_path / "from_config"
    out_b = tmp_path / "from_preset"
    assert run_cli("run", str(cfg_file), "--out", str(out_a), "--no-plot") == 0
    assert run_cli("preset", "test1", "--seed", "7", "--out", str(out_b), "--no-plot") == 0
    assert (out_a / "trace.csv").read_bytes() == (out_b / "trace.csv").read_bytes()


def test_config_echo_reproduces_run(tmp_path):
    out = tmp_path / "first"
    assert run_cli("preset", "test4", "--seed", "2", "--out", str(out), "--no-plot") == 0
    summary = json.loads((out / "summary.json").read_text())
    echoed = RunConfig.from_dict(summary["config"])
    cfg_file = tmp_path / "echo.ini"
    cfg_file.write_text(echoed.to_ini())
    out2 = tmp_path / "second"
    assert run_cli("run", str(cfg_file), "--out", str(out2), "--no-plot") == 0
    assert (out / "trace.csv").read_bytes() == (out2 / "trace.csv").read_bytes()


def test_invalid_gain_names_field(tmp_path, capsys):
    cfg_file = tmp_path / "bad.ini"
    cfg_file.write_text("[plant]\nb = 0\n")
    assert run_cli("run", str(cfg_file), "--out", str(tmp_path / "o")) == 1
    assert "plant.b" in capsys.readouterr().err


def test_unknown_key_rejected(tmp_path, capsys):
    cfg_file = tmp_path / "bad.ini"
    cfg_file.write_text("[plant]\nmass = 2\n")
    assert run_cli("run", str(cfg_file), "--out", str(tmp_path / "o")) == 1
    assert "plant.mass" in capsys.readouterr().err


def test_missing_config_file(tmp_path):
    assert run_cli("run", str(tmp_path / "nope.ini"), "--out", str(tmp_path / "o")) == 1


def test_usage_error_exits_one(tmp_path):
    assert run_cli("preset", "test9", "--out", str(tmp_path / "o")) == 1
    assert run_cli("sweep", "test1", "--seeds", "bogus", "--out", str(tmp_path / "o")) == 1


def test_fine_step_config_completes(tmp_path):
    cfg = preset("test1", 1)
    import dataclasses

    fine = dataclasses.replace(cfg, dt=0.001, horizon=20.0)
    cfg_file = tmp_path / "fine.ini"
    cfg_file.write_text(fine.to_ini())
    out = tmp_path / "fine_out"
    assert run_cli("run", str(cfg_file), "--out", str(out), "--no-plot") == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["metrics"]["decrease_violations"] == 0
    assert summary["termination"]["status"] == "completed"


def test_svg_well_formed_and_self_contained(tmp_path):
    out = tmp_path / "plot"
    assert run_cli("preset", "test3", "--seed", "1", "--out", str(out)) == 0
    svg = (out / "plot.svg").read_text()
    root = ET.fromstring(svg)
    assert root.tag.endswith("svg")
    assert "href" not in svg
    assert "url(" not in svg
    assert "<script" not in svg


def test_sweep_singleton_matches_preset(tmp_path):
    out_sweep = tmp_path / "sweep"
    out_single = tmp_path / "single"
    assert run_cli("sweep", "test1", "--seeds", "7", "--out", str(out_sweep), "--no-plot") == 0
    assert run_cli("preset", "test1", "--seed", "7", "--out", str(out_single), "--no-plot") == 0
    sweep_summary = json.loads((out_sweep / "seed_7" / "summary.json").read_text())
    single_summary = json.loads((out_single / "summary.json").read_text())
    assert sweep_summary["metrics"] == single_summary["metrics"]
    agg = json.loads((out_sweep / "aggregate.json").read_text())
    assert agg["seeds"] == [7]
    for stats in agg["metrics"].values():
        assert stats["min"] == stats["median"] == stats["max"]


def test_sweep_range_spec_and_aggregate(tmp_path):
    out = tmp_path / "sweep"
    assert run_cli("sweep", "test1", "--seeds", "1..3", "--out", str(out), "--no-plot") == 0
    agg = json.loads((out / "aggregate.json").read_text())
    assert agg["seeds"] == [1, 2, 3]
    assert agg["metrics"]["max_abs_e_after"]["max"] <= 0.2
    assert all(agg["passed"].values())
    for seed in (1, 2, 3):
        assert (out / f"seed_{seed}" / "trace.csv").exists()


def test_metric_failure_exits_two(tmp_path, monkeypatch):
    def failing(name, trace, metrics):
        return {"forced": False}

    monkeypatch.setattr(cli, "preset_criteria", failing)
    assert run_cli("preset", "test1", "--seed", "1", "--out", str(tmp_path / "o"), "--no-plot") == 2


def test_preset_unknown_name_config_error():
    with pytest.raises(ConfigError):
        preset("test5")
