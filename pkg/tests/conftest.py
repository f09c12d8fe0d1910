import pytest

from lyapclamp.config import preset
from lyapclamp.harness import compute_metrics, simulate


def run_preset_trace(name, seed):
    cfg = preset(name, seed)
    plant, ref, base, scfg = cfg.build()
    trace = simulate(plant, ref, base, scfg, cfg.dt, cfg.horizon, x0=cfg.x0())
    return cfg, trace


@pytest.fixture(scope="session")
def preset_runs():
    """(name, seed) -> (config, trace, metrics) for all presets, seeds 1-3."""
    out = {}
    for name in ("test1", "test2", "test3", "test4"):
        for seed in (1, 2, 3):
            cfg, trace = run_preset_trace(name, seed)
            out[(name, seed)] = (cfg, trace, compute_metrics(trace, cfg.t_settle))
    return out
