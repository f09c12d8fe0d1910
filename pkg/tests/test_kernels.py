import subprocess
import sys

import numpy as np

from lyapclamp import _kernels
from lyapclamp.config import preset
from lyapclamp.harness import simulate
from lyapclamp.signals import NoiseLaw


def _loop_inputs(n=600, variant=1, k=5.0, seed=4):
    dt = 0.01
    t = np.arange(n) * dt
    y_r = np.sin(t)
    y_rd = np.cos(t)
    y_rdd = -np.sin(t)
    ub = NoiseLaw(-500, 500, seed).draw(n)
    outs = [np.empty(n) for _ in range(9)]
    flags = [np.zeros(n, dtype=np.uint8) for _ in range(2)]
    args = (
        3.0, 2.0, 1.0, variant, k, dt,
        _kernels.BASE_ARRAY, ub, 0.0, 0.0, 0.0,
        0.0, 0.0, y_r, y_rd, y_rdd,
        outs[0], outs[1], outs[2], outs[3], outs[4], outs[5], outs[6],
        flags[0], outs[7], outs[8], flags[1],
    )
    return args, outs, flags


def test_jitted_and_python_loops_bit_identical():
    for variant, k in ((1, 5.0), (2, 150.0)):
        args_a, outs_a, flags_a = _loop_inputs(variant=variant, k=k)
        args_b, outs_b, flags_b = _loop_inputs(variant=variant, k=k)
        ra = _kernels.run_loop(*args_a)
        rb = _kernels.run_loop_py(*args_b)
        assert ra == rb == -1
        for a, b in zip(outs_a + flags_a, outs_b + flags_b):
            assert np.array_equal(a, b)


def test_env_flag_selects_python_fallback():
    code = (
        "import os; os.environ['LYAPCLAMP_NO_JIT'] = '1';"
        "from lyapclamp import _kernels;"
        "assert not _kernels.JIT_ENABLED;"
        "assert _kernels.run_loop is _kernels.run_loop_py"
    )
    subprocess.run([sys.executable, "-c", code], check=True)


def test_fallback_simulation_matches_jitted(tmp_path):
    # full preset run under the fallback must equal the jitted run exactly
    cfg = preset("test1", 11)
    plant, ref, base, scfg = cfg.build()
    jitted = simulate(plant, ref, base, scfg, cfg.dt, 5.0, x0=cfg.x0())
    script = tmp_path / "fallback_run.py"
    script.write_text(
        "import os\n"
        "os.environ['LYAPCLAMP_NO_JIT'] = '1'\n"
        "import numpy as np\n"
        "from lyapclamp.config import preset\n"
        "from lyapclamp.harness import simulate\n"
        "cfg = preset('test1', 11)\n"
        "plant, ref, base, scfg = cfg.build()\n"
        "tr = simulate(plant, ref, base, scfg, cfg.dt, 5.0, x0=cfg.x0())\n"
        "np.savez('%s', u=tr.u, x1=tr.x1, e=tr.e)\n" % (tmp_path / "out.npz").as_posix()
    )
    subprocess.run([sys.executable, str(script)], check=True)
    data = np.load(tmp_path / "out.npz")
    assert np.array_equal(data["u"], jitted.u)
    assert np.array_equal(data["x1"], jitted.x1)
    assert np.array_equal(data["e"], jitted.e)
