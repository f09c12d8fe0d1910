#!/usr/bin/env python3
"""Time the compiled simulation kernel against its plain-Python source.

Both callables run the exact same closed loop on the exact same input
arrays (the jitted kernel wraps `run_loop_py` unchanged), so the timings
isolate the cost of the interpreter.  The first jitted call is discarded
as compilation warmup.

Usage:
    python3 benchmarks/benchmark_jit.py [--steps N] [--repeat R]
"""

import argparse
import statistics
import time

import numpy as np

from lyapclamp import _kernels
from lyapclamp.config import preset


def build_inputs(steps: int):
    cfg = preset("test1", seed=1)
    plant, ref, base, scfg = cfg.build()
    y_r = np.empty(steps)
    y_rd = np.empty(steps)
    y_rdd = np.empty(steps)
    for i in range(steps):
        smp = ref.eval(i * cfg.dt)
        y_r[i] = smp.y_r
        y_rd[i] = smp.y_r_dot
        y_rdd[i] = smp.y_r_ddot
    ub = base.draw(steps)
    out = [np.empty(steps) for _ in range(9)]
    ovr = np.zeros(steps, dtype=np.uint8)
    dec = np.zeros(steps, dtype=np.uint8)
    args = (
        cfg.a1, cfg.a2, cfg.b,
        _kernels.VARIANT_V1, scfg.k, cfg.dt,
        _kernels.BASE_ARRAY, ub, 0.0, 0.0, 0.0,
        0.0, 0.0, y_r, y_rd, y_rdd,
        out[0], out[1], out[2], out[3], out[4], out[5], out[6],
        ovr, out[7], out[8], dec,
    )
    return args


def bench(fn, args, repeat: int) -> list:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return times


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=60_000)
    ap.add_argument("--repeat", type=int, default=5)
    ns = ap.parse_args()

    args = build_inputs(ns.steps)

    if not _kernels.JIT_ENABLED:
        raise SystemExit(
            "JIT is disabled (LYAPCLAMP_NO_JIT / NUMBA_DISABLE_JIT set or "
            "numba missing); nothing to compare."
        )

    _kernels.run_loop(*args)  # compilation warmup, not timed

    jit_times = bench(_kernels.run_loop, args, ns.repeat)
    py_times = bench(_kernels.run_loop_py, args, ns.repeat)

    jit = statistics.median(jit_times)
    py = statistics.median(py_times)
    print(f"steps per run : {ns.steps}")
    print(f"repeats       : {ns.repeat} (median reported)")
    print(f"numba kernel  : {jit * 1e3:9.3f} ms  ({ns.steps / jit / 1e6:6.2f} Msteps/s)")
    print(f"pure python   : {py * 1e3:9.3f} ms  ({ns.steps / py / 1e6:6.2f} Msteps/s)")
    print(f"speedup       : {py / jit:9.1f}x")


if __name__ == "__main__":
    main()
