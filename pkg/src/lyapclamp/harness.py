"""Closed-loop simulation harness: run, trace, and summarize.

Per-step event order: sample reference -> compute e (and s) from the
pre-update state -> draw u_b -> clamp -> log -> integrate with the clamped
u held constant over the step.

Linear plants with built-in references and base laws run through the
compiled kernel in `_kernels`; anything else (custom drift, custom base
law, RK4) takes the generic Python loop.  Both paths consume the same
precomputed reference and noise arrays and produce bit-identical traces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from . import _kernels
from .dynamics import NonFiniteState, PlantModel, State, euler_step, rk4_step
from .signals import (
    ConstantLaw,
    NoiseLaw,
    PidLaw,
    ReferenceSample,
    ZeroLaw,
)
from .stabilizer import StabilizerConfig, stabilize

DECREASE_TOL = _kernels.DECREASE_TOL

_TRACE_COLUMNS = (
    "t",
    "x1",
    "x2",
    "y_r",
    "y_r_dot",
    "y_r_ddot",
    "e",
    "s",
    "u_b",
    "threshold",
    "u",
    "overridden",
    "V1",
    "V2",
    "decrease_ok",
)


class EmptyTrace(ValueError):
    """Metrics requested over a trace with no records."""


@dataclass(frozen=True)
class StepRecord:
    t: float
    x1: float
    x2: float
    y_r: float
    y_r_dot: float
    y_r_ddot: float
    e: float
    s: float
    u_b: float
    threshold: float
    u: float
    overridden: bool
    V1: float
    V2: float
    decrease_ok: bool


@dataclass(frozen=True)
class Termination:
    status: str  # "completed" | "aborted"
    step: Optional[int] = None
    reason: Optional[str] = None

    @classmethod
    def completed(cls) -> "Termination":
        return cls("completed")

    @classmethod
    def aborted(cls, step: int, reason: str) -> "Termination":
        return cls("aborted", step, reason)


@dataclass
class Trace:
    """Full per-step log of one closed-loop run (column arrays)."""

    config: dict
    dt: float
    termination: Termination
    t: np.ndarray
    x1: np.ndarray
    x2: np.ndarray
    y_r: np.ndarray
    y_r_dot: np.ndarray
    y_r_ddot: np.ndarray
    e: np.ndarray
    s: np.ndarray
    u_b: np.ndarray
    threshold: np.ndarray
    u: np.ndarray
    overridden: np.ndarray
    V1: np.ndarray
    V2: np.ndarray
    decrease_ok: np.ndarray

    def __len__(self) -> int:
        return self.t.shape[0]

    @property
    def horizon(self) -> float:
        return len(self) * self.dt

    def record(self, i: int) -> StepRecord:
        return StepRecord(
            *(getattr(self, c)[i] for c in _TRACE_COLUMNS[:11]),
            bool(self.overridden[i]),
            float(self.V1[i]),
            float(self.V2[i]),
            bool(self.decrease_ok[i]),
        )

    def records(self) -> Iterator[StepRecord]:
        for i in range(len(self)):
            yield self.record(i)

    @staticmethod
    def column_names() -> tuple:
        return _TRACE_COLUMNS


@dataclass(frozen=True)
class Metrics:
    max_abs_e_after: float
    u_min: float
    u_max: float
    ub_min: float
    ub_max: float
    override_fraction: float
    decrease_violations: int
    chattering_index: float

    def as_dict(self) -> dict:
        return {
            "max_abs_e_after": self.max_abs_e_after,
            "u_min": self.u_min,
            "u_max": self.u_max,
            "ub_min": self.ub_min,
            "ub_max": self.ub_max,
            "override_fraction": self.override_fraction,
            "decrease_violations": self.decrease_violations,
            "chattering_index": self.chattering_index,
        }


def step_count(horizon: float, dt: float) -> int:
    return int(math.floor(horizon / dt + 1e-9))


def _reference_arrays(ref, n: int, dt: float):
    y_r = np.empty(n)
    y_rd = np.empty(n)
    y_rdd = np.empty(n)
    for i in range(n):
        smp = ref.eval(i * dt)
        y_r[i] = smp.y_r
        y_rd[i] = smp.y_r_dot
        y_rdd[i] = smp.y_r_ddot
    return y_r, y_rd, y_rdd


def simulate(
    plant: PlantModel,
    ref,
    base,
    cfg: StabilizerConfig,
    dt: float,
    horizon: float,
    x0: State = State(0.0, 0.0),
    integrator: str = "euler",
    config_snapshot: Optional[dict] = None,
) -> Trace:
    """Run the clamped closed loop and return the full trace."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if horizon < dt:
        raise ValueError("horizon must be at least one step")
    if cfg.dt != dt:
        raise ValueError("stabilizer dt must equal the simulation step")
    if not x0.is_finite():
        raise ValueError("initial state must be finite")
    if integrator not in ("euler", "rk4"):
        raise ValueError(f"unknown integrator {integrator!r}")

    n = step_count(horizon, dt)
    y_r, y_rd, y_rdd = _reference_arrays(ref, n, dt)

    cols = {
        name: np.empty(n)
        for name in ("x1", "x2", "e", "s", "u_b", "threshold", "u", "V1", "V2")
    }
    ovr = np.zeros(n, dtype=np.uint8)
    dec = np.zeros(n, dtype=np.uint8)

    fast, base_mode, ub_arr, pid = _fast_path(plant, base, cfg, dt, integrator, n)
    if fast:
        variant = _kernels.VARIANT_V1 if cfg.variant == "V1" else _kernels.VARIANT_V2
        a1 = plant.params["a1"]
        a2 = plant.params["a2"]
        abort = _kernels.run_loop(
            float(a1),
            float(a2),
            float(plant.gain_b),
            variant,
            float(cfg.k),
            float(dt),
            base_mode,
            ub_arr,
            pid[0],
            pid[1],
            pid[2],
            float(x0.x1),
            float(x0.x2),
            y_r,
            y_rd,
            y_rdd,
            cols["x1"],
            cols["x2"],
            cols["e"],
            cols["s"],
            cols["u_b"],
            cols["threshold"],
            cols["u"],
            ovr,
            cols["V1"],
            cols["V2"],
            dec,
        )
    else:
        abort = _generic_loop(
            plant, base, cfg, dt, n, x0, integrator, y_r, y_rd, y_rdd, cols, ovr, dec
        )

    if abort >= 0:
        term = Termination.aborted(abort, "non-finite state")
        keep = abort + 1
    else:
        term = Termination.completed()
        keep = n

    snapshot = config_snapshot or {
        "variant": cfg.variant,
        "k": cfg.k,
        "dt": dt,
        "horizon": horizon,
        "integrator": integrator,
    }
    sl = slice(0, keep)
    return Trace(
        config=snapshot,
        dt=dt,
        termination=term,
        t=np.arange(keep) * dt,
        x1=cols["x1"][sl],
        x2=cols["x2"][sl],
        y_r=y_r[sl],
        y_r_dot=y_rd[sl],
        y_r_ddot=y_rdd[sl],
        e=cols["e"][sl],
        s=cols["s"][sl],
        u_b=cols["u_b"][sl],
        threshold=cols["threshold"][sl],
        u=cols["u"][sl],
        overridden=ovr[sl].astype(bool),
        V1=cols["V1"][sl],
        V2=cols["V2"][sl],
        decrease_ok=dec[sl].astype(bool),
    )


def _fast_path(plant, base, cfg, dt, integrator, n):
    """Decide kernel eligibility; returns (fast, base_mode, ub_array, pid)."""
    pid = (0.0, 0.0, 0.0)
    if (
        integrator != "euler"
        or plant.kind != "linear"
        or cfg.model_f is not plant.drift
        or cfg.model_b != plant.gain_b
    ):
        return False, 0, np.empty(0), pid
    if isinstance(base, NoiseLaw):
        return True, _kernels.BASE_ARRAY, base.draw(n), pid
    if isinstance(base, ConstantLaw):
        return True, _kernels.BASE_ARRAY, np.full(n, base.c), pid
    if isinstance(base, ZeroLaw):
        return True, _kernels.BASE_ARRAY, np.zeros(n), pid
    if isinstance(base, PidLaw) and base.dt == dt and base._acc == 0.0:
        return True, _kernels.BASE_PID, np.empty(0), (base.kp, base.ki, base.kd)
    return False, 0, np.empty(0), pid


def _generic_loop(plant, base, cfg, dt, n, x0, integrator, y_r, y_rd, y_rdd, cols, ovr, dec):
    step_fn = euler_step if integrator == "euler" else rk4_step
    state = x0
    for i in range(n):
        ref = ReferenceSample(y_r[i], y_rd[i], y_rdd[i])
        e = ref.y_r - state.x1
        e_dot = ref.y_r_dot - state.x2
        u_b = base.sample(i * dt, e, e_dot)
        d = stabilize(state, ref, u_b, cfg)
        f = cfg.model_f(state.x1, state.x2)
        if cfg.variant == "V1":
            s = 0.0
            nx2 = state.x2 + (f + cfg.model_b * d.u) * dt
            ok = True if e == 0.0 else e * (ref.y_r_dot - nx2) <= DECREASE_TOL
        else:
            s = cfg.k * e + e_dot
            big_n = cfg.k * e_dot + ref.y_r_ddot - f
            ok = s * (big_n - cfg.model_b * d.u) <= DECREASE_TOL
        cols["x1"][i] = state.x1
        cols["x2"][i] = state.x2
        cols["e"][i] = e
        cols["s"][i] = s
        cols["u_b"][i] = u_b
        cols["threshold"][i] = d.threshold
        cols["u"][i] = d.u
        ovr[i] = 1 if d.overridden else 0
        cols["V1"][i] = 0.5 * e * e
        cols["V2"][i] = 0.5 * s * s
        dec[i] = 1 if ok else 0
        try:
            state = step_fn(state, d.u, plant, dt)
        except NonFiniteState:
            return i
    return -1


def compute_metrics(trace: Trace, t_settle: float) -> Metrics:
    """Summary metrics over one trace; errors are excluded before t_settle."""
    if len(trace) == 0:
        raise EmptyTrace("trace has no records")
    if t_settle >= trace.horizon:
        raise ValueError("t_settle must be less than the trace horizon")
    mask = trace.t >= t_settle
    if not mask.any():
        raise ValueError("no records at or after t_settle")
    u = trace.u
    chatter = float(np.abs(np.diff(u)).sum() / trace.horizon) if len(trace) > 1 else 0.0
    return Metrics(
        max_abs_e_after=float(np.abs(trace.e[mask]).max()),
        u_min=float(u.min()),
        u_max=float(u.max()),
        ub_min=float(trace.u_b.min()),
        ub_max=float(trace.u_b.max()),
        override_fraction=float(trace.overridden.mean()),
        decrease_violations=int((~trace.decrease_ok).sum()),
        chattering_index=chatter,
    )
