"""Lyapunov clamp: dynamic threshold plus max/min override of a base law.

Two variants, each built on a Lyapunov function of the tracking error
e = y_r - x1:

  V1 = e^2 / 2.  The threshold is the unique control making the predicted
  one-step Euler value of (y_r_dot - x2) vanish:

      threshold = (y_r_dot - x2 - f(x1, x2) * dt) / (b * dt)

  with dt the control period (the discrete analogue of the mean-value
  window), so the per-step decrease e * (y_r_dot - x2_next) <= 0 is exact
  under Euler integration with zero-order hold.

  V2 = s^2 / 2 with the sliding surface s = k*e + e_dot.  The threshold is

      threshold = (k * e_dot + y_r_ddot - f(x1, x2)) / b

  the control at which s_dot changes sign, giving s * (N - b*u) <= 0 where
  N = b * threshold.

The clamp itself: if the sign driver (e for V1, s for V2) is positive the
control is max(threshold, u_b); if negative, min(threshold, u_b); at an
exact zero the base law passes through unchanged.  The V1 composition has
two documented refinements built on the one-step predicted error
e_pred = e + (y_r_dot - x2) * dt:

  * e = 0 exactly: e_pred breaks the tie, so a run starting exactly on
    the reference does not dead-start.
  * sign(e_pred) opposite to sign(e): the error crosses zero within this
    step, and no max/min of u_b can keep the decrease condition on both
    sides; the control is pinned to the threshold, which zeroes the
    predicted error rate (product e * (y_r_dot - x2_next) = 0) and stops
    the overshoot at one step's worth of error velocity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .dynamics import State
from .signals import ReferenceSample


class DegenerateGain(ValueError):
    """The threshold denominator (b*dt for V1, b for V2) is zero."""


@dataclass(frozen=True)
class StabilizerConfig:
    """Clamp variant, gains, control period and the controller's plant model.

    The model (model_f, model_b) is the true plant here: mismatch
    robustness is out of scope.  dt must equal the simulation step.
    """

    variant: str  # "V1" | "V2"
    dt: float
    model_f: Callable[[float, float], float]
    model_b: float
    k: float = 5.0  # surface gain, V2 only

    def __post_init__(self):
        if self.variant not in ("V1", "V2"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        if self.variant == "V2" and self.k <= 0.0:
            raise ValueError("V2 requires surface gain k > 0")


@dataclass(frozen=True)
class ClampDecision:
    """Outcome of one clamp evaluation."""

    threshold: float
    sign_driver: float
    u: float
    overridden: bool


def v1_threshold(state: State, ref: ReferenceSample, cfg: StabilizerConfig) -> float:
    """Control at which the predicted next-step error rate is exactly zero."""
    if cfg.model_b * cfg.dt == 0.0:
        raise DegenerateGain("b * dt is zero")
    f = cfg.model_f(state.x1, state.x2)
    return (ref.y_r_dot - state.x2 - f * cfg.dt) / (cfg.model_b * cfg.dt)


def v2_threshold(
    state: State, ref: ReferenceSample, cfg: StabilizerConfig
) -> tuple[float, float]:
    """(threshold, s) for the sliding-surface variant."""
    if cfg.model_b == 0.0:
        raise DegenerateGain("b is zero")
    e = ref.y_r - state.x1
    e_dot = ref.y_r_dot - state.x2
    s = cfg.k * e + e_dot
    f = cfg.model_f(state.x1, state.x2)
    return (cfg.k * e_dot + ref.y_r_ddot - f) / cfg.model_b, s


def clamp(u_b: float, threshold: float, sign_driver: float) -> ClampDecision:
    """Override u_b with the threshold when the sign driver demands it."""
    if sign_driver > 0.0:
        u = threshold if threshold > u_b else u_b
    elif sign_driver < 0.0:
        u = threshold if threshold < u_b else u_b
    else:
        u = u_b
    return ClampDecision(threshold, sign_driver, u, u != u_b)


def stabilize(
    state: State, ref: ReferenceSample, u_b: float, cfg: StabilizerConfig
) -> ClampDecision:
    """Compose the variant's threshold with the clamp."""
    if cfg.variant == "V1":
        thr = v1_threshold(state, ref, cfg)
        e = ref.y_r - state.x1
        e_pred = e + (ref.y_r_dot - state.x2) * cfg.dt
        if e == 0.0:
            # tie-break: sign of the one-step predicted error
            return clamp(u_b, thr, e_pred)
        if (e > 0.0) != (e_pred > 0.0) and e_pred != 0.0:
            # zero crossing within the step: pin to the threshold
            return ClampDecision(thr, e_pred, thr, thr != u_b)
        return clamp(u_b, thr, e)
    thr, s = v2_threshold(state, ref, cfg)
    return clamp(u_b, thr, s)
