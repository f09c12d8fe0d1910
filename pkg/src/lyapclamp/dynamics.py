"""Second-order plant models and fixed-step integrators.

The plant family is

    x1' = x2
    x2' = f(x1, x2) + b * u
    y   = x1

with an arbitrary drift f and a scalar input gain b != 0.  The concrete
linear member used by the test presets has f = -a1*x1 - a2*x2.

The closed loop is advanced with explicit forward Euler under zero-order
hold: the clamp's per-step Lyapunov-decrease guarantee is exact in that
discretization.  An RK4 step is provided for sensitivity studies only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable


class NonFiniteState(RuntimeError):
    """The plant state left the finite floats (NaN or infinity)."""


@dataclass(frozen=True)
class State:
    """Plant state at one instant: position x1 and velocity x2."""

    x1: float
    x2: float

    def is_finite(self) -> bool:
        return math.isfinite(self.x1) and math.isfinite(self.x2)


@dataclass(frozen=True)
class PlantModel:
    """Drift function, input gain and named parameters of one plant.

    kind is "linear" for plants built by linear_plant(); the simulation
    harness uses it to route linear closed loops through the compiled
    kernel.
    """

    drift: Callable[[float, float], float]
    gain_b: float
    params: dict = field(default_factory=dict)
    kind: str = "custom"

    def __post_init__(self):
        if self.gain_b == 0.0:
            raise ValueError("plant gain b must be nonzero")


def linear_drift(x1: float, x2: float, a1: float, a2: float) -> float:
    """Drift of the linear plant: f = -a1*x1 - a2*x2."""
    return -a1 * x1 - a2 * x2


def linear_plant(a1: float, a2: float, b: float) -> PlantModel:
    """Build the linear second-order plant x2' = -a1*x1 - a2*x2 + b*u."""
    return PlantModel(
        drift=lambda x1, x2: -a1 * x1 - a2 * x2,
        gain_b=b,
        params={"a1": a1, "a2": a2},
        kind="linear",
    )


def plant_derivatives(state: State, u: float, model: PlantModel) -> tuple[float, float]:
    """(x1', x2') of the plant at `state` under control u."""
    return state.x2, model.drift(state.x1, state.x2) + model.gain_b * u


def euler_step(state: State, u: float, model: PlantModel, dt: float) -> State:
    """One explicit forward Euler step with u held constant over dt.

    Raises NonFiniteState if the result contains NaN or infinity.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    f = model.drift(state.x1, state.x2)
    nxt = State(state.x1 + state.x2 * dt, state.x2 + (f + model.gain_b * u) * dt)
    if not nxt.is_finite():
        raise NonFiniteState(f"non-finite state after Euler step: {nxt}")
    return nxt


def rk4_step(state: State, u: float, model: PlantModel, dt: float) -> State:
    """One classical RK4 step, u held constant (zero-order hold).

    Sensitivity-study integrator; the per-step decrease guarantee is
    stated for Euler and is not exact under RK4.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")

    def deriv(x1, x2):
        return x2, model.drift(x1, x2) + model.gain_b * u

    k1 = deriv(state.x1, state.x2)
    k2 = deriv(state.x1 + 0.5 * dt * k1[0], state.x2 + 0.5 * dt * k1[1])
    k3 = deriv(state.x1 + 0.5 * dt * k2[0], state.x2 + 0.5 * dt * k2[1])
    k4 = deriv(state.x1 + dt * k3[0], state.x2 + dt * k3[1])
    nxt = State(
        state.x1 + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        state.x2 + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    )
    if not nxt.is_finite():
        raise NonFiniteState(f"non-finite state after RK4 step: {nxt}")
    return nxt
