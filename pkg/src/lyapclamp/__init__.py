"""lyapclamp: Lyapunov clamp safety filters for second-order plants.

Wraps an arbitrary base control law (even pure noise) with a dynamically
computed threshold so the closed loop provably decreases a Lyapunov
function at every step and tracks a reference.
"""

__version__ = "0.1.0"

from .dynamics import (
    NonFiniteState,
    PlantModel,
    State,
    euler_step,
    linear_drift,
    linear_plant,
    plant_derivatives,
    rk4_step,
)
from .harness import (
    EmptyTrace,
    Metrics,
    StepRecord,
    Termination,
    Trace,
    compute_metrics,
    simulate,
)
from .signals import (
    ConstantLaw,
    NoiseLaw,
    PidLaw,
    ReferenceSample,
    Sinusoid,
    SplitMix64,
    Step,
    ZeroLaw,
    base_sample,
    reference_eval,
)
from .stabilizer import (
    ClampDecision,
    DegenerateGain,
    StabilizerConfig,
    clamp,
    stabilize,
    v1_threshold,
    v2_threshold,
)

__all__ = [
    "__version__",
    "ClampDecision",
    "ConstantLaw",
    "DegenerateGain",
    "EmptyTrace",
    "Metrics",
    "NoiseLaw",
    "NonFiniteState",
    "PidLaw",
    "PlantModel",
    "ReferenceSample",
    "Sinusoid",
    "SplitMix64",
    "StabilizerConfig",
    "State",
    "Step",
    "StepRecord",
    "Termination",
    "Trace",
    "ZeroLaw",
    "base_sample",
    "clamp",
    "compute_metrics",
    "euler_step",
    "linear_drift",
    "linear_plant",
    "plant_derivatives",
    "reference_eval",
    "rk4_step",
    "simulate",
    "stabilize",
    "v1_threshold",
    "v2_threshold",
]
