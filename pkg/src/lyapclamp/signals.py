"""Reference trajectories and base control laws.

References carry analytic first and second derivatives so the clamp never
needs numerical differentiation.  Base laws are the signals being
stabilized: seeded uniform noise (the stress case), a constant, zero, or a
textbook PID.

Noise uses splitmix64 so that traces are reproducible bit-for-bit across
platforms from a single integer seed.  Draws map to floats by scaling the
top 53 bits of each output word.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """Deterministic 64-bit PRNG (splitmix64)."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def uniform(self, lo: float, hi: float) -> float:
        """Uniform draw on [lo, hi) via 53-bit mantissa scaling."""
        return lo + (hi - lo) * ((self.next_u64() >> 11) * 2.0 ** -53)


@dataclass(frozen=True)
class ReferenceSample:
    """Desired output and its first two derivatives at one instant."""

    y_r: float
    y_r_dot: float
    y_r_ddot: float


@dataclass(frozen=True)
class Sinusoid:
    """y_r(t) = amplitude * sin(omega * t)."""

    amplitude: float = 1.0
    omega: float = 1.0

    def eval(self, t: float) -> ReferenceSample:
        a, w = self.amplitude, self.omega
        return ReferenceSample(
            a * math.sin(w * t),
            a * w * math.cos(w * t),
            -a * w * w * math.sin(w * t),
        )


@dataclass(frozen=True)
class Step:
    """y_r(t) = level for all t >= 0; derivatives defined as 0 everywhere."""

    level: float = 1.0

    def eval(self, t: float) -> ReferenceSample:
        return ReferenceSample(self.level, 0.0, 0.0)


def reference_eval(kind, t: float) -> ReferenceSample:
    """Sample a reference (Sinusoid or Step) at time t >= 0."""
    return kind.eval(t)


class ZeroLaw:
    """u_b = 0."""

    def sample(self, t: float, e: float, e_dot: float) -> float:
        return 0.0


class ConstantLaw:
    """u_b = c."""

    def __init__(self, c: float):
        self.c = float(c)

    def sample(self, t: float, e: float, e_dot: float) -> float:
        return self.c


class NoiseLaw:
    """Seeded uniform noise on [lo, hi], one draw per control step.

    The sequence is fully determined by the seed; the sample is held
    constant over the step by the harness (zero-order hold).
    """

    def __init__(self, lo: float, hi: float, seed: int):
        if not lo < hi:
            raise ValueError("noise range requires lo < hi")
        self.lo = float(lo)
        self.hi = float(hi)
        self.seed = int(seed)
        self._rng = SplitMix64(seed)

    def sample(self, t: float, e: float, e_dot: float) -> float:
        return self._rng.uniform(self.lo, self.hi)

    def draw(self, n: int):
        """Consume and return the next n draws as a float64 array."""
        import numpy as np

        out = np.empty(n, dtype=np.float64)
        for i in range(n):
            out[i] = self._rng.uniform(self.lo, self.hi)
        return out


class PidLaw:
    """u_b = kp*e + ki*int(e dt) + kd*e_dot, rectangle-rule integral."""

    def __init__(self, kp: float, ki: float, kd: float, dt: float):
        if dt <= 0.0:
            raise ValueError("pid dt must be positive")
        self.kp = float(kp)
        self.ki = float(ki)
        self.kd = float(kd)
        self.dt = float(dt)
        self._acc = 0.0

    def sample(self, t: float, e: float, e_dot: float) -> float:
        self._acc += e * self.dt
        if not math.isfinite(self._acc):
            raise ValueError("pid integral accumulator is non-finite")
        return self.kp * e + self.ki * self._acc + self.kd * e_dot


def base_sample(law, t: float, e: float = 0.0, e_dot: float = 0.0) -> float:
    """Draw the next base-control sample, advancing the law's state."""
    return law.sample(t, e, e_dot)
