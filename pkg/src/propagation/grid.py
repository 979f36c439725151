"""Uniform time discretization shared by the propagators and the path sampler."""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from src.utils.errors import ValidationError


@dataclass(frozen=True)
class TimeGrid:
    """``steps`` uniform intervals on ``[t0, tf]`` (µs).

    ``steps == 0`` is accepted only for an empty interval, where every
    propagator returns the identity.
    """

    t0: float
    tf: float
    steps: int

    def __post_init__(self) -> None:
        if not (np.isfinite(self.t0) and np.isfinite(self.tf)):
            raise ValidationError(f"Grid bounds must be finite, got [{self.t0}, {self.tf}]")
        if self.tf < self.t0:
            raise ValidationError(f"Grid end {self.tf} precedes start {self.t0}")
        if self.steps == 0 and self.tf == self.t0:
            return
        if self.steps < 2:
            raise ValidationError(f"Grid needs at least 2 steps, got {self.steps}")
        if self.tf == self.t0:
            raise ValidationError("A zero-length grid must have steps = 0")

    @property
    def dt(self) -> float:
        return 0.0 if self.steps == 0 else (self.tf - self.t0) / self.steps

    @cached_property
    def times(self) -> np.ndarray:
        if self.steps == 0:
            return np.array([self.t0])
        return np.linspace(self.t0, self.tf, self.steps + 1)

    @cached_property
    def midpoints(self) -> np.ndarray:
        return self.t0 + (np.arange(self.steps) + 0.5) * self.dt

    def refined(self, factor: int) -> "TimeGrid":
        return TimeGrid(self.t0, self.tf, self.steps * factor)

    def as_dict(self) -> dict[str, float | int]:
        return {"t0_us": self.t0, "tf_us": self.tf, "steps": self.steps, "dt_us": self.dt}
