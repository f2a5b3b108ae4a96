"""
Inertia Schedules
=================

Fixed w, a linear AdaptiveW schedule between w_max and w_min, and the
constriction factor derived from phi = c1 + c2 > 4.
"""
import math
from dataclasses import dataclass

from errors import ConfigError


@dataclass(frozen=True)
class FixedInertia:
    w: float

    constricted = False

    def weight(self, t: int, t_max: int) -> float:
        return self.w


@dataclass(frozen=True)
class AdaptiveInertia:
    """`decreasing`: w_max -> w_min over the run. `increasing`: (w_max - w_min) * t / t_max."""

    w_max: float = 1.4
    w_min: float = 0.4
    form: str = "decreasing"

    constricted = False

    def __post_init__(self):
        if self.form not in ("decreasing", "increasing"):
            raise ConfigError(f"unknown AdaptiveW form {self.form!r}")

    def weight(self, t: int, t_max: int) -> float:
        if not 0 <= t <= t_max:
            raise ConfigError(f"cycle {t} outside [0, {t_max}]")
        span = (self.w_max - self.w_min) * t / t_max
        if self.form == "increasing":
            return span
        return self.w_max - span


@dataclass(frozen=True)
class ConstrictionInertia:
    phi: float = 4.1

    constricted = True

    def __post_init__(self):
        _check_phi(self.phi)

    def weight(self, t: int, t_max: int) -> float:
        return constriction_factor(self.phi)


def _check_phi(phi):
    if not phi > 4:
        raise ConfigError(f"constriction needs phi = c1 + c2 > 4, got {phi}")


def constriction_factor(phi: float) -> float:
    _check_phi(phi)
    return 2.0 / abs(2.0 - phi - math.sqrt(phi * phi - 4.0 * phi))


def inertia_weight(schedule, t: int, t_max: int) -> float:
    return schedule.weight(t, t_max)
