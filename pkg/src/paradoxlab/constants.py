"""Physical constants, injectable so any unit system can be used.

Defaults are natural units (hbar = c = mu = 1), which make every closed-form
prediction in the toolkit dimensionless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class PhysicalConstants:
    """Reduced Planck constant, speed of light, and magnetic moment."""

    hbar: float = 1.0
    c: float = 1.0
    mu: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "c", "mu"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be finite and positive, got {value}")

    @property
    def h(self) -> float:
        """Planck constant, 2*pi*hbar."""
        return 2.0 * math.pi * self.hbar


NATURAL = PhysicalConstants()
