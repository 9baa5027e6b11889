"""Closed-form uncertainty bounds: field-measurement floor and energy-time product."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import NATURAL, PhysicalConstants
from .errors import DomainError


@dataclass(frozen=True)
class UncertaintyReport:
    """Energy-time product against the hbar/2 threshold."""

    delta_e: float
    delta_t: float
    product: float
    threshold: float
    satisfied: bool

    @property
    def apparent_violation(self) -> bool:
        return not self.satisfied


def landau_peierls_min(T: float, k: PhysicalConstants = NATURAL) -> float:
    """Minimum uncertainty of a field-magnitude measurement lasting time T.

    sqrt(hbar*c) / (c*T)**2, implemented verbatim; the unit convention for
    the field is whatever the injected constants imply.
    """
    if not (math.isfinite(T) and T > 0):
        raise DomainError(f"measurement duration must be positive, got {T}")
    return math.sqrt(k.hbar * k.c) / (k.c * T) ** 2


def energy_time_product(
    delta_e: float, delta_t: float, k: PhysicalConstants = NATURAL
) -> UncertaintyReport:
    """Evaluate delta_e * delta_t against the hbar/2 threshold."""
    if delta_e < 0 or delta_t < 0:
        raise DomainError(f"uncertainties must be nonnegative, got ({delta_e}, {delta_t})")
    if not (math.isfinite(delta_e) and math.isfinite(delta_t)):
        raise DomainError("uncertainties must be finite")
    product = delta_e * delta_t
    threshold = k.hbar / 2.0
    return UncertaintyReport(
        delta_e=delta_e,
        delta_t=delta_t,
        product=product,
        threshold=threshold,
        satisfied=product >= threshold - 1e-15,
    )
