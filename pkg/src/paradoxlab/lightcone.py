"""Special-relativistic geometry of collapse in 1+1 dimensions.

Interval classification, past-lightcone membership (boundary inclusive),
the collapse-allowed intersection region of two measurement events, and
Lorentz boosts showing that spacelike-separated measurements have
frame-dependent ordering while timelike pairs never reorder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .constants import NATURAL, PhysicalConstants
from .errors import BoostError, DomainError

A_FIRST = "a_first"
B_FIRST = "b_first"
SIMULTANEOUS = "simultaneous"


@dataclass(frozen=True)
class Event:
    """Spacetime point (t, x)."""

    t: float
    x: float

    def __post_init__(self):
        if not (math.isfinite(self.t) and math.isfinite(self.x)):
            raise DomainError(f"event coordinates must be finite, got ({self.t}, {self.x})")


class Boost:
    """Velocity boost with its Lorentz factor."""

    def __init__(self, v: float, k: PhysicalConstants = NATURAL):
        beta = v / k.c
        if not math.isfinite(beta) or abs(beta) >= 1.0 - 1e-12:
            raise BoostError(f"|v| must stay below c, got v = {v}")
        self.v = float(v)
        self.gamma = 1.0 / math.sqrt(1.0 - beta * beta)

    def __repr__(self) -> str:
        return f"Boost(v={self.v}, gamma={self.gamma})"


def interval(
    e1: Event, e2: Event, k: PhysicalConstants = NATURAL
) -> tuple[float, str]:
    """Invariant interval c^2*dt^2 - dx^2 and its causal kind."""
    dt = e2.t - e1.t
    dx = e2.x - e1.x
    ct2 = (k.c * dt) ** 2
    dx2 = dx**2
    s2 = ct2 - dx2
    if abs(s2) <= 1e-12 * max(ct2, dx2):
        kind = "lightlike"
    elif s2 > 0:
        kind = "timelike"
    else:
        kind = "spacelike"
    return s2, kind


def in_past_cone(p: Event, apex: Event, k: PhysicalConstants = NATURAL) -> bool:
    """Closed past lightcone: p can causally influence the apex."""
    return p.t <= apex.t and abs(p.x - apex.x) <= k.c * (apex.t - p.t)


def collapse_allowed(
    p: Event, a: Event, b: Event, k: PhysicalConstants = NATURAL
) -> bool:
    """Inside the intersection of the past cones of both measurement events."""
    return in_past_cone(p, a, k) and in_past_cone(p, b, k)


def boost(e: Event, frame: Boost, k: PhysicalConstants = NATURAL) -> Event:
    """Lorentz transform into a frame moving at frame.v."""
    t_prime = frame.gamma * (e.t - frame.v * e.x / k.c**2)
    x_prime = frame.gamma * (e.x - frame.v * e.t)
    return Event(t_prime, x_prime)


@dataclass(frozen=True)
class FrameOrdering:
    velocity: float
    t_a: float
    t_b: float
    order: str


@dataclass(frozen=True)
class OrderingReport:
    interval_s2: float
    interval_kind: str
    orderings: tuple[FrameOrdering, ...]
    admits_reversal: bool


def ordering_report(
    a: Event,
    b: Event,
    velocities: Sequence[float],
    k: PhysicalConstants = NATURAL,
) -> OrderingReport:
    """Time ordering of two events across a family of inertial frames.

    The interval kind is frame invariant; spacelike pairs can show either
    ordering depending on the frame, timelike pairs cannot.
    """
    s2, kind = interval(a, b, k)
    orderings = []
    seen = set()
    for v in velocities:
        frame = Boost(v, k)
        t_a = boost(a, frame, k).t
        t_b = boost(b, frame, k).t
        if t_a < t_b:
            order = A_FIRST
        elif t_b < t_a:
            order = B_FIRST
        else:
            order = SIMULTANEOUS
        seen.add(order)
        orderings.append(FrameOrdering(velocity=float(v), t_a=t_a, t_b=t_b, order=order))
    return OrderingReport(
        interval_s2=s2,
        interval_kind=kind,
        orderings=tuple(orderings),
        admits_reversal=A_FIRST in seen and B_FIRST in seen,
    )
