"""Records of homotopy steps applied by the removal pipeline.

Kept separate so both the map layer (general position) and the removal
layer can produce them without an import cycle.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction


class StepKind(Enum):
    GENERAL_POSITION = "GeneralPosition"
    PUSH_OFF = "PushOff"
    NORMAL_FORM = "NormalForm"
    FORK_MANEUVER = "ForkManeuver"
    CONSTANT_DEFORMATION = "ConstantDeformation"
    # Equal-degree circle pairs are handled by straightening both maps and
    # rotating one; that deformation fits none of the kinds above and the
    # log must report it distinctly.
    CIRCLE_ROTATION = "CircleRotation"


@dataclass(frozen=True)
class LocalWindow:
    """Parameter window (t0 - radius, t0 + radius) on one domain edge."""

    edge: str
    center: Fraction
    radius: Fraction

    @property
    def lo(self) -> Fraction:
        return self.center - self.radius

    @property
    def hi(self) -> Fraction:
        return self.center + self.radius


@dataclass(frozen=True)
class TrackFragment:
    """A run of segments of one map's track on one domain edge window."""

    map_label: str  # "f" or "g"
    edge: str
    lo: Fraction
    hi: Fraction
    segments: tuple  # tuple[TrackSegment, ...]; typed loosely to avoid a cycle


@dataclass(frozen=True)
class HomotopyStep:
    kind: StepKind
    maps_changed: str  # "f", "g", or "both"
    windows: tuple[tuple[str, Fraction, Fraction], ...]  # (edge, lo, hi)
    replaced: tuple[TrackFragment, ...] = ()
    replacement: tuple[TrackFragment, ...] = ()
    note: str = ""
