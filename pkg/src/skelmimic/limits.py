"""Joint-range tables for the human demonstrator and the robot.

A limit table maps each derived angle to a (lower, upper) pair in degrees.
Human tables are conventional ranges of motion, so lower < upper always.
Robot tables follow the motor sign convention of the target platform and
several QTrobot joints run "backwards": lower is numerically greater than
upper (the left elbow travels from -8 to -80 degrees, for instance). The
range-mapping code treats inverted pairs literally -- the affine scale is
simply negative -- so tables are stored exactly as configured, never
normalized.

Actual robot limits can deviate from the vendor values, so tables are
runtime configuration; the constants below are shipped defaults.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .joints import AngleJointId

VALID_SIDES = ("human", "robot")


class LimitTableMismatchError(KeyError):
    """A joint is missing from a limit table."""

    def __init__(self, joint: AngleJointId, side: str):
        self.joint = joint
        self.side = side
        super().__init__(f"joint {joint.name} missing from {side} limit table")


@dataclass(frozen=True)
class JointLimitTable:
    """Per-joint (lower, upper) bounds in degrees for one embodiment.

    ``side="human"`` requires lower < upper for every joint. ``side="robot"``
    only requires lower != upper; inverted pairs (lower > upper) are
    permitted and preserved.
    """

    side: str
    bounds: Mapping[AngleJointId, tuple[float, float]] = field(repr=False)

    def __post_init__(self):
        if self.side not in VALID_SIDES:
            raise ValueError(f"side must be one of {VALID_SIDES}, got {self.side!r}")
        clean: dict[AngleJointId, tuple[float, float]] = {}
        for joint, (lo, hi) in self.bounds.items():
            joint = AngleJointId(joint)
            lo, hi = float(lo), float(hi)
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise ValueError(f"{joint.name}: limits must be finite, got ({lo}, {hi})")
            if self.side == "human" and not lo < hi:
                raise ValueError(f"{joint.name}: human limits need lower < upper, got ({lo}, {hi})")
            if self.side == "robot" and lo == hi:
                raise ValueError(f"{joint.name}: robot limits need lower != upper, got ({lo}, {hi})")
            clean[joint] = (lo, hi)
        object.__setattr__(self, "bounds", clean)

    def _pair(self, joint: AngleJointId) -> tuple[float, float]:
        try:
            return self.bounds[AngleJointId(joint)]
        except KeyError:
            raise LimitTableMismatchError(AngleJointId(joint), self.side) from None

    def lower(self, joint: AngleJointId) -> float:
        return self._pair(joint)[0]

    def upper(self, joint: AngleJointId) -> float:
        return self._pair(joint)[1]

    def interval(self, joint: AngleJointId) -> tuple[float, float]:
        """Orientation-normalized (min, max) interval for containment checks."""
        lo, hi = self._pair(joint)
        return (lo, hi) if lo <= hi else (hi, lo)

    def clamp(self, joint: AngleJointId, value: float) -> float:
        lo, hi = self.interval(joint)
        return min(max(float(value), lo), hi)

    def contains(self, joint: AngleJointId, value: float) -> bool:
        lo, hi = self.interval(joint)
        return lo <= value <= hi

    @property
    def joints(self) -> tuple[AngleJointId, ...]:
        return tuple(self.bounds.keys())

    def to_dict(self) -> dict[str, list[float]]:
        return {j.name: [lo, hi] for j, (lo, hi) in self.bounds.items()}

    @classmethod
    def from_dict(cls, side: str, data: Mapping[str, object]) -> "JointLimitTable":
        bounds = {}
        for name, pair in data.items():
            try:
                joint = AngleJointId[name]
            except KeyError:
                raise ValueError(f"unknown angle name {name!r} in {side} limit table") from None
            lo, hi = pair  # type: ignore[misc]
            bounds[joint] = (float(lo), float(hi))
        return cls(side=side, bounds=bounds)


# Shipped default tables (degrees).
HUMAN_LIMITS = JointLimitTable(
    side="human",
    bounds={
        AngleJointId.RE: (4.3, 142.6),
        AngleJointId.RSR: (0.0, 179.7),
        AngleJointId.RSP: (-66.5, 176.4),
        AngleJointId.HP: (-70.0, 85.0),
        AngleJointId.LSR: (0.0, 179.7),
        AngleJointId.LSP: (-66.5, 176.4),
        AngleJointId.LE: (4.3, 142.6),
    },
)

QTROBOT_LIMITS = JointLimitTable(
    side="robot",
    bounds={
        AngleJointId.RE: (-8.3, -77.2),
        AngleJointId.RSR: (-20.0, -80.0),
        AngleJointId.RSP: (140.0, -140.0),
        AngleJointId.HP: (-15.3, 21.1),
        AngleJointId.LSR: (-21.1, -81.1),
        AngleJointId.LSP: (-140.0, 140.0),
        AngleJointId.LE: (-8.0, -80.0),
    },
)
