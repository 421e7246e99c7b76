"""Human-to-robot joint range mapping, forward kinematics and a self-collision guard.

The retargeting step is a per-joint affine map between limit tables: the
human joint range [lo_h, hi_h] is mapped onto the robot range [lo_r, hi_r]
so that the limits correspond exactly. Inverted robot ranges (lo_r > hi_r,
a motor sign convention) just produce a negative scale; nothing is
normalized.

The kinematic model used by the collision guard is a deliberately simple
frozen convention (the platform vendor publishes no reference chain):

* model frame: x points down (the arms' rest direction), y is lateral,
  z completes the right-handed frame; the torso center is the origin.
* shoulders sit at (0, -shoulder_offset, 0) (right) and
  (0, +shoulder_offset, 0) (left).
* shoulder pitch rotates the upper arm in the xz-plane (positive pitch
  swings it toward +z), shoulder roll then lifts it in the xy-plane
  (negative roll values lift outward on both sides, matching the motor
  sign convention of the default limit tables), and the elbow bends the
  forearm about the arm's local y-axis (negative elbow values bend
  toward +z at rest).

The head+torso volume is approximated by an axis-aligned box. When a wrist
lands strictly inside the box, the guard re-solves that arm's elbow angle
(1-D search, 0.1 degree resolution, all other joints held fixed) to push
the wrist to the closest clearing configuration at or beyond the box
surface.

All functions are pure; tables and models are immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .joints import AngleJointId, N_ANGLES
from .limits import HUMAN_LIMITS, JointLimitTable, LimitTableMismatchError, QTROBOT_LIMITS
from .skeleton import AngleTrajectory

__all__ = [
    "RobotModel",
    "QTROBOT_MODEL",
    "GuardResult",
    "UnresolvableCollisionError",
    "map_angle",
    "map_trajectory",
    "forward_kinematics",
    "self_collision_guard",
    "LimitTableMismatchError",
]


class UnresolvableCollisionError(ValueError):
    """No elbow angle within limits moves the wrist out of the body volume."""


@dataclass(frozen=True)
class RobotModel:
    """Robot geometry and limits used for retargeting and the collision guard.

    ``body_center``/``body_half_extents`` define the axis-aligned box
    approximating head+torso, in the model frame described in the module
    docstring. Lengths are meters.
    """

    name: str
    limits: JointLimitTable
    upper_arm_m: float = 0.12
    forearm_m: float = 0.16
    shoulder_offset_m: float = 0.15
    body_center: tuple[float, float, float] = (0.0, 0.0, 0.0)
    body_half_extents: tuple[float, float, float] = (0.22, 0.11, 0.08)

    def __post_init__(self):
        if self.limits.side != "robot":
            raise ValueError("RobotModel.limits must be a robot-side table")
        for label, value in (
            ("upper_arm_m", self.upper_arm_m),
            ("forearm_m", self.forearm_m),
            ("shoulder_offset_m", self.shoulder_offset_m),
        ):
            if not value > 0:
                raise ValueError(f"{label} must be > 0, got {value}")
        half = tuple(float(v) for v in self.body_half_extents)
        if any(v <= 0 for v in half):
            raise ValueError(f"body half-extents must be > 0, got {half}")
        object.__setattr__(self, "body_center", tuple(float(v) for v in self.body_center))
        object.__setattr__(self, "body_half_extents", half)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "limits": self.limits.to_dict(),
            "link_lengths": {
                "upper_arm": self.upper_arm_m,
                "forearm": self.forearm_m,
                "shoulder_offset": self.shoulder_offset_m,
            },
            "body_volume": {
                "center": list(self.body_center),
                "half_extents": list(self.body_half_extents),
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RobotModel":
        lengths = data.get("link_lengths", {})
        volume = data.get("body_volume", {})
        kwargs = {}
        if "upper_arm" in lengths:
            kwargs["upper_arm_m"] = float(lengths["upper_arm"])
        if "forearm" in lengths:
            kwargs["forearm_m"] = float(lengths["forearm"])
        if "shoulder_offset" in lengths:
            kwargs["shoulder_offset_m"] = float(lengths["shoulder_offset"])
        if "center" in volume:
            kwargs["body_center"] = tuple(float(v) for v in volume["center"])
        if "half_extents" in volume:
            kwargs["body_half_extents"] = tuple(float(v) for v in volume["half_extents"])
        return cls(
            name=str(data.get("name", "robot")),
            limits=JointLimitTable.from_dict("robot", data["limits"]),
            **kwargs,
        )


QTROBOT_MODEL = RobotModel(name="qtrobot", limits=QTROBOT_LIMITS)


def map_angle(
    theta_h: float,
    joint: AngleJointId,
    human: JointLimitTable = HUMAN_LIMITS,
    robot: JointLimitTable = QTROBOT_LIMITS,
) -> float:
    """Affinely map one human angle into the robot's range for that joint.

    Exact endpoint correspondence: human lower maps to robot lower, human
    upper to robot upper, also for inverted robot ranges. Callers clamp
    ``theta_h`` into the human range first (extraction already does).
    """
    lo_h, hi_h = human.bounds.get(joint, (None, None))
    if lo_h is None:
        raise LimitTableMismatchError(joint, human.side)
    lo_r, hi_r = robot.bounds.get(joint, (None, None))
    if lo_r is None:
        raise LimitTableMismatchError(joint, robot.side)
    return lo_r + (hi_r - lo_r) / (hi_h - lo_h) * (float(theta_h) - lo_h)


def map_trajectory(
    traj: AngleTrajectory,
    human: JointLimitTable = HUMAN_LIMITS,
    robot: JointLimitTable = QTROBOT_LIMITS,
) -> AngleTrajectory:
    """Map a human-side trajectory into robot ranges, row by row."""
    if traj.side != "human":
        raise ValueError(f"map_trajectory needs a human-side trajectory, got side={traj.side!r}")
    out = np.empty_like(traj.angles)
    for joint in AngleJointId:
        lo_h, hi_h = human.bounds.get(joint, (None, None))
        if lo_h is None:
            raise LimitTableMismatchError(joint, human.side)
        lo_r, hi_r = robot.bounds.get(joint, (None, None))
        if lo_r is None:
            raise LimitTableMismatchError(joint, robot.side)
        out[joint] = lo_r + (hi_r - lo_r) / (hi_h - lo_h) * (traj.angles[joint] - lo_h)
    return AngleTrajectory(
        side="robot",
        angles=out,
        action_label=traj.action_label,
        frame_times=traj.frame_times,
        dropped_frames=traj.dropped_frames,
    )


def _rot_y(deg: float) -> np.ndarray:
    a = np.radians(deg)
    c, s = np.cos(a), np.sin(a)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def _rot_z(deg: float) -> np.ndarray:
    a = np.radians(deg)
    c, s = np.cos(a), np.sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


_X = np.array([1.0, 0.0, 0.0])

# (roll sign, pitch row, roll row, elbow row, lateral sign) per arm.
_ARMS = {
    "right": (+1.0, AngleJointId.RSP, AngleJointId.RSR, AngleJointId.RE, -1.0),
    "left": (-1.0, AngleJointId.LSP, AngleJointId.LSR, AngleJointId.LE, +1.0),
}


def _wrist_position(theta_r: np.ndarray, model: RobotModel, arm: str) -> np.ndarray:
    roll_sign, pitch_row, roll_row, elbow_row, lateral = _ARMS[arm]
    shoulder = np.array([0.0, lateral * model.shoulder_offset_m, 0.0])
    rot = _rot_z(roll_sign * theta_r[roll_row]) @ _rot_y(-theta_r[pitch_row])
    elbow = shoulder + model.upper_arm_m * (rot @ _X)
    forearm_dir = rot @ _rot_y(theta_r[elbow_row]) @ _X
    return elbow + model.forearm_m * forearm_dir


def forward_kinematics(theta_r, model: RobotModel = QTROBOT_MODEL) -> dict[str, np.ndarray]:
    """Wrist positions (meters, model frame) for a 7-vector of robot angles.

    Uses the frozen serial-chain convention from the module docstring.
    Head pitch does not influence the wrists. Total on any finite input;
    callers keep angles within robot limits.
    """
    theta_r = np.asarray(theta_r, dtype=float)
    if theta_r.shape != (N_ANGLES,):
        raise ValueError(f"theta_r must have shape ({N_ANGLES},), got {theta_r.shape}")
    return {
        "right_wrist": _wrist_position(theta_r, model, "right"),
        "left_wrist": _wrist_position(theta_r, model, "left"),
    }


def _strictly_inside_box(point: np.ndarray, model: RobotModel) -> bool:
    rel = np.abs(point - np.asarray(model.body_center))
    return bool(np.all(rel < np.asarray(model.body_half_extents)))


def closest_box_surface_point(point, model: RobotModel) -> np.ndarray:
    """Closest point on the body-box surface to ``point`` (inside or outside)."""
    center = np.asarray(model.body_center)
    half = np.asarray(model.body_half_extents)
    rel = np.asarray(point, dtype=float) - center
    clipped = np.clip(rel, -half, half)
    if np.any(clipped != rel):
        return center + clipped
    # Inside: push the coordinate with the smallest margin to its face.
    margins = half - np.abs(rel)
    axis = int(np.argmin(margins))
    out = rel.copy()
    out[axis] = half[axis] if rel[axis] >= 0 else -half[axis]
    return center + out


class GuardResult(NamedTuple):
    safe: np.ndarray
    adjusted: bool


def _resolve_elbow(theta: np.ndarray, model: RobotModel, arm: str) -> float:
    """Nearest elbow angle (0.1 deg resolution) whose wrist clears the box."""
    _, _, _, elbow_row, _ = _ARMS[arm]
    lo, hi = model.limits.interval(elbow_row)
    current = float(theta[elbow_row])

    def clears(angle: float) -> bool:
        trial = theta.copy()
        trial[elbow_row] = angle
        return not _strictly_inside_box(_wrist_position(trial, model, arm), model)

    best: float | None = None
    coarse = 1.0
    for direction in (+1.0, -1.0):
        limit = hi if direction > 0 else lo
        inside_end = current
        found = None
        steps = int(np.ceil(abs(limit - current) / coarse)) + 1
        for k in range(1, steps + 1):
            candidate = current + direction * k * coarse
            candidate = min(max(candidate, lo), hi)
            if clears(candidate):
                found = candidate
                break
            inside_end = candidate
            if candidate == limit:
                break
        if found is None:
            continue
        # Bisect between the last blocked angle and the first clear one
        # down to 0.1 degree, keeping the clear end.
        a, b = inside_end, found
        while abs(b - a) > 0.1:
            mid = 0.5 * (a + b)
            if clears(mid):
                b = mid
            else:
                a = mid
        if best is None or abs(b - current) < abs(best - current):
            best = b
    if best is None:
        raise UnresolvableCollisionError(
            f"{arm} wrist cannot clear the body volume within elbow limits [{lo}, {hi}]"
        )
    return best


def self_collision_guard(theta_r, model: RobotModel = QTROBOT_MODEL) -> GuardResult:
    """Keep wrists out of the body box by re-solving elbow angles.

    Returns the input unchanged (``adjusted=False``) when both wrists are
    already outside the box. Otherwise the offending arm's elbow is moved
    to the nearest in-limits angle that places the wrist at or beyond the
    box surface (``adjusted=True``). Raises
    :class:`UnresolvableCollisionError` when no such angle exists: the
    pose must be rejected upstream.

    Never returns a configuration whose wrist is strictly inside the box,
    and is idempotent: guarding a guarded pose changes nothing.
    """
    theta = np.asarray(theta_r, dtype=float).copy()
    if theta.shape != (N_ANGLES,):
        raise ValueError(f"theta_r must have shape ({N_ANGLES},), got {theta.shape}")
    adjusted = False
    for arm in ("right", "left"):
        wrist = _wrist_position(theta, model, arm)
        if not _strictly_inside_box(wrist, model):
            continue
        elbow_row = _ARMS[arm][3]
        theta[elbow_row] = _resolve_elbow(theta, model, arm)
        adjusted = True
    return GuardResult(safe=theta, adjusted=adjusted)
