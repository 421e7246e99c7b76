"""Joint naming and indexing for the tracked upper-body skeleton.

Nine upper-body joints are tracked. Their indices are 1-based and frozen
so that the vector between joints i and j can be written ``link(frame, i, j)``
consistently across the code base. Seven joint angles are derived from
those links, one per controllable robot joint; their order is fixed and
is the row order of every angle matrix in this package.
"""

from __future__ import annotations

from enum import IntEnum


class JointId(IntEnum):
    """Tracked skeleton joints (1-based, stable indices)."""

    RIGHT_WRIST = 1
    RIGHT_ELBOW = 2
    RIGHT_SHOULDER = 3
    COLLAR = 4
    NECK = 5
    HEAD = 6
    LEFT_SHOULDER = 7
    LEFT_ELBOW = 8
    LEFT_WRIST = 9

    @property
    def key(self) -> str:
        """Lower-case name used in recording files, e.g. ``"right_wrist"``."""
        return self.name.lower()


class AngleJointId(IntEnum):
    """Derived joint angles, in fixed matrix-row order.

    RE/LE are elbow bend angles, RSR/LSR shoulder roll, RSP/LSP shoulder
    pitch and HP head pitch. The integer value is the row index of the
    angle in a 7xT trajectory matrix.
    """

    RE = 0
    RSR = 1
    RSP = 2
    HP = 3
    LSR = 4
    LSP = 5
    LE = 6


N_JOINTS = len(JointId)
N_ANGLES = len(AngleJointId)

JOINT_KEYS = tuple(j.key for j in JointId)
ANGLE_NAMES = tuple(a.name for a in AngleJointId)

# Skeleton links consumed by the angle definitions (and drawn by viewers),
# as (from, to) joint pairs.
SKELETON_LINKS: tuple[tuple[JointId, JointId], ...] = (
    (JointId.RIGHT_WRIST, JointId.RIGHT_ELBOW),
    (JointId.RIGHT_ELBOW, JointId.RIGHT_SHOULDER),
    (JointId.RIGHT_SHOULDER, JointId.COLLAR),
    (JointId.COLLAR, JointId.NECK),
    (JointId.NECK, JointId.HEAD),
    (JointId.COLLAR, JointId.LEFT_SHOULDER),
    (JointId.LEFT_SHOULDER, JointId.LEFT_ELBOW),
    (JointId.LEFT_ELBOW, JointId.LEFT_WRIST),
)

ANGLE_LABELS = {
    AngleJointId.RE: "right elbow",
    AngleJointId.RSR: "right shoulder roll",
    AngleJointId.RSP: "right shoulder pitch",
    AngleJointId.HP: "head pitch",
    AngleJointId.LSR: "left shoulder roll",
    AngleJointId.LSP: "left shoulder pitch",
    AngleJointId.LE: "left elbow",
}
