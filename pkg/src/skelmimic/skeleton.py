"""Skeleton frames and upper-body joint-angle extraction.

Positions are meters in a right-handed camera/world frame whose x-axis is
the reference direction for the shoulder-pitch projection: the xy-plane is
the frontal plane, z completes the right-handed frame. Only link
*directions* matter, so every derived angle is invariant under global
translation and uniform positive scaling of the skeleton.

Angle recipe (all results in degrees):

* elbow angles (RE, LE): angle between the forearm link (wrist to elbow)
  and the upper-arm link (elbow to shoulder); 0 = straight arm.
* shoulder roll (RSR, LSR): angle between the upper-arm link and the
  shoulder-to-collar link.
* shoulder pitch (RSP, LSP): angle between the xy-plane projection of the
  shoulder-to-elbow vector and the +x axis, signed by the z-component of
  the unprojected vector (z < 0 gives a negative pitch). The
  shoulder-to-elbow direction is used for *both* arms; this direction
  choice is a fixed convention of this package.
* head pitch (HP): angle between the collar-to-neck and neck-to-head links
  (unsigned).

Extracted human angles are clamped into the human limit table so that the
downstream range mapping never extrapolates. A link whose norm (or whose
xy-projection, for pitch) falls below ``DEGENERATE_EPS`` marks a corrupt
frame and raises :class:`DegenerateLinkError`.

All types are immutable after construction and all operations are pure,
so frames may be processed in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping

import numpy as np

from .joints import AngleJointId, JointId, N_ANGLES, N_JOINTS
from .limits import HUMAN_LIMITS, JointLimitTable

# Links are degenerate below this norm (meters); well under sensor resolution.
DEGENERATE_EPS = 1e-9


class DegenerateLinkError(ValueError):
    """A link (or pitch projection) has near-zero norm: corrupt frame data."""

    def __init__(self, message: str, joint: AngleJointId | None = None):
        self.joint = joint
        if joint is not None:
            message = f"{joint.name}: {message}"
        super().__init__(message)


class EmptyAfterFilteringError(ValueError):
    """Every frame of a sequence was degenerate and got dropped."""


def _as_position_array(positions) -> np.ndarray:
    if isinstance(positions, Mapping):
        arr = np.full((N_JOINTS, 3), np.nan)
        for key, value in positions.items():
            joint = JointId[key.upper()] if isinstance(key, str) else JointId(key)
            arr[joint - 1] = np.asarray(value, dtype=float)
    else:
        arr = np.asarray(positions, dtype=float)
    if arr.shape != (N_JOINTS, 3):
        raise ValueError(f"positions must have shape ({N_JOINTS}, 3), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("positions must be finite for all 9 joints")
    return arr


@dataclass(frozen=True)
class SkeletonFrame:
    """One timestamped set of 3D joint positions (meters).

    ``positions`` is a (9, 3) array whose row ``JointId - 1`` holds the
    (x, y, z) position of that joint. A mapping of joint names/ids to
    3-vectors is accepted and converted.
    """

    timestamp: float
    positions: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = _as_position_array(self.positions)
        arr.setflags(write=False)
        object.__setattr__(self, "timestamp", float(self.timestamp))
        object.__setattr__(self, "positions", arr)

    def position(self, joint: JointId) -> np.ndarray:
        return self.positions[JointId(joint) - 1]

    def to_mapping(self) -> dict[str, list[float]]:
        return {j.key: [float(v) for v in self.position(j)] for j in JointId}

    def translated(self, offset) -> "SkeletonFrame":
        return SkeletonFrame(self.timestamp, self.positions + np.asarray(offset, dtype=float))

    def scaled(self, factor: float, about=(0.0, 0.0, 0.0)) -> "SkeletonFrame":
        about = np.asarray(about, dtype=float)
        return SkeletonFrame(self.timestamp, about + factor * (self.positions - about))


@dataclass(frozen=True)
class SkeletonSequence:
    """An ordered demonstration recording: frames with strictly increasing timestamps."""

    action_label: str
    frames: tuple[SkeletonFrame, ...]
    sample_rate_hint: float | None = None

    def __post_init__(self):
        frames = tuple(self.frames)
        if len(frames) < 1:
            raise ValueError("a sequence needs at least one frame")
        times = np.array([f.timestamp for f in frames])
        if len(frames) > 1 and not np.all(np.diff(times) > 0):
            bad = int(np.flatnonzero(np.diff(times) <= 0)[0]) + 1
            raise ValueError(f"timestamps must be strictly increasing (violated at frame {bad})")
        object.__setattr__(self, "frames", frames)

    def __len__(self) -> int:
        return len(self.frames)

    def __iter__(self) -> Iterator[SkeletonFrame]:
        return iter(self.frames)

    @property
    def times(self) -> np.ndarray:
        return np.array([f.timestamp for f in self.frames])

    def positions_array(self) -> np.ndarray:
        """All positions stacked as a (T, 9, 3) array."""
        return np.stack([f.positions for f in self.frames])


@dataclass(frozen=True)
class AngleTrajectory:
    """A 7xT joint-angle matrix in degrees, human- or robot-side.

    ``dropped_frames`` records source-frame indices removed during
    extraction (degenerate frames), so column count + drop count equals
    the original frame count.
    """

    side: str
    angles: np.ndarray = field(repr=False)
    action_label: str = ""
    frame_times: np.ndarray = field(default=None, repr=False)  # type: ignore[assignment]
    dropped_frames: tuple[int, ...] = ()

    def __post_init__(self):
        if self.side not in ("human", "robot"):
            raise ValueError(f"side must be 'human' or 'robot', got {self.side!r}")
        angles = np.asarray(self.angles, dtype=float)
        if angles.ndim != 2 or angles.shape[0] != N_ANGLES:
            raise ValueError(f"angles must have shape ({N_ANGLES}, T), got {angles.shape}")
        if not np.all(np.isfinite(angles)):
            raise ValueError("angle matrix must be finite")
        times = self.frame_times
        if times is None:
            times = np.arange(angles.shape[1], dtype=float)
        times = np.asarray(times, dtype=float)
        if times.shape != (angles.shape[1],):
            raise ValueError("frame_times length must match the number of columns")
        angles.setflags(write=False)
        times.setflags(write=False)
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "frame_times", times)
        object.__setattr__(self, "dropped_frames", tuple(int(i) for i in self.dropped_frames))

    @property
    def n_frames(self) -> int:
        return self.angles.shape[1]

    def column(self, t: int) -> np.ndarray:
        return self.angles[:, t]


def link(frame: SkeletonFrame, i: JointId, j: JointId) -> np.ndarray:
    """Vector from joint i to joint j (meters): position(j) - position(i)."""
    return frame.position(j) - frame.position(i)


def angle_between(l1, l2, eps: float = DEGENERATE_EPS) -> float:
    """Unsigned angle between two links in degrees, in [0, 180].

    The cosine is clamped to [-1, 1] before acos so that numerically
    anti-parallel inputs cannot underflow the domain. Raises
    :class:`DegenerateLinkError` when either norm is below ``eps``.
    """
    v1 = np.asarray(l1, dtype=float)
    v2 = np.asarray(l2, dtype=float)
    n1 = float(np.linalg.norm(v1))
    n2 = float(np.linalg.norm(v2))
    if n1 < eps or n2 < eps:
        raise DegenerateLinkError(f"link norm below {eps} m ({min(n1, n2):.3g} m)")
    cos = float(np.clip(np.dot(v1, v2) / (n1 * n2), -1.0, 1.0))
    return float(np.degrees(np.arccos(cos)))


def _pair_angle(frame, aj, pair1, pair2, eps) -> float:
    try:
        return angle_between(link(frame, *pair1), link(frame, *pair2), eps)
    except DegenerateLinkError as exc:
        raise DegenerateLinkError(str(exc), joint=aj) from None


def _pitch_angle(frame, aj, shoulder, elbow, eps) -> float:
    # Shoulder-to-elbow direction for both arms; projected onto the
    # xy-plane, measured against +x, signed by the z-component.
    v = frame.position(elbow) - frame.position(shoulder)
    proj_norm = float(np.hypot(v[0], v[1]))
    if proj_norm < eps:
        raise DegenerateLinkError(
            f"xy-projection norm below {eps} m (arm along z)", joint=aj
        )
    magnitude = float(np.degrees(np.arccos(np.clip(v[0] / proj_norm, -1.0, 1.0))))
    return -magnitude if v[2] < 0 else magnitude


def extract_angles(
    frame: SkeletonFrame,
    limits: JointLimitTable | None = None,
    eps: float = DEGENERATE_EPS,
) -> np.ndarray:
    """The 7 derived joint angles of one frame, clamped into human limits.

    Returns a (7,) array ordered as :class:`AngleJointId`. Raises
    :class:`DegenerateLinkError` (with the offending angle attached) on
    corrupt frames.
    """
    J = JointId
    A = AngleJointId
    limits = HUMAN_LIMITS if limits is None else limits
    raw = np.empty(N_ANGLES)
    raw[A.RE] = _pair_angle(frame, A.RE, (J.RIGHT_WRIST, J.RIGHT_ELBOW), (J.RIGHT_ELBOW, J.RIGHT_SHOULDER), eps)
    raw[A.RSR] = _pair_angle(frame, A.RSR, (J.RIGHT_ELBOW, J.RIGHT_SHOULDER), (J.RIGHT_SHOULDER, J.COLLAR), eps)
    raw[A.RSP] = _pitch_angle(frame, A.RSP, J.RIGHT_SHOULDER, J.RIGHT_ELBOW, eps)
    raw[A.HP] = _pair_angle(frame, A.HP, (J.COLLAR, J.NECK), (J.NECK, J.HEAD), eps)
    raw[A.LSR] = _pair_angle(frame, A.LSR, (J.COLLAR, J.LEFT_SHOULDER), (J.LEFT_SHOULDER, J.LEFT_ELBOW), eps)
    raw[A.LSP] = _pitch_angle(frame, A.LSP, J.LEFT_SHOULDER, J.LEFT_ELBOW, eps)
    raw[A.LE] = _pair_angle(frame, A.LE, (J.LEFT_SHOULDER, J.LEFT_ELBOW), (J.LEFT_ELBOW, J.LEFT_WRIST), eps)
    return np.array([limits.clamp(a, raw[a]) for a in A])


def extract_trajectory(
    seq: SkeletonSequence,
    policy: str = "drop",
    limits: JointLimitTable | None = None,
    eps: float = DEGENERATE_EPS,
) -> AngleTrajectory:
    """Extract the human-side angle matrix of a whole sequence.

    ``policy="drop"`` removes degenerate frames (their indices end up in
    ``dropped_frames``); ``policy="reject"`` re-raises on the first
    degenerate frame. Raises :class:`EmptyAfterFilteringError` when
    nothing survives.
    """
    if policy not in ("drop", "reject"):
        raise ValueError(f"policy must be 'drop' or 'reject', got {policy!r}")
    columns: list[np.ndarray] = []
    times: list[float] = []
    dropped: list[int] = []
    for idx, frame in enumerate(seq.frames):
        try:
            columns.append(extract_angles(frame, limits=limits, eps=eps))
        except DegenerateLinkError:
            if policy == "reject":
                raise
            dropped.append(idx)
        else:
            times.append(frame.timestamp)
    if not columns:
        raise EmptyAfterFilteringError(
            f"all {len(seq)} frames of {seq.action_label!r} were degenerate"
        )
    return AngleTrajectory(
        side="human",
        angles=np.column_stack(columns),
        action_label=seq.action_label,
        frame_times=np.array(times),
        dropped_frames=tuple(dropped),
    )
