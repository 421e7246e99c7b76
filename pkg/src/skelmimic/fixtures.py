"""Synthetic demonstration recordings for tests, demos and benchmarks.

Real RGB-D demonstration data is not shipped, so this module synthesizes
plausible upper-body moves: a fixed-size skeleton whose arm and head pose
parameters follow slow sinusoids (distinct frequencies, centers and
phases per move). Generated sequences are smooth -- inter-frame joint
displacement stays far below the default jump-detection threshold --
and deterministic for a given (move, seed) pair. ``inject_jump`` then
corrupts chosen frames the way noisy skeleton trackers do: one joint
teleports for a single frame.

Move names follow the demo repertoire: teacup, ladle, fork, spoon, knife,
salt_shaker.
"""

from __future__ import annotations

import zlib
from pathlib import Path

import numpy as np

from .joints import JointId
from .recordings import save_recording
from .skeleton import SkeletonFrame, SkeletonSequence

__all__ = ["MOVES", "generate_move", "generate_fixtures", "inject_jump"]

MOVES = ("teacup", "ladle", "fork", "spoon", "knife", "salt_shaker")

# Skeleton dimensions (meters). Frame: x down, y lateral, z forward.
_NECK_LEN = 0.10
_HEAD_LEN = 0.12
_SHOULDER_HALF = 0.18
_UPPER_ARM = 0.25
_FOREARM = 0.24

_UP = np.array([-1.0, 0.0, 0.0])
_Y = np.array([0.0, 1.0, 0.0])
_Z = np.array([0.0, 0.0, 1.0])

# Pose parameters per move: (center_deg, amplitude_deg, freq_hz, phase_rad)
# for each arm's sweep (angle from the down axis), tilt (out of the frontal
# plane) and elbow bend, plus the head pitch. Tilt stays strictly positive
# and under 45 deg: the signed shoulder-pitch convention is discontinuous
# where the upper arm crosses the frontal plane, and degenerate where it
# aligns with the z-axis, so smooth fixtures keep clear of both.
_MOVE_PARAMS: dict[str, dict] = {
    "teacup": {
        "right": {"sweep": (85, 25, 0.30, 0.0), "tilt": (22, 16, 0.30, 1.1), "elbow": (75, 35, 0.30, 0.6)},
        "left": {"sweep": (30, 10, 0.15, 2.0), "tilt": (14, 8, 0.15, 0.4), "elbow": (95, 15, 0.15, 2.4)},
        "head": (18, 8, 0.15, 0.0),
    },
    "ladle": {
        "right": {"sweep": (60, 30, 0.25, 0.5), "tilt": (25, 18, 0.25, 0.0), "elbow": (60, 40, 0.25, 1.6)},
        "left": {"sweep": (45, 20, 0.25, 3.1), "tilt": (20, 14, 0.25, 1.0), "elbow": (70, 30, 0.25, 4.0)},
        "head": (15, 6, 0.25, 1.2),
    },
    "fork": {
        "right": {"sweep": (50, 20, 0.40, 0.0), "tilt": (25, 15, 0.40, 0.8), "elbow": (90, 30, 0.40, 2.0)},
        "left": {"sweep": (20, 8, 0.20, 1.5), "tilt": (12, 7, 0.20, 2.2), "elbow": (40, 20, 0.20, 0.3)},
        "head": (20, 10, 0.20, 2.0),
    },
    "spoon": {
        "right": {"sweep": (55, 25, 0.35, 1.0), "tilt": (26, 18, 0.35, 2.5), "elbow": (80, 35, 0.35, 0.0)},
        "left": {"sweep": (55, 25, 0.35, 4.1), "tilt": (26, 18, 0.35, 5.6), "elbow": (80, 35, 0.35, 3.1)},
        "head": (12, 5, 0.35, 0.7),
    },
    "knife": {
        "right": {"sweep": (70, 15, 0.50, 0.0), "tilt": (30, 12, 0.50, 1.5), "elbow": (65, 25, 0.50, 3.0)},
        "left": {"sweep": (35, 12, 0.25, 0.9), "tilt": (16, 9, 0.25, 1.8), "elbow": (55, 18, 0.25, 2.7)},
        "head": (16, 7, 0.25, 3.0),
    },
    "salt_shaker": {
        "right": {"sweep": (100, 20, 0.50, 0.0), "tilt": (21, 14, 0.50, 0.5), "elbow": (50, 30, 0.50, 1.0)},
        "left": {"sweep": (100, 20, 0.50, 3.1), "tilt": (21, 14, 0.50, 3.6), "elbow": (50, 30, 0.50, 4.1)},
        "head": (22, 9, 0.30, 1.6),
    },
}


def _sine(params: tuple, t: np.ndarray, jitter: float) -> np.ndarray:
    center, amp, freq, phase = params
    return center + amp * np.sin(2.0 * np.pi * freq * t + phase + jitter)


def _arm_direction(sweep_deg: float, tilt_deg: float, lateral_sign: float) -> np.ndarray:
    a = np.radians(sweep_deg)
    b = np.radians(tilt_deg)
    return np.array(
        [np.cos(a), lateral_sign * np.sin(a) * np.cos(b), np.sin(a) * np.sin(b)]
    )


def _bend(direction: np.ndarray, elbow_deg: float) -> np.ndarray:
    """Forearm direction: the upper-arm direction rotated by the elbow angle."""
    axis_ref = _Y if abs(float(direction @ _Y)) < 0.9 else _Z
    axis = np.cross(direction, axis_ref)
    axis /= np.linalg.norm(axis)
    e = np.radians(elbow_deg)
    return direction * np.cos(e) + np.cross(axis, direction) * np.sin(e)


def generate_move(
    name: str,
    n_frames: int = 90,
    sample_rate: float = 30.0,
    seed: int = 0,
) -> SkeletonSequence:
    """Generate one synthetic demonstration of a named move.

    The seed only jitters the sinusoid phases, so different seeds give
    different-looking repetitions of the same move.
    """
    if name not in _MOVE_PARAMS:
        raise ValueError(f"unknown move {name!r}; available: {sorted(_MOVE_PARAMS)}")
    if n_frames < 1:
        raise ValueError("n_frames must be >= 1")
    params = _MOVE_PARAMS[name]
    rng = np.random.default_rng([seed, zlib.crc32(name.encode("utf-8"))])
    jitters = rng.uniform(-0.8, 0.8, size=7)
    t = np.arange(n_frames) / sample_rate

    head_pitch = _sine(params["head"], t, jitters[0])
    arm_series = {}
    for k, side in enumerate(("right", "left")):
        arm = params[side]
        arm_series[side] = {
            "sweep": _sine(arm["sweep"], t, jitters[1 + 3 * k]),
            "tilt": _sine(arm["tilt"], t, jitters[2 + 3 * k]),
            "elbow": _sine(arm["elbow"], t, jitters[3 + 3 * k]),
        }

    collar = np.zeros(3)
    neck = collar + _NECK_LEN * _UP
    frames = []
    for i in range(n_frames):
        h = np.radians(head_pitch[i])
        head = neck + _HEAD_LEN * np.array([-np.cos(h), 0.0, np.sin(h)])
        positions = {
            JointId.COLLAR: collar,
            JointId.NECK: neck,
            JointId.HEAD: head,
        }
        for side, lateral in (("right", -1.0), ("left", 1.0)):
            series = arm_series[side]
            shoulder = collar + lateral * _SHOULDER_HALF * _Y
            d = _arm_direction(series["sweep"][i], series["tilt"][i], lateral)
            elbow = shoulder + _UPPER_ARM * d
            wrist = elbow + _FOREARM * _bend(d, series["elbow"][i])
            if side == "right":
                positions[JointId.RIGHT_SHOULDER] = shoulder
                positions[JointId.RIGHT_ELBOW] = elbow
                positions[JointId.RIGHT_WRIST] = wrist
            else:
                positions[JointId.LEFT_SHOULDER] = shoulder
                positions[JointId.LEFT_ELBOW] = elbow
                positions[JointId.LEFT_WRIST] = wrist
        frames.append(SkeletonFrame(timestamp=i / sample_rate, positions=positions))
    return SkeletonSequence(action_label=name, frames=tuple(frames), sample_rate_hint=sample_rate)


def inject_jump(
    seq: SkeletonSequence,
    frame_indices,
    joint: JointId = JointId.RIGHT_WRIST,
    offset=(0.0, 1.0, 0.0),
) -> SkeletonSequence:
    """Teleport one joint in the given frames (single-frame sensor glitches)."""
    offset = np.asarray(offset, dtype=float)
    targets = {int(i) for i in frame_indices}
    frames = []
    for i, frame in enumerate(seq.frames):
        if i in targets:
            positions = frame.positions.copy()
            positions[joint - 1] = positions[joint - 1] + offset
            frames.append(SkeletonFrame(frame.timestamp, positions))
        else:
            frames.append(frame)
    return SkeletonSequence(
        action_label=seq.action_label,
        frames=tuple(frames),
        sample_rate_hint=seq.sample_rate_hint,
    )


def generate_fixtures(
    out_dir,
    moves=MOVES,
    n_frames: int = 90,
    sample_rate: float = 30.0,
    seed: int = 0,
    noisy: bool = False,
) -> list[Path]:
    """Write one JSONL recording per move; returns the written paths.

    With ``noisy=True`` each recording gets a 1 m single-frame jump of the
    right wrist at frame ``n_frames // 3``.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for move in moves:
        seq = generate_move(move, n_frames=n_frames, sample_rate=sample_rate, seed=seed)
        if noisy:
            seq = inject_jump(seq, [n_frames // 3])
        paths.append(save_recording(seq, out_dir / f"{move}.jsonl"))
    return paths
