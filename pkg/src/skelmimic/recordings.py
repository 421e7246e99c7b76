"""Reading and writing skeleton recordings and angle-trajectory files.

Recordings are JSON Lines: one frame per line,

    {"t": 1.23, "joints": {"right_wrist": [x, y, z], ..., "left_wrist": [...]}}

with all nine joint keys required (extra keys from richer trackers are
accepted and ignored) and timestamps strictly increasing. On load the
timestamps are normalized to start at zero.

Angle trajectories travel as CSV with a metadata comment line:

    # skelmimic-angles v1 side=human label=teacup
    time,RE,RSR,RSP,HP,LSR,LSP,LE
    0,12.5,...
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .joints import ANGLE_NAMES, JointId, N_ANGLES
from .skeleton import AngleTrajectory, SkeletonFrame, SkeletonSequence

__all__ = [
    "ParseError",
    "SchemaError",
    "OrderError",
    "load_recording",
    "save_recording",
    "save_angle_csv",
    "load_angle_csv",
    "FLOAT_FMT",
]

# Stable float formatting for every exported file (byte-identical re-exports).
FLOAT_FMT = "%.12g"


class ParseError(ValueError):
    """A recording line is not valid JSON or not a frame record."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SchemaError(ValueError):
    """A frame is structurally invalid (missing joint, bad coordinates)."""

    def __init__(self, message: str, frame: int | None = None, joint: str | None = None):
        self.frame = frame
        self.joint = joint
        super().__init__(message)


class OrderError(ValueError):
    """Timestamps are not strictly increasing."""

    def __init__(self, message: str, frame: int | None = None):
        self.frame = frame
        super().__init__(message)


def _frame_from_record(record: dict, frame_idx: int, line_no: int) -> SkeletonFrame:
    if not isinstance(record, dict):
        raise ParseError("frame record must be a JSON object", line=line_no)
    if "t" not in record:
        raise ParseError("frame record missing 't'", line=line_no)
    joints = record.get("joints")
    if not isinstance(joints, dict):
        raise ParseError("frame record missing 'joints' object", line=line_no)
    positions = np.empty((len(JointId), 3))
    for joint in JointId:
        value = joints.get(joint.key)
        if value is None:
            raise SchemaError(
                f"frame {frame_idx}: missing joint {joint.key!r}",
                frame=frame_idx,
                joint=joint.key,
            )
        coords = np.asarray(value, dtype=float)
        if coords.shape != (3,) or not np.all(np.isfinite(coords)):
            raise SchemaError(
                f"frame {frame_idx}: joint {joint.key!r} needs 3 finite coordinates",
                frame=frame_idx,
                joint=joint.key,
            )
        positions[joint - 1] = coords
    return SkeletonFrame(timestamp=float(record["t"]), positions=positions)


def load_recording(path, action_label: str | None = None) -> SkeletonSequence:
    """Load a JSONL recording and return a validated sequence.

    The action label defaults to the file stem. Timestamps are shifted so
    the first frame is at t=0 and the sample-rate hint is estimated from
    the median frame interval.
    """
    path = Path(path)
    frames: list[SkeletonFrame] = []
    with path.open("r", encoding="utf-8") as fh:
        frame_idx = 0
        for line_no, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                record = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON ({exc.msg})", line=line_no) from None
            frame = _frame_from_record(record, frame_idx, line_no)
            if frames and frame.timestamp <= frames[-1].timestamp:
                raise OrderError(
                    f"frame {frame_idx}: timestamp {frame.timestamp} not after "
                    f"{frames[-1].timestamp}",
                    frame=frame_idx,
                )
            frames.append(frame)
            frame_idx += 1
    if not frames:
        raise ParseError(f"{path}: recording contains no frames")
    t0 = frames[0].timestamp
    if t0 != 0.0:
        frames = [SkeletonFrame(f.timestamp - t0, f.positions) for f in frames]
    hint = None
    if len(frames) > 1:
        dt = float(np.median(np.diff([f.timestamp for f in frames])))
        if dt > 0:
            hint = 1.0 / dt
    return SkeletonSequence(
        action_label=action_label if action_label is not None else path.stem,
        frames=tuple(frames),
        sample_rate_hint=hint,
    )


def save_recording(seq: SkeletonSequence, path) -> Path:
    """Write a sequence back to JSONL (one frame per line)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for frame in seq.frames:
            record = {"t": frame.timestamp, "joints": frame.to_mapping()}
            fh.write(json.dumps(record) + "\n")
    return path


def save_angle_csv(traj: AngleTrajectory, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# skelmimic-angles v1 side={traj.side} label={traj.action_label}"]
    lines.append("time," + ",".join(ANGLE_NAMES))
    for t in range(traj.n_frames):
        values = [FLOAT_FMT % traj.frame_times[t]]
        values += [FLOAT_FMT % v for v in traj.angles[:, t]]
        lines.append(",".join(values))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def load_angle_csv(path) -> AngleTrajectory:
    path = Path(path)
    text = path.read_text(encoding="utf-8").strip().splitlines()
    if len(text) < 3:
        raise ParseError(f"{path}: angle CSV needs a metadata line, a header and data")
    meta = text[0]
    if not meta.startswith("# skelmimic-angles"):
        raise ParseError(f"{path}: missing skelmimic-angles metadata line")
    side = "human"
    label = ""
    for token in meta.split()[2:]:
        if token.startswith("side="):
            side = token[len("side="):]
        elif token.startswith("label="):
            label = meta.split("label=", 1)[1]
            break
    header = text[1].split(",")
    if header != ["time", *ANGLE_NAMES]:
        raise ParseError(f"{path}: unexpected angle CSV header {header}")
    times = []
    columns = []
    for row in text[2:]:
        parts = row.split(",")
        if len(parts) != 1 + N_ANGLES:
            raise ParseError(f"{path}: bad angle CSV row {row!r}")
        times.append(float(parts[0]))
        columns.append([float(v) for v in parts[1:]])
    return AngleTrajectory(
        side=side,
        angles=np.array(columns).T,
        action_label=label,
        frame_times=np.array(times),
    )
