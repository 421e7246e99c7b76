"""Demonstration annotations: action segments, noisy-frame masks, jump detection.

A recording session typically holds several moves back to back; an
:class:`AnnotationSet` cuts it into labeled segments (frame indices,
inclusive on both ends) and marks frames to discard. Noisy frames show up
in RGB-D skeleton data as a sudden positional jump of one or more joints
between consecutive frames; :func:`detect_noisy_frames` automates finding
them with a simple displacement threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .skeleton import SkeletonSequence

__all__ = [
    "Segment",
    "AnnotationSet",
    "AnnotationValidationError",
    "EmptySegmentError",
    "NoiseDetectorConfig",
    "detect_noisy_frames",
    "apply_annotations",
    "PROVENANCES",
]

PROVENANCES = ("manual", "detector", "merged")


class AnnotationValidationError(ValueError):
    """An annotation set violates its invariants; the message says why."""


class EmptySegmentError(ValueError):
    """A segment has no frames left after noisy-frame removal."""


@dataclass(frozen=True)
class Segment:
    """One labeled action: frames start_frame..end_frame inclusive."""

    action_label: str
    start_frame: int
    end_frame: int

    def __post_init__(self):
        object.__setattr__(self, "start_frame", int(self.start_frame))
        object.__setattr__(self, "end_frame", int(self.end_frame))

    def to_dict(self) -> dict:
        return {
            "action_label": self.action_label,
            "start_frame": self.start_frame,
            "end_frame": self.end_frame,
        }


@dataclass(frozen=True)
class AnnotationSet:
    """Segments plus a noisy-frame mask for one recording."""

    recording_id: str
    segments: tuple[Segment, ...] = ()
    noisy_frames: frozenset[int] = frozenset()
    provenance: str = "manual"

    def __post_init__(self):
        segments = tuple(
            s if isinstance(s, Segment) else Segment(**s) for s in self.segments
        )
        object.__setattr__(self, "segments", segments)
        object.__setattr__(self, "noisy_frames", frozenset(int(i) for i in self.noisy_frames))
        if self.provenance not in PROVENANCES:
            raise AnnotationValidationError(
                f"provenance must be one of {PROVENANCES}, got {self.provenance!r}"
            )

    def validate(self, n_frames: int) -> None:
        """Check all invariants against a recording length; raise with a reason."""
        for seg in self.segments:
            if seg.start_frame > seg.end_frame:
                raise AnnotationValidationError(
                    f"segment {seg.action_label!r}: start {seg.start_frame} > end {seg.end_frame}"
                )
            if seg.start_frame < 0 or seg.end_frame >= n_frames:
                raise AnnotationValidationError(
                    f"segment {seg.action_label!r} [{seg.start_frame}, {seg.end_frame}] "
                    f"out of bounds for {n_frames} frames"
                )
        ordered = sorted(self.segments, key=lambda s: s.start_frame)
        for prev, nxt in zip(ordered, ordered[1:]):
            if nxt.start_frame <= prev.end_frame:
                raise AnnotationValidationError(
                    f"segments overlap: {prev.action_label!r} ends at {prev.end_frame}, "
                    f"{nxt.action_label!r} starts at {nxt.start_frame}"
                )
        bad = [i for i in self.noisy_frames if i < 0 or i >= n_frames]
        if bad:
            raise AnnotationValidationError(
                f"noisy frames out of bounds for {n_frames} frames: {sorted(bad)}"
            )

    def with_noisy(self, extra, provenance: str = "merged") -> "AnnotationSet":
        return AnnotationSet(
            recording_id=self.recording_id,
            segments=self.segments,
            noisy_frames=self.noisy_frames | frozenset(int(i) for i in extra),
            provenance=provenance,
        )

    def to_dict(self) -> dict:
        return {
            "recording_id": self.recording_id,
            "segments": [s.to_dict() for s in self.segments],
            "noisy_frames": sorted(self.noisy_frames),
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AnnotationSet":
        try:
            segments = tuple(
                Segment(
                    action_label=str(s["action_label"]),
                    start_frame=int(s["start_frame"]),
                    end_frame=int(s["end_frame"]),
                )
                for s in data.get("segments", ())
            )
            return cls(
                recording_id=str(data["recording_id"]),
                segments=segments,
                noisy_frames=frozenset(int(i) for i in data.get("noisy_frames", ())),
                provenance=str(data.get("provenance", "manual")),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, AnnotationValidationError):
                raise
            raise AnnotationValidationError(f"malformed annotation document: {exc}") from None

    @classmethod
    def whole_recording(cls, seq: SkeletonSequence, recording_id: str = "") -> "AnnotationSet":
        """A single segment covering every frame of a sequence."""
        return cls(
            recording_id=recording_id or seq.action_label,
            segments=(Segment(seq.action_label, 0, len(seq) - 1),),
        )


@dataclass(frozen=True)
class NoiseDetectorConfig:
    """Sudden-jump detector settings.

    A frame is flagged when a joint moves more than ``jump_threshold``
    meters relative to the frame ``window`` steps earlier. With
    ``per_joint=False`` the mean displacement over all joints is compared
    instead of the worst joint.
    """

    jump_threshold: float = 0.5
    per_joint: bool = True
    window: int = 1

    def __post_init__(self):
        if not self.jump_threshold > 0:
            raise ValueError(f"jump_threshold must be > 0, got {self.jump_threshold}")
        if self.window < 1:
            raise ValueError(f"window must be >= 1, got {self.window}")

    def to_dict(self) -> dict:
        return {
            "jump_threshold": self.jump_threshold,
            "per_joint": self.per_joint,
            "window": self.window,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "NoiseDetectorConfig":
        return cls(**{k: data[k] for k in cls().to_dict() if k in data})


def detect_noisy_frames(
    seq: SkeletonSequence, cfg: NoiseDetectorConfig = NoiseDetectorConfig()
) -> set[int]:
    """Frame indices exhibiting a sudden positional jump.

    Frames earlier than ``window`` are never flagged (no reference frame).
    Raising the threshold can only shrink the result.
    """
    positions = seq.positions_array()  # (T, 9, 3)
    T = positions.shape[0]
    if T <= cfg.window:
        return set()
    disp = np.linalg.norm(positions[cfg.window:] - positions[:-cfg.window], axis=2)  # (T-w, 9)
    if cfg.per_joint:
        jumped = disp.max(axis=1) > cfg.jump_threshold
    else:
        jumped = disp.mean(axis=1) > cfg.jump_threshold
    return {int(i) + cfg.window for i in np.flatnonzero(jumped)}


def apply_annotations(seq: SkeletonSequence, ann: AnnotationSet) -> list[SkeletonSequence]:
    """Cut a recording into per-action sequences, removing noisy frames.

    Frames are selected, never modified: every output frame is one of the
    input frames. Raises :class:`EmptySegmentError` if a segment loses all
    its frames.
    """
    ann.validate(len(seq))
    out: list[SkeletonSequence] = []
    for seg in ann.segments:
        frames = [
            seq.frames[i]
            for i in range(seg.start_frame, seg.end_frame + 1)
            if i not in ann.noisy_frames
        ]
        if not frames:
            raise EmptySegmentError(
                f"segment {seg.action_label!r} [{seg.start_frame}, {seg.end_frame}] "
                "has no frames left after noisy-frame removal"
            )
        out.append(
            SkeletonSequence(
                action_label=seg.action_label,
                frames=tuple(frames),
                sample_rate_hint=seq.sample_rate_hint,
            )
        )
    return out
