"""End-to-end orchestration: recording -> angles -> robot trajectory -> tracking report.

``run_pipeline`` composes the stages for every annotated action segment of
a recording: noisy-frame removal, angle extraction (with degenerate-frame
handling), range retargeting, optional self-collision guarding, and
simulated execution in closed or open loop. Failures are isolated per
action -- one bad demonstration never aborts the batch -- and collected
in the report.

``export_report`` writes the report as plot-ready text files with stable
formatting, so re-exporting identical inputs is byte-identical:

* ``summary.json`` -- per-action stats and failures (always written).
* ``<action>_angles.csv`` -- time plus human- and robot-side angle columns.
* ``<action>_trace.csv`` -- one row per (t, joint) with setpoint,
  achieved, error, iterations, control output and timeout flag, plus one
  ``joint=all`` summary row per t carrying e_t, e_t_abs and e_t_std.
* ``<action>_errors.csv`` -- t vs e_t with a +-std band, ready to plot.

Error statistics are based on the signed per-index mean joint error e_t;
mean-absolute and standard-deviation companions are reported alongside
because the signed mean can mask symmetric errors.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .annotations import AnnotationSet, NoiseDetectorConfig, apply_annotations, detect_noisy_frames
from .control import (
    ControllerConfig,
    ExecutionTrace,
    PlantSettings,
    make_plants,
    open_loop_track,
    reproduce_motion,
)
from .joints import ANGLE_NAMES, AngleJointId
from .limits import HUMAN_LIMITS, JointLimitTable
from .recordings import FLOAT_FMT
from .retarget import QTROBOT_MODEL, RobotModel, UnresolvableCollisionError, map_trajectory, self_collision_guard
from .skeleton import AngleTrajectory, SkeletonSequence, extract_trajectory

__all__ = [
    "ActionRun",
    "ActionFailure",
    "PipelineReport",
    "run_pipeline",
    "export_report",
    "summary_payload",
    "MODES",
]

MODES = ("closed_loop", "open_loop")


@dataclass(frozen=True)
class ActionRun:
    """All artifacts produced for one successfully executed action."""

    label: str
    human: AngleTrajectory
    robot: AngleTrajectory
    trace: ExecutionTrace
    summary: dict


@dataclass(frozen=True)
class ActionFailure:
    label: str
    stage: str
    reason: str


@dataclass(frozen=True)
class PipelineReport:
    actions: tuple[ActionRun, ...]
    failures: tuple[ActionFailure, ...]
    mode: str
    seed: int
    settings: dict = field(default_factory=dict)

    def action(self, label: str) -> ActionRun:
        for run in self.actions:
            if run.label == label:
                return run
        raise KeyError(label)


def _guard_trajectory(traj: AngleTrajectory, robot: RobotModel):
    """Apply the self-collision guard column-wise; unresolvable poses are dropped."""
    columns = []
    times = []
    adjusted = 0
    dropped = []
    for t in range(traj.n_frames):
        try:
            result = self_collision_guard(traj.angles[:, t], robot)
        except UnresolvableCollisionError:
            dropped.append(t)
            continue
        adjusted += int(result.adjusted)
        columns.append(result.safe)
        times.append(traj.frame_times[t])
    if not columns:
        raise UnresolvableCollisionError(
            f"{traj.action_label!r}: every pose collides unresolvably"
        )
    guarded = AngleTrajectory(
        side="robot",
        angles=np.column_stack(columns),
        action_label=traj.action_label,
        frame_times=np.array(times),
        dropped_frames=traj.dropped_frames,
    )
    return guarded, adjusted, dropped


def _summarize(trace: ExecutionTrace, human: AngleTrajectory, guard_adjusted, guard_dropped) -> dict:
    abs_et = np.abs(trace.e_t)
    return {
        "frames": trace.n_frames,
        "dropped_degenerate": len(human.dropped_frames),
        "guard_adjusted": guard_adjusted,
        "guard_dropped": guard_dropped,
        "mean_abs_error": float(abs_et.mean()),
        "max_abs_error": float(abs_et.max()),
        "per_joint_rms": [float(v) for v in trace.per_joint_rms()],
        "timeouts": trace.timeout_count,
    }


def run_pipeline(
    seq: SkeletonSequence,
    annotations: AnnotationSet | None = None,
    *,
    human_limits: JointLimitTable = HUMAN_LIMITS,
    robot: RobotModel = QTROBOT_MODEL,
    controller: ControllerConfig = ControllerConfig(),
    mode: str = "closed_loop",
    detector: NoiseDetectorConfig | None = None,
    guard: bool = False,
    plant: PlantSettings = PlantSettings(),
    initial=None,
    seed: int = 0,
    degenerate_policy: str = "drop",
) -> PipelineReport:
    """Run the full chain on one recording and return a per-action report.

    ``annotations=None`` treats the whole recording as a single action.
    ``detector`` (optional) merges automatically flagged jump frames into
    the annotation's noisy set before segmentation. ``initial`` is the
    starting 7-vector of plant angles (midpoints of the robot ranges by
    default). Identical inputs and seed give identical reports.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if annotations is None:
        annotations = AnnotationSet.whole_recording(seq)
    if detector is not None:
        flagged = detect_noisy_frames(seq, detector)
        annotations = annotations.with_noisy(flagged)
    annotations.validate(len(seq))

    if initial is None:
        initial = np.array([0.5 * sum(robot.limits.interval(j)) for j in AngleJointId])
    else:
        initial = np.asarray(initial, dtype=float)

    actions: list[ActionRun] = []
    failures: list[ActionFailure] = []
    for segment in annotations.segments:
        label = segment.action_label
        single = AnnotationSet(
            recording_id=annotations.recording_id,
            segments=(segment,),
            noisy_frames=annotations.noisy_frames,
            provenance=annotations.provenance,
        )
        stage = "segment"
        try:
            action_seq = apply_annotations(seq, single)[0]
            stage = "extract"
            human = extract_trajectory(action_seq, policy=degenerate_policy, limits=human_limits)
            stage = "retarget"
            robot_traj = map_trajectory(human, human_limits, robot.limits)
            guard_adjusted = 0
            guard_dropped: list[int] = []
            if guard:
                stage = "guard"
                robot_traj, guard_adjusted, guard_dropped = _guard_trajectory(robot_traj, robot)
            stage = "execute"
            if mode == "closed_loop":
                plants = make_plants(robot.limits, initial=initial, settings=plant, seed=seed)
                trace = reproduce_motion(robot_traj, plants, controller)
            else:
                trace = open_loop_track(robot_traj, start=initial, cfg=controller)
            actions.append(
                ActionRun(
                    label=label,
                    human=human,
                    robot=robot_traj,
                    trace=trace,
                    summary=_summarize(trace, human, guard_adjusted, len(guard_dropped)),
                )
            )
        except Exception as exc:
            failures.append(ActionFailure(label=label, stage=stage, reason=str(exc)))
    return PipelineReport(
        actions=tuple(actions),
        failures=tuple(failures),
        mode=mode,
        seed=seed,
        settings={
            "controller": controller.to_dict(),
            "plant": plant.to_dict(),
            "robot": robot.name,
            "guard": guard,
            "detector": detector.to_dict() if detector is not None else None,
            "degenerate_policy": degenerate_policy,
        },
    )


def _safe_name(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "_", label) or "action"


def _fmt(value: float) -> str:
    return FLOAT_FMT % value


def _write_angles_csv(run: ActionRun, path: Path) -> None:
    header = ["time"]
    header += [f"human_{n}" for n in ANGLE_NAMES]
    header += [f"robot_{n}" for n in ANGLE_NAMES]
    lines = [",".join(header)]
    # The guard may drop columns, so align rows on the robot trajectory's times.
    human_by_time = {float(t): i for i, t in enumerate(run.human.frame_times)}
    for t in range(run.robot.n_frames):
        time = float(run.robot.frame_times[t])
        row = [_fmt(time)]
        h = human_by_time.get(time)
        if h is None:
            row += [""] * len(ANGLE_NAMES)
        else:
            row += [_fmt(v) for v in run.human.angles[:, h]]
        row += [_fmt(v) for v in run.robot.angles[:, t]]
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


_TRACE_HEADER = (
    "t,time,joint,setpoint,achieved,error,iterations,control,timed_out,e_t,e_t_abs,e_t_std"
)


def _write_trace_csv(trace: ExecutionTrace, path: Path) -> None:
    lines = [_TRACE_HEADER]
    for row in trace.rows():
        if row["joint"] == "all":
            lines.append(
                f"{row['t']},{_fmt(row['time'])},all,,,,,,,"
                f"{_fmt(row['e_t'])},{_fmt(row['e_t_abs'])},{_fmt(row['e_t_std'])}"
            )
        else:
            lines.append(
                f"{row['t']},{_fmt(row['time'])},{row['joint']},{_fmt(row['setpoint'])},"
                f"{_fmt(row['achieved'])},{_fmt(row['error'])},{row['iterations']},"
                f"{_fmt(row['control'])},{int(row['timed_out'])},,,"
            )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_errors_csv(trace: ExecutionTrace, path: Path) -> None:
    lines = ["t,time,e_t,e_t_abs,e_t_std,band_low,band_high"]
    for t in range(trace.n_frames):
        e, a, s = trace.e_t[t], trace.e_t_abs[t], trace.e_t_std[t]
        lines.append(
            f"{t},{_fmt(trace.frame_times[t])},{_fmt(e)},{_fmt(a)},{_fmt(s)},"
            f"{_fmt(e - s)},{_fmt(e + s)}"
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def summary_payload(report: PipelineReport) -> dict:
    """The JSON-ready summary document (also what summary.json contains)."""
    return {
        "mode": report.mode,
        "seed": report.seed,
        "settings": report.settings,
        "actions": [{"label": run.label, **run.summary} for run in report.actions],
        "failures": [
            {"label": f.label, "stage": f.stage, "reason": f.reason} for f in report.failures
        ],
    }


def export_report(report: PipelineReport, out_dir) -> list[Path]:
    """Write the report files described in the module docstring; returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    summary = summary_payload(report)
    summary_path = out_dir / "summary.json"
    summary_path.write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    written.append(summary_path)
    for run in report.actions:
        base = _safe_name(run.label)
        angles_path = out_dir / f"{base}_angles.csv"
        _write_angles_csv(run, angles_path)
        written.append(angles_path)
        trace_path = out_dir / f"{base}_trace.csv"
        _write_trace_csv(run.trace, trace_path)
        written.append(trace_path)
        errors_path = out_dir / f"{base}_errors.csv"
        _write_errors_csv(run.trace, errors_path)
        written.append(errors_path)
    return written
