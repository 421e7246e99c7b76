"""Command-line interface.

Subcommands mirror the pipeline stages so they can be chained through
files, plus a one-shot ``run`` and the ``serve`` mode:

    skelmimic gen-fixtures --out-dir data/
    skelmimic extract data/teacup.jsonl --out teacup_human.csv
    skelmimic retarget teacup_human.csv --out teacup_robot.csv
    skelmimic execute teacup_robot.csv --mode closed --out-dir out/
    skelmimic detect-noise data/teacup.jsonl --threshold 0.5
    skelmimic run data/teacup.jsonl --out-dir out/ --detect-noise
    skelmimic serve --port 8000 --data-dir data/

Angles are degrees, positions meters, time seconds throughout. A JSON
config file (``--config``) overrides the shipped robot model, limit
tables, controller gains and plant settings.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .annotations import AnnotationSet, NoiseDetectorConfig, detect_noisy_frames
from .config import load_config
from .control import make_plants, open_loop_track, reproduce_motion
from .fixtures import MOVES, generate_fixtures
from .joints import AngleJointId
from .pipeline import export_report, run_pipeline
from .recordings import load_angle_csv, load_recording, save_angle_csv
from .retarget import map_trajectory
from .server import serve
from .skeleton import extract_trajectory

_MODE_ALIASES = {"closed": "closed_loop", "open": "open_loop"}


def _mode(value: str) -> str:
    return _MODE_ALIASES.get(value, value)


def _cmd_extract(args) -> int:
    cfg = load_config(args.config)
    seq = load_recording(args.recording)
    traj = extract_trajectory(seq, policy=args.policy, limits=cfg.human_limits)
    out = Path(args.out) if args.out else Path(args.recording).with_suffix(".human.csv")
    save_angle_csv(traj, out)
    print(
        f"extracted 7x{traj.n_frames} human angle matrix from {len(seq)} frames "
        f"({len(traj.dropped_frames)} degenerate dropped) -> {out}"
    )
    return 0


def _cmd_detect_noise(args) -> int:
    seq = load_recording(args.recording)
    cfg = NoiseDetectorConfig(jump_threshold=args.threshold, window=args.window)
    flagged = sorted(detect_noisy_frames(seq, cfg))
    payload = {"recording": Path(args.recording).stem, "threshold": args.threshold,
               "window": args.window, "flagged": flagged}
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                                  encoding="utf-8")
        print(f"{len(flagged)} noisy frames -> {args.out}")
    else:
        print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def _cmd_retarget(args) -> int:
    cfg = load_config(args.config)
    traj = load_angle_csv(args.angles)
    robot_traj = map_trajectory(traj, cfg.human_limits, cfg.robot.limits)
    out = Path(args.out) if args.out else Path(args.angles).with_suffix(".robot.csv")
    save_angle_csv(robot_traj, out)
    print(f"retargeted 7x{robot_traj.n_frames} onto {cfg.robot.name!r} ranges -> {out}")
    return 0


def _cmd_execute(args) -> int:
    cfg = load_config(args.config)
    traj = load_angle_csv(args.angles)
    if traj.side != "robot":
        print("execute expects a robot-side angle CSV (run `retarget` first)", file=sys.stderr)
        return 2
    initial = np.array([0.5 * sum(cfg.robot.limits.interval(j)) for j in AngleJointId])
    mode = _mode(args.mode)
    if mode == "closed_loop":
        plants = make_plants(cfg.robot.limits, initial=initial, settings=cfg.plant, seed=args.seed)
        trace = reproduce_motion(traj, plants, cfg.controller)
    else:
        trace = open_loop_track(traj, start=initial, cfg=cfg.controller)
    from .pipeline import ActionRun, PipelineReport, _summarize  # local reuse

    run = ActionRun(label=traj.action_label or "trajectory", human=traj, robot=traj,
                    trace=trace, summary=_summarize(trace, traj, 0, 0))
    report = PipelineReport(actions=(run,), failures=(), mode=mode, seed=args.seed,
                            settings={"controller": cfg.controller.to_dict()})
    out_dir = Path(args.out_dir)
    files = export_report(report, out_dir)
    print(
        f"{mode} tracking of {trace.n_frames} setpoints: mean|E_t|="
        f"{float(np.abs(trace.e_t).mean()):.4f} deg, max|E_t|="
        f"{float(np.abs(trace.e_t).max()):.4f} deg, timeouts={trace.timeout_count}"
    )
    for f in files:
        print(f"  wrote {f}")
    return 0


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    seq = load_recording(args.recording)
    annotations = None
    if args.annotations:
        doc = json.loads(Path(args.annotations).read_text(encoding="utf-8"))
        annotations = AnnotationSet.from_dict(doc.get("annotation", doc))
    detector = cfg.detector if args.detect_noise else None
    report = run_pipeline(
        seq,
        annotations,
        human_limits=cfg.human_limits,
        robot=cfg.robot,
        controller=cfg.controller,
        mode=_mode(args.mode),
        detector=detector,
        guard=args.guard or cfg.guard,
        plant=cfg.plant,
        seed=args.seed,
    )
    files = export_report(report, Path(args.out_dir))
    for run in report.actions:
        s = run.summary
        print(
            f"[{run.label}] frames={s['frames']} mean|E_t|={s['mean_abs_error']:.4f} "
            f"max|E_t|={s['max_abs_error']:.4f} timeouts={s['timeouts']}"
        )
    for failure in report.failures:
        print(f"[{failure.label}] FAILED at {failure.stage}: {failure.reason}")
    print(f"wrote {len(files)} files to {args.out_dir}")
    return 0


def _cmd_gen_fixtures(args) -> int:
    paths = generate_fixtures(
        args.out_dir,
        moves=args.moves,
        n_frames=args.frames,
        seed=args.seed,
        noisy=args.noisy,
    )
    for p in paths:
        print(f"wrote {p}")
    return 0


def _cmd_serve(args) -> int:
    cfg = load_config(args.config)
    serve(args.port, args.data_dir, host=args.host, config=cfg, ui_dir=args.ui_dir)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skelmimic",
        description="Skeleton demonstrations to robot joint trajectories.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config(p):
        p.add_argument("--config", default=None, help="JSON config file (robot, limits, gains)")

    p = sub.add_parser("extract", help="extract human joint angles from a recording")
    p.add_argument("recording")
    p.add_argument("--out", default=None, help="output angle CSV")
    p.add_argument("--policy", choices=("drop", "reject"), default="drop")
    add_config(p)
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("detect-noise", help="flag frames with sudden position jumps")
    p.add_argument("recording")
    p.add_argument("--threshold", type=float, default=0.5, help="jump threshold in meters")
    p.add_argument("--window", type=int, default=1)
    p.add_argument("--out", default=None, help="write JSON result here instead of stdout")
    p.set_defaults(func=_cmd_detect_noise)

    p = sub.add_parser("retarget", help="map a human angle CSV into robot ranges")
    p.add_argument("angles")
    p.add_argument("--out", default=None)
    add_config(p)
    p.set_defaults(func=_cmd_retarget)

    p = sub.add_parser("execute", help="track a robot angle CSV with the PID controller")
    p.add_argument("angles")
    p.add_argument("--mode", choices=("closed", "open", "closed_loop", "open_loop"),
                   default="closed")
    p.add_argument("--out-dir", default="out")
    p.add_argument("--seed", type=int, default=0)
    add_config(p)
    p.set_defaults(func=_cmd_execute)

    p = sub.add_parser("run", help="full pipeline: recording -> report files")
    p.add_argument("recording")
    p.add_argument("--annotations", default=None, help="annotation JSON file")
    p.add_argument("--mode", choices=("closed", "open", "closed_loop", "open_loop"),
                   default="closed")
    p.add_argument("--detect-noise", action="store_true",
                   help="merge detector suggestions into the noisy-frame mask")
    p.add_argument("--guard", action="store_true", help="enable the self-collision guard")
    p.add_argument("--out-dir", default="out")
    p.add_argument("--seed", type=int, default=0)
    add_config(p)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("gen-fixtures", help="write synthetic demonstration recordings")
    p.add_argument("--out-dir", default="fixtures")
    p.add_argument("--moves", nargs="+", default=list(MOVES), choices=list(MOVES))
    p.add_argument("--frames", type=int, default=90)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noisy", action="store_true", help="inject a 1 m single-frame jump")
    p.set_defaults(func=_cmd_gen_fixtures)

    p = sub.add_parser("serve", help="serve the annotator HTTP API")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--data-dir", default="data")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--ui-dir", default=None, help="built UI directory to mount at /ui/")
    add_config(p)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
