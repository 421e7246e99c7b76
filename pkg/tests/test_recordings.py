import json

import numpy as np
import pytest

from skelmimic import (
    JointId,
    OrderError,
    ParseError,
    SchemaError,
    generate_move,
    load_angle_csv,
    load_recording,
    save_angle_csv,
    save_recording,
    extract_trajectory,
)

from conftest import GOLDEN_POSE


def frame_record(t, override=None, drop=None):
    joints = {JointId(k).key: list(v) for k, v in GOLDEN_POSE.items()}
    if override:
        joints.update(override)
    if drop:
        joints.pop(drop)
    return {"t": t, "joints": joints}


def write_jsonl(path, records):
    path.write_text("\n".join(json.dumps(r) for r in records) + "\n", encoding="utf-8")


class TestLoadRecording:
    def test_well_formed_three_frames(self, tmp_path):
        path = tmp_path / "wave.jsonl"
        write_jsonl(path, [frame_record(1.5), frame_record(1.6), frame_record(1.7)])
        seq = load_recording(path)
        assert len(seq) == 3
        assert seq.action_label == "wave"
        # timestamps normalized to start at zero
        np.testing.assert_allclose(seq.times, [0.0, 0.1, 0.2], atol=1e-12)
        assert seq.sample_rate_hint == pytest.approx(10.0)

    def test_missing_neck_names_frame_and_joint(self, tmp_path):
        path = tmp_path / "r.jsonl"
        write_jsonl(
            path,
            [frame_record(0.0), frame_record(0.1), frame_record(0.2, drop="neck")],
        )
        with pytest.raises(SchemaError) as err:
            load_recording(path)
        assert err.value.frame == 2
        assert err.value.joint == "neck"
        assert "neck" in str(err.value) and "frame 2" in str(err.value)

    def test_non_increasing_timestamps(self, tmp_path):
        path = tmp_path / "r.jsonl"
        write_jsonl(path, [frame_record(0.0), frame_record(0.0)])
        with pytest.raises(OrderError) as err:
            load_recording(path)
        assert err.value.frame == 1

    def test_malformed_json_reports_line(self, tmp_path):
        path = tmp_path / "r.jsonl"
        path.write_text(json.dumps(frame_record(0.0)) + "\n{broken\n", encoding="utf-8")
        with pytest.raises(ParseError) as err:
            load_recording(path)
        assert err.value.line == 2

    def test_non_finite_coordinate_rejected(self, tmp_path):
        path = tmp_path / "r.jsonl"
        write_jsonl(path, [frame_record(0.0, override={"head": [0.0, None, 0.0]})])
        with pytest.raises(SchemaError):
            load_recording(path)

    def test_extra_joints_ignored(self, tmp_path):
        path = tmp_path / "r.jsonl"
        write_jsonl(
            path,
            [frame_record(0.0, override={"left_hip": [0, 0, 0], "torso": [1, 2, 3]})],
        )
        seq = load_recording(path)
        assert len(seq) == 1

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "r.jsonl"
        path.write_text("", encoding="utf-8")
        with pytest.raises(ParseError):
            load_recording(path)

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "r.jsonl"
        path.write_text(
            json.dumps(frame_record(0.0)) + "\n\n" + json.dumps(frame_record(0.1)) + "\n",
            encoding="utf-8",
        )
        assert len(load_recording(path)) == 2


class TestRoundTrip:
    def test_save_load_semantically_identical(self, tmp_path, rng):
        for seed in range(5):
            seq = generate_move("fork", n_frames=int(rng.integers(2, 40)), seed=seed)
            first = tmp_path / f"a{seed}.jsonl"
            save_recording(seq, first)
            loaded = load_recording(first, action_label=seq.action_label)
            second = tmp_path / f"b{seed}.jsonl"
            save_recording(loaded, second)
            reloaded = load_recording(second, action_label=seq.action_label)
            assert len(loaded) == len(reloaded) == len(seq)
            np.testing.assert_allclose(loaded.times, reloaded.times, atol=0)
            np.testing.assert_allclose(
                loaded.positions_array(), reloaded.positions_array(), atol=0
            )
            assert loaded.action_label == reloaded.action_label


class TestAngleCsv:
    def test_round_trip(self, tmp_path):
        seq = generate_move("teacup", n_frames=12, seed=1)
        traj = extract_trajectory(seq)
        path = tmp_path / "angles.csv"
        save_angle_csv(traj, path)
        back = load_angle_csv(path)
        assert back.side == "human"
        assert back.action_label == "teacup"
        np.testing.assert_allclose(back.angles, traj.angles, atol=1e-9)
        np.testing.assert_allclose(back.frame_times, traj.frame_times, atol=1e-9)

    def test_rejects_foreign_csv(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("a,b,c\n1,2,3\n4,5,6\n", encoding="utf-8")
        with pytest.raises(ParseError):
            load_angle_csv(path)
