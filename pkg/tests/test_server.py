import json
import threading
from http.client import HTTPConnection
from pathlib import Path

import pytest

from skelmimic import (
    NoiseDetectorConfig,
    detect_noisy_frames,
    generate_fixtures,
    generate_move,
    inject_jump,
    load_recording,
    save_recording,
)
from skelmimic.cli import main as cli_main
from skelmimic.server import create_server

SHARED_CASES = Path(__file__).resolve().parents[1] / "frontend" / "shared" / "annotation_cases.json"


@pytest.fixture(scope="module")
def api(tmp_path_factory):
    data_dir = tmp_path_factory.mktemp("data")
    generate_fixtures(data_dir, moves=("teacup", "ladle"), n_frames=40)
    noisy = inject_jump(generate_move("fork", n_frames=40, seed=1), [12])
    save_recording(noisy, data_dir / "noisy_fork.jsonl")
    server = create_server(data_dir, port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield server, data_dir
    server.shutdown()
    server.server_close()


def request(server, method, path, body=None):
    conn = HTTPConnection("127.0.0.1", server.server_address[1], timeout=10)
    payload = json.dumps(body) if body is not None else None
    conn.request(method, path, body=payload, headers={"Content-Type": "application/json"})
    resp = conn.getresponse()
    data = json.loads(resp.read() or b"null")
    conn.close()
    return resp.status, data


class TestReadEndpoints:
    def test_list_recordings(self, api):
        server, _ = api
        status, data = request(server, "GET", "/recordings")
        assert status == 200
        ids = {r["id"] for r in data["recordings"]}
        assert ids == {"teacup", "ladle", "noisy_fork"}
        for r in data["recordings"]:
            assert r["frames"] == 40

    def test_get_recording_frames(self, api):
        server, _ = api
        status, data = request(server, "GET", "/recordings/teacup")
        assert status == 200
        assert len(data["frames"]) == 40
        first = data["frames"][0]
        assert first["index"] == 0
        assert set(first["joints"]) == {
            "right_wrist", "right_elbow", "right_shoulder", "collar", "neck",
            "head", "left_shoulder", "left_elbow", "left_wrist",
        }

    def test_unknown_recording_404(self, api):
        server, _ = api
        status, data = request(server, "GET", "/recordings/ghost")
        assert status == 404
        status, _ = request(server, "GET", "/recordings/ghost/angles")
        assert status == 404

    def test_get_angles_matches_extraction(self, api):
        server, data_dir = api
        status, data = request(server, "GET", "/recordings/teacup/angles")
        assert status == 200
        assert data["angle_names"] == ["RE", "RSR", "RSP", "HP", "LSR", "LSP", "LE"]
        assert len(data["frames"]) == 40
        from skelmimic import extract_angles

        seq = load_recording(data_dir / "teacup.jsonl")
        direct = extract_angles(seq.frames[0])
        for j, name in enumerate(data["angle_names"]):
            assert data["frames"][0]["angles"][name] == pytest.approx(direct[j])

    def test_noise_endpoint_equals_detector(self, api):
        server, data_dir = api
        status, data = request(server, "GET", "/recordings/noisy_fork/noise?threshold=0.5")
        assert status == 200
        seq = load_recording(data_dir / "noisy_fork.jsonl")
        expected = sorted(detect_noisy_frames(seq, NoiseDetectorConfig(jump_threshold=0.5)))
        assert data["flagged"] == expected
        assert 12 in data["flagged"]


class TestAnnotations:
    def test_put_get_round_trip_with_versioning(self, api):
        server, _ = api
        ann = {
            "recording_id": "ladle",
            "segments": [{"action_label": "ladle", "start_frame": 0, "end_frame": 39}],
            "noisy_frames": [3],
            "provenance": "manual",
        }
        status, data = request(server, "PUT", "/recordings/ladle/annotations",
                               {"annotation": ann, "version": None})
        assert status == 200 and data["version"] == 1
        status, data = request(server, "GET", "/recordings/ladle/annotations")
        assert status == 200
        assert data["version"] == 1
        assert data["annotation"]["noisy_frames"] == [3]
        # stale token is rejected
        status, data = request(server, "PUT", "/recordings/ladle/annotations",
                               {"annotation": ann, "version": 0})
        assert status == 409
        assert data["current_version"] == 1
        # fresh token advances the version
        status, data = request(server, "PUT", "/recordings/ladle/annotations",
                               {"annotation": ann, "version": 1})
        assert status == 200 and data["version"] == 2

    def test_overlapping_segments_422(self, api):
        server, _ = api
        ann = {
            "recording_id": "teacup",
            "segments": [
                {"action_label": "a", "start_frame": 0, "end_frame": 20},
                {"action_label": "b", "start_frame": 20, "end_frame": 39},
            ],
            "noisy_frames": [],
            "provenance": "manual",
        }
        status, data = request(server, "PUT", "/recordings/teacup/annotations",
                               {"annotation": ann, "version": None})
        assert status == 422
        assert "segments overlap" in data["error"]

    def test_recording_id_mismatch_422(self, api):
        server, _ = api
        ann = {"recording_id": "other", "segments": [], "noisy_frames": [],
               "provenance": "manual"}
        status, data = request(server, "PUT", "/recordings/teacup/annotations",
                               {"annotation": ann, "version": None})
        assert status == 422
        assert "mismatch" in data["error"]

    def test_invalid_json_400(self, api):
        server, _ = api
        conn = HTTPConnection("127.0.0.1", server.server_address[1], timeout=10)
        conn.request("PUT", "/recordings/teacup/annotations", body="{nope",
                     headers={"Content-Type": "application/json"})
        resp = conn.getresponse()
        assert resp.status == 400
        conn.close()

    def test_shared_cases_parity(self, api):
        # the server must agree verdict-for-verdict with the shared fixture
        # file that the browser validator is also tested against
        server, _ = api
        doc = json.loads(SHARED_CASES.read_text(encoding="utf-8"))
        for case in doc["cases"]:
            status, data = request(
                server, "PUT", f"/recordings/{doc['recording_id']}/annotations",
                {"annotation": case["annotation"], "version": None},
            )
            if case["valid"]:
                assert status == 200, f"{case['name']}: expected accept, got {data}"
            else:
                assert status == 422, f"{case['name']}: expected 422, got {status}"
                assert case["reason_contains"] in data["error"], case["name"]


class TestRun:
    def test_post_run_returns_summary_and_exports(self, api):
        server, data_dir = api
        status, data = request(server, "POST", "/recordings/teacup/run",
                               {"mode": "open_loop", "use_annotations": False})
        assert status == 200
        assert data["summary"]["mode"] == "open_loop"
        assert data["summary"]["actions"][0]["label"] == "teacup"
        export_dir = Path(data["export_dir"])
        assert sorted(p.name for p in export_dir.iterdir()) == sorted(data["files"])

    def test_api_run_matches_cli_byte_for_byte(self, api, tmp_path):
        server, data_dir = api
        status, data = request(server, "POST", "/recordings/teacup/run",
                               {"use_annotations": False})
        assert status == 200
        cli_out = tmp_path / "cli_out"
        rc = cli_main(["run", str(data_dir / "teacup.jsonl"), "--out-dir", str(cli_out)])
        assert rc == 0
        api_dir = Path(data["export_dir"])
        api_files = sorted(p.name for p in api_dir.iterdir())
        cli_files = sorted(p.name for p in cli_out.iterdir())
        assert api_files == cli_files
        for name in api_files:
            assert (api_dir / name).read_bytes() == (cli_out / name).read_bytes(), name

    def test_bad_mode_422(self, api):
        server, _ = api
        status, _ = request(server, "POST", "/recordings/teacup/run", {"mode": "zigzag"})
        assert status == 422
