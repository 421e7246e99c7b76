"""HTTP serve mode: the API behind the browser annotator.

Endpoints (JSON in and out):

    GET  /recordings                      list available recordings
    GET  /recordings/{id}                 frames as structured records
    GET  /recordings/{id}/angles          extracted human angles per frame
    GET  /recordings/{id}/noise           detector suggestions (?threshold=&window=)
    GET  /recordings/{id}/annotations     stored annotation + version token
    PUT  /recordings/{id}/annotations     store an annotation set
    POST /recordings/{id}/run             run the pipeline, return the summary

Recordings are ``{id}.jsonl`` files in the data directory. Annotations are
stored under ``annotations/{id}.json`` with a monotonically increasing
version token: a PUT carrying a stale token gets 409 so lost updates are
detected; writes are serialized by a lock (last write wins). Annotation
sets violating their invariants get 422 with the reason; unknown
recording ids get 404. Pipeline exports land in ``runs/{id}/`` inside the
data directory and are byte-stable, matching what the command-line ``run``
produces for the same inputs.

Responses carry permissive CORS headers so a separately served UI can
talk to the API during development; a built UI directory can also be
mounted at ``/ui/``.
"""

from __future__ import annotations

import json
import mimetypes
import shutil
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .annotations import AnnotationSet, AnnotationValidationError, NoiseDetectorConfig, detect_noisy_frames
from .config import ToolkitConfig
from .control import ControllerConfig
from .joints import ANGLE_NAMES, AngleJointId
from .pipeline import export_report, run_pipeline, summary_payload
from .recordings import load_recording
from .skeleton import DegenerateLinkError, extract_angles

__all__ = ["create_server", "serve"]

_MAX_BODY = 16 * 1024 * 1024


class _ApiError(Exception):
    def __init__(self, status: int, message: str, **extra):
        self.status = status
        self.payload = {"error": message, **extra}
        super().__init__(message)


class AnnotatorServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address, handler, data_dir: Path, config: ToolkitConfig, ui_dir=None):
        super().__init__(address, handler)
        self.data_dir = Path(data_dir)
        self.config = config
        self.ui_dir = Path(ui_dir) if ui_dir else None
        self.write_lock = threading.Lock()


class AnnotatorHandler(BaseHTTPRequestHandler):
    server: AnnotatorServer

    # -- plumbing ---------------------------------------------------------

    def log_message(self, format, *args):  # quiet by default
        pass

    def _send_json(self, status: int, payload) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self._cors()
        self.end_headers()
        self.wfile.write(body)

    def _cors(self) -> None:
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, PUT, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")

    def _read_body(self):
        length = int(self.headers.get("Content-Length") or 0)
        if length > _MAX_BODY:
            raise _ApiError(413, "request body too large")
        if length == 0:
            return None
        raw = self.rfile.read(length)
        try:
            return json.loads(raw)
        except json.JSONDecodeError as exc:
            raise _ApiError(400, f"invalid JSON body: {exc.msg}") from None

    # -- data access ------------------------------------------------------

    def _recording_path(self, rec_id: str) -> Path:
        if "/" in rec_id or rec_id in ("", ".", ".."):
            raise _ApiError(404, "unknown recording id")
        path = self.server.data_dir / f"{rec_id}.jsonl"
        if not path.is_file():
            raise _ApiError(404, "unknown recording id")
        return path

    def _load_sequence(self, rec_id: str):
        return load_recording(self._recording_path(rec_id))

    def _annotation_file(self, rec_id: str) -> Path:
        return self.server.data_dir / "annotations" / f"{rec_id}.json"

    def _load_annotation_doc(self, rec_id: str) -> dict:
        path = self._annotation_file(rec_id)
        if not path.is_file():
            return {"version": 0, "annotation": None}
        return json.loads(path.read_text(encoding="utf-8"))

    # -- routes -----------------------------------------------------------

    def _route(self, method: str) -> None:
        try:
            parsed = urlparse(self.path)
            parts = [p for p in parsed.path.split("/") if p]
            query = parse_qs(parsed.query)
            if method == "GET" and parts[:1] == ["ui"]:
                self._serve_ui(parts[1:])
                return
            if not parts or parts[0] != "recordings":
                raise _ApiError(404, "not found")
            if len(parts) == 1:
                if method != "GET":
                    raise _ApiError(405, "method not allowed")
                self._list_recordings()
                return
            rec_id = parts[1]
            tail = parts[2:]
            if not tail:
                if method != "GET":
                    raise _ApiError(405, "method not allowed")
                self._get_recording(rec_id)
            elif tail == ["angles"] and method == "GET":
                self._get_angles(rec_id)
            elif tail == ["noise"] and method == "GET":
                self._get_noise(rec_id, query)
            elif tail == ["annotations"] and method == "GET":
                self._get_annotations(rec_id)
            elif tail == ["annotations"] and method == "PUT":
                self._put_annotations(rec_id)
            elif tail == ["run"] and method == "POST":
                self._post_run(rec_id)
            else:
                raise _ApiError(404, "not found")
        except _ApiError as err:
            self._send_json(err.status, err.payload)
        except BrokenPipeError:
            pass
        except Exception as exc:  # surface anything unexpected as JSON
            self._send_json(500, {"error": f"{type(exc).__name__}: {exc}"})

    def do_GET(self):
        self._route("GET")

    def do_PUT(self):
        self._route("PUT")

    def do_POST(self):
        self._route("POST")

    def do_OPTIONS(self):
        self.send_response(204)
        self._cors()
        self.end_headers()

    # -- handlers ---------------------------------------------------------

    def _list_recordings(self) -> None:
        items = []
        for path in sorted(self.server.data_dir.glob("*.jsonl")):
            try:
                seq = load_recording(path)
            except ValueError:
                continue
            items.append(
                {
                    "id": path.stem,
                    "frames": len(seq),
                    "duration_s": float(seq.times[-1]),
                    "sample_rate_hint": seq.sample_rate_hint,
                }
            )
        self._send_json(200, {"recordings": items})

    def _get_recording(self, rec_id: str) -> None:
        seq = self._load_sequence(rec_id)
        frames = [
            {"index": i, "t": frame.timestamp, "joints": frame.to_mapping()}
            for i, frame in enumerate(seq.frames)
        ]
        self._send_json(200, {"id": rec_id, "frames": frames})

    def _get_angles(self, rec_id: str) -> None:
        seq = self._load_sequence(rec_id)
        frames = []
        for i, frame in enumerate(seq.frames):
            entry = {"index": i, "t": frame.timestamp}
            try:
                values = extract_angles(frame, limits=self.server.config.human_limits)
                entry["angles"] = {ANGLE_NAMES[j]: float(values[j]) for j in AngleJointId}
            except DegenerateLinkError as exc:
                entry["angles"] = None
                entry["degenerate_joint"] = exc.joint.name if exc.joint else None
            frames.append(entry)
        self._send_json(200, {"angle_names": list(ANGLE_NAMES), "frames": frames})

    def _get_noise(self, rec_id: str, query: dict) -> None:
        seq = self._load_sequence(rec_id)
        base = self.server.config.detector
        try:
            cfg = NoiseDetectorConfig(
                jump_threshold=float(query.get("threshold", [base.jump_threshold])[0]),
                per_joint=query.get("per_joint", [str(base.per_joint)])[0].lower()
                not in ("0", "false"),
                window=int(query.get("window", [base.window])[0]),
            )
        except ValueError as exc:
            raise _ApiError(422, str(exc)) from None
        flagged = sorted(detect_noisy_frames(seq, cfg))
        self._send_json(
            200,
            {"threshold": cfg.jump_threshold, "window": cfg.window, "flagged": flagged},
        )

    def _get_annotations(self, rec_id: str) -> None:
        self._recording_path(rec_id)
        self._send_json(200, self._load_annotation_doc(rec_id))

    def _put_annotations(self, rec_id: str) -> None:
        seq = self._load_sequence(rec_id)
        body = self._read_body()
        if not isinstance(body, dict):
            raise _ApiError(400, "body must be a JSON object")
        raw = body.get("annotation", body)
        client_version = body.get("version") if "annotation" in body else None
        try:
            ann = AnnotationSet.from_dict(raw)
            if ann.recording_id != rec_id:
                raise AnnotationValidationError(
                    f"recording id mismatch: {ann.recording_id!r} != {rec_id!r}"
                )
            ann.validate(len(seq))
        except AnnotationValidationError as exc:
            raise _ApiError(422, str(exc)) from None
        with self.server.write_lock:
            current = self._load_annotation_doc(rec_id)["version"]
            if client_version is not None and int(client_version) != current:
                raise _ApiError(
                    409, "version conflict", current_version=current
                )
            doc = {"version": current + 1, "annotation": ann.to_dict()}
            path = self._annotation_file(rec_id)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(json.dumps(doc, indent=2, sort_keys=True), encoding="utf-8")
        self._send_json(200, {"version": current + 1})

    def _post_run(self, rec_id: str) -> None:
        seq = self._load_sequence(rec_id)
        body = self._read_body() or {}
        if not isinstance(body, dict):
            raise _ApiError(400, "body must be a JSON object")
        cfg = self.server.config
        mode = body.get("mode", "closed_loop")
        if mode not in ("closed_loop", "open_loop"):
            raise _ApiError(422, f"unknown mode {mode!r}")
        controller = cfg.controller
        overrides = {
            k: body[k]
            for k in ("kp", "ki", "kd", "epsilon", "max_iters_per_setpoint")
            if k in body
        }
        if overrides:
            try:
                controller = ControllerConfig.from_dict({**controller.to_dict(), **overrides})
            except ValueError as exc:
                raise _ApiError(422, str(exc)) from None
        annotations = None
        if body.get("use_annotations", True):
            doc = self._load_annotation_doc(rec_id)
            if doc["annotation"] is not None:
                annotations = AnnotationSet.from_dict(doc["annotation"])
        detector = cfg.detector if body.get("detect_noise", False) else None
        report = run_pipeline(
            seq,
            annotations,
            human_limits=cfg.human_limits,
            robot=cfg.robot,
            controller=controller,
            mode=mode,
            detector=detector,
            guard=bool(body.get("guard", cfg.guard)),
            plant=cfg.plant,
            seed=int(body.get("seed", 0)),
        )
        export_dir = self.server.data_dir / "runs" / rec_id
        if export_dir.exists():
            shutil.rmtree(export_dir)
        files = export_report(report, export_dir)
        series = {
            run.label: [
                {
                    "t": t,
                    "time": float(run.trace.frame_times[t]),
                    "e_t": float(run.trace.e_t[t]),
                    "e_t_abs": float(run.trace.e_t_abs[t]),
                    "e_t_std": float(run.trace.e_t_std[t]),
                }
                for t in range(run.trace.n_frames)
            ]
            for run in report.actions
        }
        self._send_json(
            200,
            {
                "summary": summary_payload(report),
                "series": series,
                "export_dir": str(export_dir),
                "files": [f.name for f in files],
            },
        )

    # -- static UI --------------------------------------------------------

    def _serve_ui(self, parts: list[str]) -> None:
        if self.server.ui_dir is None:
            raise _ApiError(404, "no UI directory mounted")
        rel = "/".join(parts) or "index.html"
        target = (self.server.ui_dir / rel).resolve()
        if not str(target).startswith(str(self.server.ui_dir.resolve())) or not target.is_file():
            raise _ApiError(404, "not found")
        body = target.read_bytes()
        ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self._cors()
        self.end_headers()
        self.wfile.write(body)


def create_server(
    data_dir,
    port: int = 0,
    host: str = "127.0.0.1",
    config: ToolkitConfig | None = None,
    ui_dir=None,
) -> AnnotatorServer:
    """Build (but do not start) the annotator API server; port 0 picks a free port."""
    data_dir = Path(data_dir)
    if not data_dir.is_dir():
        raise FileNotFoundError(f"data directory {data_dir} does not exist")
    return AnnotatorServer(
        (host, port),
        AnnotatorHandler,
        data_dir=data_dir,
        config=config or ToolkitConfig(),
        ui_dir=ui_dir,
    )


def serve(port, data_dir, host: str = "127.0.0.1", config=None, ui_dir=None) -> None:
    """Run the annotator API server until interrupted."""
    server = create_server(data_dir, port=port, host=host, config=config, ui_dir=ui_dir)
    bound_port = server.server_address[1]
    print(f"serving {Path(data_dir).resolve()} on http://{host}:{bound_port}")
    if ui_dir:
        print(f"UI mounted at http://{host}:{bound_port}/ui/")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
