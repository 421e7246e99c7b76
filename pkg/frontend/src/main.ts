/**
 * DOM wiring for the annotator.
 *
 * Keyboard: left/right arrows scrub one frame, shift+arrows ten.
 * Drag across the timeline to mark a noisy range (alt+drag to unmark).
 * Buttons: accept detector suggestions, add segment from the range
 * inputs, save (PUT with version token), run & preview (chart of t vs
 * E_t with a +-std band).
 */

import { ApiClient } from "./api";
import { errorChartScene, skeletonScene } from "./scene";
import { paintChart, paintSkeleton } from "./render";
import { AnnotationSession } from "./state";

const api = new ApiClient("");
let session: AnnotationSession | null = null;

const el = <T extends HTMLElement>(id: string) => document.getElementById(id) as T;

const recordingSelect = el<HTMLSelectElement>("recording");
const skeletonCanvas = el<HTMLCanvasElement>("skeleton");
const chartCanvas = el<HTMLCanvasElement>("chart");
const timeline = el<HTMLCanvasElement>("timeline");
const frameLabel = el<HTMLSpanElement>("frame-label");
const statusLine = el<HTMLSpanElement>("status");
const angleTable = el<HTMLTableElement>("angles");

function status(message: string, isError = false): void {
  statusLine.textContent = message;
  statusLine.className = isError ? "error" : "";
}

function drawTimeline(): void {
  if (!session) return;
  const ctx = timeline.getContext("2d")!;
  const { width, height } = timeline;
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#eee";
  ctx.fillRect(0, 0, width, height);
  const w = width / Math.max(session.nFrames, 1);
  for (const segment of session.draft.segments) {
    ctx.fillStyle = "rgba(34, 197, 94, 0.35)";
    ctx.fillRect(segment.start_frame * w, 0, (segment.end_frame - segment.start_frame + 1) * w, height);
  }
  for (const idx of session.detectorSuggestions) {
    ctx.fillStyle = "rgba(245, 158, 11, 0.8)";
    ctx.fillRect(idx * w, height * 0.55, Math.max(w, 2), height * 0.45);
  }
  for (const idx of session.draft.noisy_frames) {
    ctx.fillStyle = "rgba(209, 52, 47, 0.9)";
    ctx.fillRect(idx * w, 0, Math.max(w, 2), height * 0.5);
  }
  ctx.fillStyle = "#1d4ed8";
  ctx.fillRect(session.cursorFrame * w, 0, Math.max(w, 2), height);
}

function drawFrame(): void {
  if (!session || session.frames.length === 0) return;
  const frame = session.frames[session.cursorFrame];
  const angleFrame = session.angles[session.cursorFrame] ?? null;
  const noisy =
    session.draft.noisy_frames.includes(session.cursorFrame) ||
    session.detectorSuggestions.has(session.cursorFrame);
  const scene = skeletonScene(frame, {
    width: skeletonCanvas.width,
    height: skeletonCanvas.height,
    noisy,
    angleFrame,
  });
  paintSkeleton(skeletonCanvas.getContext("2d")!, scene);
  frameLabel.textContent = `frame ${session.cursorFrame + 1}/${session.nFrames} (t=${frame.t.toFixed(3)} s)`;
  angleTable.innerHTML =
    "<tr><th>angle</th><th>deg</th></tr>" +
    scene.angleList
      .map((a) => `<tr><td>${a.name}</td><td>${a.value === null ? "—" : a.value.toFixed(1)}</td></tr>`)
      .join("");
  drawTimeline();
}

async function openRecording(id: string): Promise<void> {
  session = new AnnotationSession(api, id);
  await session.load();
  session.scrubTo(0);
  status(`loaded ${id}: ${session.nFrames} frames, ` +
    `${session.detectorSuggestions.size} detector suggestions`);
  drawFrame();
}

async function init(): Promise<void> {
  const recordings = await api.listRecordings();
  recordingSelect.innerHTML = recordings
    .map((r) => `<option value="${r.id}">${r.id} (${r.frames})</option>`)
    .join("");
  recordingSelect.onchange = () => void openRecording(recordingSelect.value);
  if (recordings.length > 0) {
    await openRecording(recordings[0].id);
  } else {
    status("no recordings in the data directory", true);
  }
}

document.addEventListener("keydown", (ev) => {
  if (!session) return;
  const step = ev.shiftKey ? 10 : 1;
  if (ev.key === "ArrowRight") {
    session.scrubBy(step);
    drawFrame();
  } else if (ev.key === "ArrowLeft") {
    session.scrubBy(-step);
    drawFrame();
  }
});

let dragStart: number | null = null;
const frameAt = (ev: MouseEvent) => {
  const rect = timeline.getBoundingClientRect();
  const frac = (ev.clientX - rect.left) / rect.width;
  return Math.min(Math.max(Math.floor(frac * (session?.nFrames ?? 1)), 0), (session?.nFrames ?? 1) - 1);
};
timeline.addEventListener("mousedown", (ev) => {
  dragStart = frameAt(ev);
});
timeline.addEventListener("mousemove", (ev) => {
  if (dragStart === null || !session) return;
  session.scrubTo(frameAt(ev));
  drawFrame();
});
timeline.addEventListener("mouseup", (ev) => {
  if (dragStart === null || !session) return;
  const end = frameAt(ev);
  if (end === dragStart) {
    session.scrubTo(end);
  } else if (ev.altKey) {
    session.unmarkNoisy(dragStart, end);
    status(`unmarked frames ${Math.min(dragStart, end)}..${Math.max(dragStart, end)}`);
  } else {
    const problem = session.markNoisy(dragStart, end);
    status(problem ?? `marked frames ${Math.min(dragStart, end)}..${Math.max(dragStart, end)} noisy`, !!problem);
  }
  dragStart = null;
  drawFrame();
});

el<HTMLButtonElement>("accept-suggestions").onclick = () => {
  if (!session) return;
  session.acceptSuggestions();
  status(`accepted detector suggestions (${session.draft.noisy_frames.length} noisy frames)`);
  drawFrame();
};

el<HTMLButtonElement>("add-segment").onclick = () => {
  if (!session) return;
  const start = Number(el<HTMLInputElement>("seg-start").value);
  const end = Number(el<HTMLInputElement>("seg-end").value);
  const label = el<HTMLInputElement>("seg-label").value.trim();
  const problem = session.setSegment(start, end, label);
  status(problem ?? `segment '${label}' set to [${start}, ${end}]`, !!problem);
  drawTimeline();
};

el<HTMLButtonElement>("save").onclick = async () => {
  if (!session) return;
  const result = await session.save();
  if (result.ok) {
    status(`saved (version ${result.version})`);
  } else if (result.conflict) {
    status(`version conflict: someone saved version ${result.currentVersion}; reload to continue`, true);
  } else {
    status(`not saved: ${result.reason}`, true);
  }
};

el<HTMLButtonElement>("run-preview").onclick = async () => {
  if (!session) return;
  status("running pipeline...");
  try {
    const result = await session.runAndPreview({ mode: "closed_loop" });
    const labels = Object.keys(result.series);
    const first = labels[0];
    if (first) {
      const scene = errorChartScene(result.series[first], chartCanvas.width, chartCanvas.height);
      paintChart(chartCanvas.getContext("2d")!, scene);
    }
    const stats = result.summary.actions
      .map((a) => `${a.label}: ${a.frames} frames`)
      .join(", ");
    status(`run complete (${stats}); chart shows '${first}'`);
  } catch (err) {
    status(`run failed: ${err}`, true);
  }
};

void init();
