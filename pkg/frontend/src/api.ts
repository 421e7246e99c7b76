/** Thin typed client for the annotator HTTP API. */

import type { AngleFrame, AnnotationSet, ErrorPoint, RecordingFrame, RunSummary } from "./types";

export interface RecordingInfo {
  id: string;
  frames: number;
  duration_s: number;
  sample_rate_hint: number | null;
}

export interface SaveResult {
  ok: boolean;
  version?: number;
  conflict?: boolean;
  currentVersion?: number;
  reason?: string;
}

export interface RunResult {
  summary: RunSummary;
  series: { [label: string]: ErrorPoint[] };
  export_dir: string;
  files: string[];
}

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

async function asJson(resp: Response): Promise<any> {
  const data = await resp.json().catch(() => ({}));
  if (!resp.ok) {
    throw new ApiError(resp.status, data.error ?? resp.statusText);
  }
  return data;
}

export class ApiClient {
  constructor(private base: string = "") {}

  async listRecordings(): Promise<RecordingInfo[]> {
    const data = await asJson(await fetch(`${this.base}/recordings`));
    return data.recordings;
  }

  async getFrames(id: string): Promise<RecordingFrame[]> {
    const data = await asJson(await fetch(`${this.base}/recordings/${id}`));
    return data.frames;
  }

  async getAngles(id: string): Promise<AngleFrame[]> {
    const data = await asJson(await fetch(`${this.base}/recordings/${id}/angles`));
    return data.frames;
  }

  async getNoiseSuggestions(id: string, threshold?: number): Promise<number[]> {
    const query = threshold !== undefined ? `?threshold=${threshold}` : "";
    const data = await asJson(await fetch(`${this.base}/recordings/${id}/noise${query}`));
    return data.flagged;
  }

  async getAnnotations(
    id: string,
  ): Promise<{ version: number; annotation: AnnotationSet | null }> {
    return asJson(await fetch(`${this.base}/recordings/${id}/annotations`));
  }

  async putAnnotations(
    id: string,
    annotation: AnnotationSet,
    version: number | null,
  ): Promise<SaveResult> {
    const resp = await fetch(`${this.base}/recordings/${id}/annotations`, {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ annotation, version }),
    });
    const data = await resp.json().catch(() => ({}));
    if (resp.status === 409) {
      return { ok: false, conflict: true, currentVersion: data.current_version };
    }
    if (!resp.ok) {
      return { ok: false, reason: data.error ?? resp.statusText };
    }
    return { ok: true, version: data.version };
  }

  async run(id: string, options: Record<string, unknown> = {}): Promise<RunResult> {
    const resp = await fetch(`${this.base}/recordings/${id}/run`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(options),
    });
    return asJson(resp);
  }
}
