/**
 * Annotation session state: the draft being edited, detector suggestions,
 * cursor position and the optimistic-concurrency version token.
 *
 * Scrubbing is read-only (viewing never mutates the draft). Every mutation
 * is validated inline and rejected with a reason instead of corrupting the
 * draft, and `save()` re-validates the whole draft before the PUT, so the
 * client never submits an annotation set the server would reject as
 * invalid.
 */

import type { ApiClient, RunResult, SaveResult } from "./api";
import type { AngleFrame, AnnotationSet, RecordingFrame } from "./types";
import { segmentProblem, validateAnnotation } from "./validation";

export interface SessionSnapshot {
  recordingId: string;
  cursorFrame: number;
  draft: AnnotationSet;
  detectorSuggestions: number[];
  dirty: boolean;
  versionToken: number;
}

export class AnnotationSession {
  recordingId: string;
  nFrames = 0;
  frames: RecordingFrame[] = [];
  angles: AngleFrame[] = [];
  cursorFrame = 0;
  draft: AnnotationSet;
  detectorSuggestions: Set<number> = new Set();
  dirty = false;
  versionToken = 0;
  lastRun: RunResult | null = null;

  constructor(
    private api: ApiClient,
    recordingId: string,
  ) {
    this.recordingId = recordingId;
    this.draft = {
      recording_id: recordingId,
      segments: [],
      noisy_frames: [],
      provenance: "manual",
    };
  }

  async load(): Promise<void> {
    this.frames = await this.api.getFrames(this.recordingId);
    this.nFrames = this.frames.length;
    this.angles = await this.api.getAngles(this.recordingId);
    const stored = await this.api.getAnnotations(this.recordingId);
    this.versionToken = stored.version;
    if (stored.annotation) {
      this.draft = stored.annotation;
    }
    this.detectorSuggestions = new Set(await this.api.getNoiseSuggestions(this.recordingId));
    this.dirty = false;
  }

  snapshot(): SessionSnapshot {
    return {
      recordingId: this.recordingId,
      cursorFrame: this.cursorFrame,
      draft: structuredClone(this.draft),
      detectorSuggestions: [...this.detectorSuggestions].sort((a, b) => a - b),
      dirty: this.dirty,
      versionToken: this.versionToken,
    };
  }

  /** Move the cursor; clamped, never mutates the draft. */
  scrubTo(frame: number): number {
    this.cursorFrame = Math.min(Math.max(Math.trunc(frame), 0), Math.max(this.nFrames - 1, 0));
    return this.cursorFrame;
  }

  scrubBy(delta: number): number {
    return this.scrubTo(this.cursorFrame + delta);
  }

  /** Mark frames [from, to] as noisy; returns a reason when refused. */
  markNoisy(from: number, to: number): string | null {
    const lo = Math.min(from, to);
    const hi = Math.max(from, to);
    if (lo < 0 || hi >= this.nFrames) {
      return `noisy frames out of bounds for ${this.nFrames} frames`;
    }
    const next = new Set(this.draft.noisy_frames);
    for (let i = lo; i <= hi; i++) next.add(i);
    this.draft.noisy_frames = [...next].sort((a, b) => a - b);
    this.dirty = true;
    return null;
  }

  unmarkNoisy(from: number, to: number): void {
    const lo = Math.min(from, to);
    const hi = Math.max(from, to);
    this.draft.noisy_frames = this.draft.noisy_frames.filter((i) => i < lo || i > hi);
    this.dirty = true;
  }

  /** Add or replace the segment with this label; returns a reason when refused. */
  setSegment(start: number, end: number, label: string): string | null {
    if (!label) {
      return "segment needs a non-empty label";
    }
    const candidate = { action_label: label, start_frame: start, end_frame: end };
    const problem = segmentProblem(this.draft.segments, candidate, this.nFrames);
    if (problem) {
      return problem;
    }
    this.draft.segments = [
      ...this.draft.segments.filter((s) => s.action_label !== label),
      candidate,
    ].sort((a, b) => a.start_frame - b.start_frame);
    this.dirty = true;
    return null;
  }

  removeSegment(label: string): void {
    this.draft.segments = this.draft.segments.filter((s) => s.action_label !== label);
    this.dirty = true;
  }

  /** Merge all detector suggestions into the noisy mask. */
  acceptSuggestions(): void {
    if (this.detectorSuggestions.size === 0) return;
    const next = new Set([...this.draft.noisy_frames, ...this.detectorSuggestions]);
    this.draft.noisy_frames = [...next].sort((a, b) => a - b);
    this.draft.provenance = "merged";
    this.dirty = true;
  }

  validateDraft(): string | null {
    return validateAnnotation(this.draft, this.nFrames);
  }

  /**
   * Persist the draft. Pre-validates (never sends an invalid document) and
   * carries the version token; a conflict means someone else saved first
   * and the caller should reload.
   */
  async save(): Promise<SaveResult> {
    const problem = this.validateDraft();
    if (problem) {
      return { ok: false, reason: problem };
    }
    const result = await this.api.putAnnotations(
      this.recordingId,
      this.draft,
      this.versionToken > 0 ? this.versionToken : null,
    );
    if (result.ok && result.version !== undefined) {
      this.versionToken = result.version;
      this.dirty = false;
    }
    return result;
  }

  /** Save if needed, run the pipeline, keep the error series for charting. */
  async runAndPreview(options: Record<string, unknown> = {}): Promise<RunResult> {
    if (this.dirty) {
      const saved = await this.save();
      if (!saved.ok) {
        throw new Error(saved.reason ?? "save failed");
      }
    }
    this.lastRun = await this.api.run(this.recordingId, options);
    return this.lastRun;
  }
}
