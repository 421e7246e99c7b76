/**
 * Client-side annotation validation.
 *
 * Mirrors the server's rules message-for-message (the parity test pins
 * both against the same fixture file), so a draft that passes here is
 * never rejected by the server with 422.
 */

import type { AnnotationSet, Segment } from "./types";

const PROVENANCES = ["manual", "detector", "merged"];

/** First violated rule as a human-readable reason, or null when valid. */
export function validateAnnotation(ann: AnnotationSet, nFrames: number): string | null {
  if (!PROVENANCES.includes(ann.provenance)) {
    return `provenance must be one of ${PROVENANCES.join(", ")}, got '${ann.provenance}'`;
  }
  for (const seg of ann.segments) {
    if (!Number.isInteger(seg.start_frame) || !Number.isInteger(seg.end_frame)) {
      return `segment '${seg.action_label}': frame indices must be integers`;
    }
    if (seg.start_frame > seg.end_frame) {
      return `segment '${seg.action_label}': start ${seg.start_frame} > end ${seg.end_frame}`;
    }
    if (seg.start_frame < 0 || seg.end_frame >= nFrames) {
      return (
        `segment '${seg.action_label}' [${seg.start_frame}, ${seg.end_frame}] ` +
        `out of bounds for ${nFrames} frames`
      );
    }
  }
  const ordered = [...ann.segments].sort((a, b) => a.start_frame - b.start_frame);
  for (let i = 1; i < ordered.length; i++) {
    const prev = ordered[i - 1];
    const next = ordered[i];
    if (next.start_frame <= prev.end_frame) {
      return (
        `segments overlap: '${prev.action_label}' ends at ${prev.end_frame}, ` +
        `'${next.action_label}' starts at ${next.start_frame}`
      );
    }
  }
  const bad = ann.noisy_frames.filter((i) => i < 0 || i >= nFrames);
  if (bad.length > 0) {
    return `noisy frames out of bounds for ${nFrames} frames: ${[...bad].sort((a, b) => a - b)}`;
  }
  return null;
}

/** Whether adding/replacing `candidate` keeps the segment set valid. */
export function segmentProblem(
  segments: Segment[],
  candidate: Segment,
  nFrames: number,
): string | null {
  const others = segments.filter((s) => s.action_label !== candidate.action_label);
  return validateAnnotation(
    {
      recording_id: "draft",
      segments: [...others, candidate],
      noisy_frames: [],
      provenance: "manual",
    },
    nFrames,
  );
}
