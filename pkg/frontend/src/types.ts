/** Shared types mirroring the annotator API's JSON documents. */

export interface Segment {
  action_label: string;
  start_frame: number;
  end_frame: number;
}

export type Provenance = "manual" | "detector" | "merged";

export interface AnnotationSet {
  recording_id: string;
  segments: Segment[];
  noisy_frames: number[];
  provenance: Provenance;
}

export interface JointPositions {
  [joint: string]: [number, number, number];
}

export interface RecordingFrame {
  index: number;
  t: number;
  joints: JointPositions;
}

export interface AngleFrame {
  index: number;
  t: number;
  angles: { [name: string]: number } | null;
  degenerate_joint?: string | null;
}

export interface RunSummary {
  mode: string;
  seed: number;
  actions: Array<{ label: string; frames: number; [k: string]: unknown }>;
  failures: Array<{ label: string; stage: string; reason: string }>;
}

export interface ErrorPoint {
  t: number;
  time: number;
  e_t: number;
  e_t_abs: number;
  e_t_std: number;
}

/** Tracked joints in index order (1-based ids in the recording format). */
export const JOINT_NAMES = [
  "right_wrist",
  "right_elbow",
  "right_shoulder",
  "collar",
  "neck",
  "head",
  "left_shoulder",
  "left_elbow",
  "left_wrist",
] as const;

export type JointName = (typeof JOINT_NAMES)[number];

/** The 8 skeleton links consumed by the angle definitions. */
export const SKELETON_LINKS: Array<[JointName, JointName]> = [
  ["right_wrist", "right_elbow"],
  ["right_elbow", "right_shoulder"],
  ["right_shoulder", "collar"],
  ["collar", "neck"],
  ["neck", "head"],
  ["collar", "left_shoulder"],
  ["left_shoulder", "left_elbow"],
  ["left_elbow", "left_wrist"],
];

export const ANGLE_NAMES = ["RE", "RSR", "RSP", "HP", "LSR", "LSP", "LE"] as const;

/** Joints to highlight when an angle is flagged as degenerate. */
export const ANGLE_JOINTS: { [angle: string]: JointName[] } = {
  RE: ["right_wrist", "right_elbow", "right_shoulder"],
  RSR: ["right_elbow", "right_shoulder", "collar"],
  RSP: ["right_shoulder", "right_elbow"],
  HP: ["collar", "neck", "head"],
  LSR: ["collar", "left_shoulder", "left_elbow"],
  LSP: ["left_shoulder", "left_elbow"],
  LE: ["left_shoulder", "left_elbow", "left_wrist"],
};
