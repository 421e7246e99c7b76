/**
 * Pure scene computation for the skeleton viewer and the error chart.
 *
 * Rendering is split in two: these functions turn data into drawable
 * primitives (testable without a DOM), and render.ts paints primitives
 * onto a canvas.
 *
 * View convention: front view onto the xy-plane of the recording frame
 * (x points down, y is lateral), so screen-x = lateral position and
 * screen-y = vertical position; depth (z) is encoded as marker size.
 */

import type { AngleFrame, RecordingFrame } from "./types";
import { ANGLE_JOINTS, JOINT_NAMES, SKELETON_LINKS } from "./types";

export interface JointMarker {
  name: string;
  x: number;
  y: number;
  radius: number;
  highlighted: boolean;
}

export interface LinkLine {
  from: string;
  to: string;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
}

export interface SkeletonScene {
  joints: JointMarker[];
  links: LinkLine[];
  angleList: Array<{ name: string; value: number | null }>;
  noisyBadge: boolean;
  degenerateJoint: string | null;
}

export interface SceneOptions {
  width: number;
  height: number;
  noisy?: boolean;
  angleFrame?: AngleFrame | null;
  margin?: number;
}

export function skeletonScene(frame: RecordingFrame, options: SceneOptions): SkeletonScene {
  const margin = options.margin ?? 30;
  const names = JOINT_NAMES.filter((n) => frame.joints[n] !== undefined);
  const ys = names.map((n) => frame.joints[n][1]); // lateral
  const xs = names.map((n) => frame.joints[n][0]); // down
  const zs = names.map((n) => frame.joints[n][2]); // depth
  const spanY = Math.max(...ys) - Math.min(...ys) || 1;
  const spanX = Math.max(...xs) - Math.min(...xs) || 1;
  const scale = Math.min(
    (options.width - 2 * margin) / spanY,
    (options.height - 2 * margin) / spanX,
  );
  const midY = (Math.max(...ys) + Math.min(...ys)) / 2;
  const midX = (Math.max(...xs) + Math.min(...xs)) / 2;
  const zMin = Math.min(...zs);
  const zSpan = Math.max(...zs) - zMin || 1;

  const toScreen = (joint: [number, number, number]) => ({
    x: options.width / 2 + (joint[1] - midY) * scale,
    y: options.height / 2 + (joint[0] - midX) * scale,
    radius: 4 + 6 * ((joint[2] - zMin) / zSpan),
  });

  const angleFrame = options.angleFrame ?? null;
  const degenerate = angleFrame?.degenerate_joint ?? null;
  const highlight = new Set(degenerate ? ANGLE_JOINTS[degenerate] ?? [] : []);

  const joints: JointMarker[] = names.map((name) => {
    const p = toScreen(frame.joints[name]);
    return { name, ...p, highlighted: highlight.has(name) };
  });
  const byName = new Map(joints.map((j) => [j.name, j]));

  const links: LinkLine[] = [];
  for (const [from, to] of SKELETON_LINKS) {
    const a = byName.get(from);
    const b = byName.get(to);
    if (a && b) {
      links.push({ from, to, x1: a.x, y1: a.y, x2: b.x, y2: b.y });
    }
  }

  const angleList: Array<{ name: string; value: number | null }> = angleFrame
    ? Object.entries(angleFrame.angles ?? {}).map(([name, value]) => ({ name, value }))
    : [];
  if (angleFrame && angleFrame.angles === null) {
    for (const name of ["RE", "RSR", "RSP", "HP", "LSR", "LSP", "LE"]) {
      angleList.push({ name, value: null });
    }
  }

  return {
    joints,
    links,
    angleList,
    noisyBadge: options.noisy ?? false,
    degenerateJoint: degenerate,
  };
}

export interface ChartScene {
  line: Array<{ x: number; y: number }>;
  band: Array<{ x: number; y: number }>;
  zeroY: number;
  xTicks: Array<{ x: number; label: string }>;
  yTicks: Array<{ y: number; label: string }>;
}

/** t vs e_t polyline plus the +-std band polygon, in screen coordinates. */
export function errorChartScene(
  points: Array<{ t: number; e_t: number; e_t_std: number }>,
  width: number,
  height: number,
  margin = 28,
): ChartScene {
  if (points.length === 0) {
    return { line: [], band: [], zeroY: height / 2, xTicks: [], yTicks: [] };
  }
  const tMax = Math.max(...points.map((p) => p.t)) || 1;
  const lows = points.map((p) => p.e_t - p.e_t_std);
  const highs = points.map((p) => p.e_t + p.e_t_std);
  const yMin = Math.min(0, ...lows);
  const yMax = Math.max(0, ...highs);
  const ySpan = yMax - yMin || 1;
  const sx = (t: number) => margin + (t / tMax) * (width - 2 * margin);
  const sy = (v: number) => height - margin - ((v - yMin) / ySpan) * (height - 2 * margin);

  const line = points.map((p) => ({ x: sx(p.t), y: sy(p.e_t) }));
  const band = [
    ...points.map((p) => ({ x: sx(p.t), y: sy(p.e_t + p.e_t_std) })),
    ...[...points].reverse().map((p) => ({ x: sx(p.t), y: sy(p.e_t - p.e_t_std) })),
  ];
  const xTicks = [0, Math.round(tMax / 2), tMax].map((t) => ({
    x: sx(t),
    label: String(t),
  }));
  const yTicks = [yMin, 0, yMax].map((v) => ({ y: sy(v), label: v.toFixed(1) }));
  return { line, band, zeroY: sy(0), xTicks, yTicks };
}
