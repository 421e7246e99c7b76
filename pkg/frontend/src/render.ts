/** Canvas painting of the pure scenes from scene.ts. */

import type { ChartScene, SkeletonScene } from "./scene";

export function paintSkeleton(ctx: CanvasRenderingContext2D, scene: SkeletonScene): void {
  const { width, height } = ctx.canvas;
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#fafafa";
  ctx.fillRect(0, 0, width, height);

  ctx.strokeStyle = "#4a6fa5";
  ctx.lineWidth = 3;
  for (const link of scene.links) {
    ctx.beginPath();
    ctx.moveTo(link.x1, link.y1);
    ctx.lineTo(link.x2, link.y2);
    ctx.stroke();
  }

  for (const joint of scene.joints) {
    ctx.beginPath();
    ctx.arc(joint.x, joint.y, joint.radius, 0, 2 * Math.PI);
    ctx.fillStyle = joint.highlighted ? "#d1342f" : "#22303f";
    ctx.fill();
    if (joint.highlighted) {
      ctx.strokeStyle = "#d1342f";
      ctx.lineWidth = 2;
      ctx.beginPath();
      ctx.arc(joint.x, joint.y, joint.radius + 4, 0, 2 * Math.PI);
      ctx.stroke();
    }
  }

  if (scene.noisyBadge) {
    ctx.fillStyle = "#d1342f";
    ctx.fillRect(8, 8, 96, 24);
    ctx.fillStyle = "#fff";
    ctx.font = "bold 13px sans-serif";
    ctx.fillText("NOISY FRAME", 14, 25);
  }
  if (scene.degenerateJoint) {
    ctx.fillStyle = "#b45309";
    ctx.font = "bold 12px sans-serif";
    ctx.fillText(`degenerate: ${scene.degenerateJoint}`, 8, 48);
  }
}

export function paintChart(ctx: CanvasRenderingContext2D, scene: ChartScene): void {
  const { width, height } = ctx.canvas;
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#fff";
  ctx.fillRect(0, 0, width, height);

  if (scene.band.length > 0) {
    ctx.beginPath();
    ctx.moveTo(scene.band[0].x, scene.band[0].y);
    for (const p of scene.band.slice(1)) ctx.lineTo(p.x, p.y);
    ctx.closePath();
    ctx.fillStyle = "rgba(74, 111, 165, 0.25)";
    ctx.fill();
  }

  ctx.strokeStyle = "#999";
  ctx.setLineDash([4, 4]);
  ctx.beginPath();
  ctx.moveTo(0, scene.zeroY);
  ctx.lineTo(width, scene.zeroY);
  ctx.stroke();
  ctx.setLineDash([]);

  if (scene.line.length > 0) {
    ctx.beginPath();
    ctx.moveTo(scene.line[0].x, scene.line[0].y);
    for (const p of scene.line.slice(1)) ctx.lineTo(p.x, p.y);
    ctx.strokeStyle = "#1d4ed8";
    ctx.lineWidth = 2;
    ctx.stroke();
  }

  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  for (const tick of scene.xTicks) ctx.fillText(tick.label, tick.x - 6, height - 6);
  for (const tick of scene.yTicks) ctx.fillText(tick.label, 2, tick.y + 4);
}
