/**
 * Pure mapping from a recognition response to drawable overlay shapes.
 *
 * The client never recomputes pipeline math: markers and token spans come
 * straight from the server report. The server smooths strokes before
 * segmenting, which can only drop (never add) points, so a reported point
 * index is mapped onto the sent points by position — exact when the counts
 * match (the usual case), clamped to the last sent point otherwise.
 */

import type { RecognizeResponse } from "./client.js";
import { type Box, toCanvas } from "./geometry.js";

export interface CriticalPointMarker {
  stroke: number;
  /** The server-reported point index (what the live-loop contract checks). */
  index: number;
  kind: string;
  x: number;
  y: number;
}

export interface TokenSegmentShape {
  stroke: number;
  token: number;
  start: number;
  end: number;
  color: string;
  points: { x: number; y: number }[];
}

export interface ClassScore {
  label: string;
  score: number;
}

export const TOKEN_PALETTE = [
  "#e4572e",
  "#17bebb",
  "#ffc914",
  "#2e282a",
  "#76b041",
  "#9b5de5",
  "#f15bb5",
  "#00a5cf",
] as const;

function mathPointAt(payload: number[][][], stroke: number, index: number, box: Box) {
  const points = payload[stroke];
  if (points === undefined || points.length === 0) return null;
  const arr = points[Math.min(Math.max(index, 0), points.length - 1)]!;
  return toCanvas({ x: arr[0]!, y: arr[1]! }, box);
}

/** Canvas positions for the server-reported critical points. */
export function criticalPointMarkers(
  response: RecognizeResponse,
  payload: number[][][],
  box: Box,
): CriticalPointMarker[] {
  const markers: CriticalPointMarker[] = [];
  for (const report of response.strokes) {
    for (const cp of report.critical_points) {
      const pos = mathPointAt(payload, report.stroke, cp.index, box);
      if (pos === null) continue;
      markers.push({ stroke: report.stroke, index: cp.index, kind: cp.kind, x: pos.x, y: pos.y });
    }
  }
  return markers;
}

/** Colored canvas polylines covering each token's point range. */
export function tokenSegments(
  response: RecognizeResponse,
  payload: number[][][],
  box: Box,
): TokenSegmentShape[] {
  const shapes: TokenSegmentShape[] = [];
  let tokenIndex = 0;
  for (const report of response.strokes) {
    const sent = payload[report.stroke] ?? [];
    for (let t = 0; t < report.tokens.length; t += 1) {
      const [start, end] = report.tokens[t]!;
      const clampedEnd = Math.min(end, sent.length - 1);
      const points = [];
      for (let i = start; i <= clampedEnd; i += 1) {
        const arr = sent[i];
        if (arr === undefined) break;
        points.push(toCanvas({ x: arr[0]!, y: arr[1]! }, box));
      }
      shapes.push({
        stroke: report.stroke,
        token: t,
        start,
        end,
        color: TOKEN_PALETTE[tokenIndex % TOKEN_PALETTE.length]!,
        points: points.map(({ x, y }) => ({ x, y })),
      });
      tokenIndex += 1;
    }
  }
  return shapes;
}

/** Top-n predicted classes, highest score first; ties break by label. */
export function topClasses(response: RecognizeResponse, n = 3): ClassScore[] {
  return Object.entries(response.scores)
    .map(([label, score]) => ({ label, score }))
    .sort((a, b) => b.score - a.score || a.label.localeCompare(b.label))
    .slice(0, n);
}

/** One table row per token feature, for the features overlay panel. */
export function featureRows(response: RecognizeResponse): string[][] {
  return response.features.map((f) => [
    `${f.stroke}.${f.token}`,
    `[${f.start}, ${f.end}]`,
    f.category,
    `${f.ratio_pct.toFixed(1)}%`,
    `${f.direction_deg.toFixed(1)}°`,
    f.orientation,
  ]);
}
