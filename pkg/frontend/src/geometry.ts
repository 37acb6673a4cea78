/**
 * Coordinate conventions between the canvas and the recognition service.
 *
 * The canvas y axis grows downward; the service's ink format expects y to
 * grow upward. Before any request the pad flips y: y_math = (height - y_px)
 * / scale. Both axes are divided by one uniform scale — the larger side of
 * the canvas box — so normalization is resolution-independent without
 * distorting the shape (token angles and extent ratios survive uniform
 * scaling only).
 */

export interface PadPoint {
  x: number;
  y: number;
  /** Timestamp in milliseconds. Always present on captured points. */
  t?: number;
}

export interface Box {
  width: number;
  height: number;
}

/** Uniform normalization scale for a canvas box: its larger side. */
export function scaleOf(box: Box): number {
  if (!(box.width > 0) || !(box.height > 0)) {
    throw new Error(`canvas box must have positive sides, got ${box.width}x${box.height}`);
  }
  return Math.max(box.width, box.height);
}

/** Canvas-space point (y down, pixels) to math-space (y up, unit scale). */
export function toMath(p: PadPoint, box: Box): PadPoint {
  const s = scaleOf(box);
  const out: PadPoint = { x: p.x / s, y: (box.height - p.y) / s };
  if (p.t !== undefined) out.t = p.t;
  return out;
}

/** Inverse of toMath: math-space point back to canvas pixels for drawing. */
export function toCanvas(p: PadPoint, box: Box): PadPoint {
  const s = scaleOf(box);
  const out: PadPoint = { x: p.x * s, y: box.height - p.y * s };
  if (p.t !== undefined) out.t = p.t;
  return out;
}

/**
 * Drop consecutive points with identical (x, y), keeping the first of each
 * run. Timestamps are not compared — a repeated position is a zero-length
 * segment regardless of time. Mirrors the service's parse-time rule so the
 * client never sends points the server would discard.
 */
export function dedupConsecutive(points: readonly PadPoint[]): PadPoint[] {
  const kept: PadPoint[] = [];
  for (const p of points) {
    const last = kept[kept.length - 1];
    if (last !== undefined && last.x === p.x && last.y === p.y) continue;
    kept.push(p);
  }
  return kept;
}

/** Serialize one point as the wire array form: [x, y] or [x, y, t]. */
export function pointToArray(p: PadPoint): number[] {
  return p.t === undefined ? [p.x, p.y] : [p.x, p.y, p.t];
}

/**
 * Transform captured canvas-space strokes into the wire payload: math-space
 * point arrays, exactly the floats the service will receive.
 */
export function strokesToPayload(
  strokes: readonly (readonly PadPoint[])[],
  box: Box,
): number[][][] {
  return strokes.map((stroke) => stroke.map((p) => pointToArray(toMath(p, box))));
}
