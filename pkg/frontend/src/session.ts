/**
 * Pad session state: stroke capture and the live recognition loop.
 *
 * Capture contract: pointer-down begins a stroke, pointer-up ends it.
 * Points are kept in canvas space at device rate with timestamps;
 * consecutive duplicate positions are dropped as they arrive. A tap (no
 * movement) becomes a 2-point micro-stroke so dot-like strokes survive the
 * server's minimum of two distinct points.
 *
 * Every completed stroke re-posts the full stroke set — recognition is
 * per completed character attempt, and the service is stateless. Errors
 * surface as a banner; the captured strokes are always retained.
 */

import type { RecognizeOutcome, RecognizeResponse } from "./client.js";
import { type Box, type PadPoint, strokesToPayload } from "./geometry.js";

/** The one client capability the session needs (PadClient satisfies it). */
export interface RecognizerClient {
  recognize(strokes: number[][][]): Promise<RecognizeOutcome>;
}

/** Canvas-space x offset that turns a tap into a 2-point micro-stroke. */
export const TAP_OFFSET_PX = 0.5;

export interface OverlayToggles {
  criticalPoints: boolean;
  tokens: boolean;
  features: boolean;
}

export interface SessionHooks {
  /** Fired after any observable state change (strokes, response, banner). */
  onChange?: (session: PadSession) => void;
}

export class PadSession {
  readonly box: Box;
  /** Completed strokes in canvas space, in drawing order. */
  strokes: PadPoint[][] = [];
  /** The stroke currently being drawn, or null between strokes. */
  current: PadPoint[] | null = null;
  lastResponse: RecognizeResponse | null = null;
  banner: string | null = null;
  toggles: OverlayToggles = { criticalPoints: true, tokens: true, features: true };
  /** Resolves when the most recently triggered recognition has settled. */
  pending: Promise<void> = Promise.resolve();

  private readonly client: RecognizerClient;
  private readonly hooks: SessionHooks;
  /** Bumped by clear() so responses from before the clear are discarded. */
  private generation = 0;

  constructor(box: Box, client: RecognizerClient, hooks: SessionHooks = {}) {
    this.box = box;
    this.client = client;
    this.hooks = hooks;
  }

  private changed(): void {
    this.hooks.onChange?.(this);
  }

  /** Clamp timestamps non-decreasing within the stroke being built. */
  private nextPoint(x: number, y: number, t: number): PadPoint {
    const last = this.current?.[this.current.length - 1];
    const clamped = last?.t !== undefined ? Math.max(t, last.t) : t;
    return { x, y, t: clamped };
  }

  pointerDown(x: number, y: number, t: number): void {
    this.current = [this.nextPoint(x, y, t)];
    this.changed();
  }

  pointerMove(x: number, y: number, t: number): void {
    if (this.current === null) return;
    const p = this.nextPoint(x, y, t);
    const last = this.current[this.current.length - 1];
    if (last !== undefined && last.x === p.x && last.y === p.y) return;
    this.current.push(p);
    this.changed();
  }

  /**
   * End the stroke and trigger recognition on the full stroke set. Returns
   * the settled recognition promise (never rejects) so callers and tests
   * can await the outcome.
   */
  pointerUp(x: number, y: number, t: number): Promise<void> {
    if (this.current === null) return this.pending;
    const p = this.nextPoint(x, y, t);
    const last = this.current[this.current.length - 1];
    if (last === undefined || last.x !== p.x || last.y !== p.y) this.current.push(p);
    if (this.current.length < 2) {
      const only = this.current[0]!;
      this.current.push({ x: only.x + TAP_OFFSET_PX, y: only.y, t: only.t });
    }
    this.strokes.push(this.current);
    this.current = null;
    this.changed();
    this.pending = this.submit();
    return this.pending;
  }

  /** The exact wire payload for the completed strokes (math space, y up). */
  exportPayload(): number[][][] {
    return strokesToPayload(this.strokes, this.box);
  }

  private async submit(): Promise<void> {
    const generation = this.generation;
    const outcome = await this.client.recognize(this.exportPayload());
    if (generation !== this.generation) return; // pad was cleared meanwhile
    switch (outcome.kind) {
      case "ok":
        this.lastResponse = outcome.response;
        this.banner = null;
        break;
      case "superseded":
        return; // a newer stroke completion took over
      case "http_error":
        this.banner = `server error ${outcome.status}: ${outcome.detail}`;
        break;
      case "network_error":
        this.banner = `cannot reach the recognition service: ${outcome.message}`;
        break;
    }
    this.changed();
  }

  /** Wipe strokes and overlays. Sends no request. */
  clear(): void {
    this.generation += 1;
    this.strokes = [];
    this.current = null;
    this.lastResponse = null;
    this.banner = null;
    this.changed();
  }
}
