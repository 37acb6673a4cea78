import { describe, expect, it } from "vitest";

import type { RecognizeOutcome, RecognizeResponse } from "../src/client.js";
import type { Box } from "../src/geometry.js";
import { PadSession, type RecognizerClient, TAP_OFFSET_PX } from "../src/session.js";

const BOX: Box = { width: 640, height: 420 };

const RESPONSE: RecognizeResponse = {
  label: "a",
  confidence: 0.87,
  cluster_id: 1,
  scores: { a: 0.87, b: 0.1 },
  strokes: [
    { stroke: 0, direction: "horizontal", critical_points: [], tokens: [[0, 1]] },
  ],
  features: [],
};

/** Scripted client: hands out queued outcomes and records every payload. */
class FakeClient implements RecognizerClient {
  calls: number[][][][] = [];
  private queue: (() => Promise<RecognizeOutcome>)[] = [];

  enqueue(outcome: RecognizeOutcome | Promise<RecognizeOutcome>): void {
    this.queue.push(() => Promise.resolve(outcome));
  }

  recognize(strokes: number[][][]): Promise<RecognizeOutcome> {
    this.calls.push(strokes);
    const next = this.queue.shift();
    return next ? next() : Promise.resolve({ kind: "ok", response: RESPONSE });
  }
}

function drag(session: PadSession, points: [number, number, number][]): Promise<void> {
  const [first, ...rest] = points;
  session.pointerDown(first![0], first![1], first![2]);
  for (const [x, y, t] of rest.slice(0, -1)) session.pointerMove(x, y, t);
  const last = rest[rest.length - 1]!;
  return session.pointerUp(last[0], last[1], last[2]);
}

describe("stroke capture", () => {
  it("a drag becomes one stroke with >= 2 points and non-decreasing t", async () => {
    const client = new FakeClient();
    const session = new PadSession(BOX, client);
    await drag(session, [
      [10, 10, 100],
      [20, 15, 108],
      [30, 25, 116],
      [42, 40, 124],
    ]);
    expect(session.strokes).toHaveLength(1);
    const stroke = session.strokes[0]!;
    expect(stroke.length).toBeGreaterThanOrEqual(2);
    for (let i = 1; i < stroke.length; i += 1) {
      expect(stroke[i]!.t!).toBeGreaterThanOrEqual(stroke[i - 1]!.t!);
    }
  });

  it("coalesced duplicate positions are dropped as they arrive", async () => {
    const client = new FakeClient();
    const session = new PadSession(BOX, client);
    session.pointerDown(10, 10, 1);
    session.pointerMove(10, 10, 2); // duplicate of the down point
    session.pointerMove(20, 20, 3);
    session.pointerMove(20, 20, 4); // duplicate of the previous move
    await session.pointerUp(20, 20, 5); // duplicate of the last position
    expect(session.strokes[0]!.map((p) => [p.x, p.y])).toStrictEqual([
      [10, 10],
      [20, 20],
    ]);
  });

  it("a tap becomes a 2-point micro-stroke with distinct positions", async () => {
    const client = new FakeClient();
    const session = new PadSession(BOX, client);
    session.pointerDown(50, 60, 1);
    await session.pointerUp(50, 60, 2);
    const stroke = session.strokes[0]!;
    expect(stroke).toHaveLength(2);
    expect(stroke[1]!.x).toBe(50 + TAP_OFFSET_PX);
    expect(stroke[1]!.y).toBe(60);
    expect([stroke[0]!.x, stroke[0]!.y]).not.toStrictEqual([stroke[1]!.x, stroke[1]!.y]);
  });

  it("two drags produce two strokes in drawing order", async () => {
    const client = new FakeClient();
    const session = new PadSession(BOX, client);
    await drag(session, [
      [10, 10, 1],
      [30, 30, 2],
    ]);
    await drag(session, [
      [100, 10, 3],
      [120, 40, 4],
    ]);
    expect(session.strokes).toHaveLength(2);
    expect(session.strokes[0]![0]!.x).toBe(10);
    expect(session.strokes[1]![0]!.x).toBe(100);
  });

  it("timestamps are clamped non-decreasing even if the clock jumps back", async () => {
    const client = new FakeClient();
    const session = new PadSession(BOX, client);
    session.pointerDown(0, 0, 50);
    session.pointerMove(5, 5, 40); // clock went backwards
    await session.pointerUp(9, 9, 45);
    expect(session.strokes[0]!.map((p) => p.t)).toStrictEqual([50, 50, 50]);
  });

  it("move and up without a preceding down are ignored", () => {
    const client = new FakeClient();
    const session = new PadSession(BOX, client);
    session.pointerMove(5, 5, 1);
    void session.pointerUp(6, 6, 2);
    expect(session.strokes).toHaveLength(0);
    expect(client.calls).toHaveLength(0);
  });
});

describe("live recognition loop", () => {
  it("pointer-up posts the full stroke set once per completed stroke", async () => {
    const client = new FakeClient();
    const session = new PadSession(BOX, client);
    await drag(session, [
      [10, 10, 1],
      [30, 30, 2],
    ]);
    expect(client.calls).toHaveLength(1);
    expect(client.calls[0]).toHaveLength(1);
    await drag(session, [
      [50, 10, 3],
      [70, 30, 4],
    ]);
    expect(client.calls).toHaveLength(2);
    expect(client.calls[1]).toHaveLength(2); // re-posts both strokes
    expect(client.calls[1]).toStrictEqual(session.exportPayload());
  });

  it("the posted payload is the y-flipped, uniformly scaled point set", async () => {
    const client = new FakeClient();
    const session = new PadSession(BOX, client);
    await drag(session, [
      [0, 420, 1],
      [640, 0, 2],
    ]);
    expect(client.calls[0]).toStrictEqual([
      [
        [0, 0, 1],
        [1, 420 / 640, 2],
      ],
    ]);
  });

  it("a successful response is stored and clears the banner", async () => {
    const client = new FakeClient();
    const session = new PadSession(BOX, client);
    session.banner = "stale";
    await drag(session, [
      [10, 10, 1],
      [30, 30, 2],
    ]);
    expect(session.lastResponse).toStrictEqual(RESPONSE);
    expect(session.banner).toBeNull();
  });

  it("server errors raise a banner and keep the strokes (pad stays usable)", async () => {
    const client = new FakeClient();
    client.enqueue({ kind: "http_error", status: 503, detail: "no model loaded" });
    const session = new PadSession(BOX, client);
    await drag(session, [
      [10, 10, 1],
      [30, 30, 2],
    ]);
    expect(session.banner).toBe("server error 503: no model loaded");
    expect(session.strokes).toHaveLength(1);

    // The pad remains usable: the next stroke posts again and recovers.
    await drag(session, [
      [50, 10, 3],
      [70, 30, 4],
    ]);
    expect(client.calls).toHaveLength(2);
    expect(session.banner).toBeNull();
    expect(session.lastResponse).toStrictEqual(RESPONSE);
  });

  it("network failures raise a banner and keep the strokes", async () => {
    const client = new FakeClient();
    client.enqueue({ kind: "network_error", message: "fetch failed" });
    const session = new PadSession(BOX, client);
    await drag(session, [
      [10, 10, 1],
      [30, 30, 2],
    ]);
    expect(session.banner).toBe("cannot reach the recognition service: fetch failed");
    expect(session.strokes).toHaveLength(1);
  });

  it("a superseded request changes nothing", async () => {
    const client = new FakeClient();
    client.enqueue({ kind: "superseded" });
    const session = new PadSession(BOX, client);
    await drag(session, [
      [10, 10, 1],
      [30, 30, 2],
    ]);
    expect(session.lastResponse).toBeNull();
    expect(session.banner).toBeNull();
  });
});

describe("clear", () => {
  it("wipes strokes and overlays without sending a request", async () => {
    const client = new FakeClient();
    const session = new PadSession(BOX, client);
    await drag(session, [
      [10, 10, 1],
      [30, 30, 2],
    ]);
    expect(session.lastResponse).not.toBeNull();
    const callsBefore = client.calls.length;
    session.clear();
    expect(session.strokes).toHaveLength(0);
    expect(session.current).toBeNull();
    expect(session.lastResponse).toBeNull();
    expect(session.banner).toBeNull();
    expect(client.calls).toHaveLength(callsBefore);
  });

  it("a response that lands after clear is discarded", async () => {
    const client = new FakeClient();
    let release!: (outcome: RecognizeOutcome) => void;
    client.enqueue(new Promise<RecognizeOutcome>((resolve) => (release = resolve)));
    const session = new PadSession(BOX, client);
    const settled = drag(session, [
      [10, 10, 1],
      [30, 30, 2],
    ]);
    session.clear();
    release({ kind: "ok", response: RESPONSE });
    await settled;
    expect(session.lastResponse).toBeNull();
    expect(session.banner).toBeNull();
  });
});

describe("change notifications", () => {
  it("fires on capture, response, and clear", async () => {
    const client = new FakeClient();
    let changes = 0;
    const session = new PadSession(BOX, client, { onChange: () => (changes += 1) });
    session.pointerDown(1, 1, 1); // 1
    session.pointerMove(2, 2, 2); // 2
    await session.pointerUp(3, 3, 3); // 3 (stroke done) + 4 (response applied)
    expect(changes).toBe(4);
    session.clear(); // 5
    expect(changes).toBe(5);
  });
});
