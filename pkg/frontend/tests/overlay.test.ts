import { describe, expect, it } from "vitest";

import type { RecognizeResponse } from "../src/client.js";
import type { Box } from "../src/geometry.js";
import {
  TOKEN_PALETTE,
  criticalPointMarkers,
  featureRows,
  tokenSegments,
  topClasses,
} from "../src/overlay.js";

const BOX: Box = { width: 100, height: 200 };
// scale = 200; canvas x = x_m * 200, canvas y = 200 - y_m * 200

/** 10 sent points along a line: math (0.0, 0.1), (0.05, 0.15), ... */
const PAYLOAD: number[][][] = [
  Array.from({ length: 10 }, (_, i) => [i * 0.05, 0.1 + i * 0.05, i]),
];

const RESPONSE: RecognizeResponse = {
  label: "a",
  confidence: 0.8,
  cluster_id: 1,
  scores: { a: 0.8, b: 0.15, c: 0.6, d: 0.6 },
  strokes: [
    {
      stroke: 0,
      direction: "vertical",
      critical_points: [{ index: 3, kind: "max" }],
      tokens: [
        [0, 3],
        [3, 9],
      ],
    },
  ],
  features: [
    {
      stroke: 0,
      token: 0,
      start: 0,
      end: 3,
      ratio_pct: 33.333,
      category: "middle-short",
      direction_deg: 45.0,
      midpoint: [0.075, 0.175],
      orientation: "clockwise",
    },
  ],
};

describe("criticalPointMarkers", () => {
  it("places the marker at the sent point with the reported index", () => {
    const markers = criticalPointMarkers(RESPONSE, PAYLOAD, BOX);
    expect(markers).toHaveLength(1);
    const m = markers[0]!;
    expect(m.index).toBe(3);
    expect(m.kind).toBe("max");
    expect(m.x).toBeCloseTo(0.15 * 200, 12);
    expect(m.y).toBeCloseTo(200 - 0.25 * 200, 12);
  });

  it("clamps an out-of-range index to the last sent point but keeps the index", () => {
    const response = {
      ...RESPONSE,
      strokes: [
        { ...RESPONSE.strokes[0]!, critical_points: [{ index: 42, kind: "min" }] },
      ],
    };
    const markers = criticalPointMarkers(response, PAYLOAD, BOX);
    expect(markers[0]!.index).toBe(42);
    expect(markers[0]!.x).toBeCloseTo(0.45 * 200, 12);
  });

  it("skips reports whose stroke has no sent points", () => {
    const response = {
      ...RESPONSE,
      strokes: [{ ...RESPONSE.strokes[0]!, stroke: 7 }],
    };
    expect(criticalPointMarkers(response, PAYLOAD, BOX)).toHaveLength(0);
  });
});

describe("tokenSegments", () => {
  it("colors each token range and shares the boundary point", () => {
    const segments = tokenSegments(RESPONSE, PAYLOAD, BOX);
    expect(segments).toHaveLength(2);
    expect(segments[0]!.points).toHaveLength(4); // [0, 3]
    expect(segments[1]!.points).toHaveLength(7); // [3, 9]
    expect(segments[0]!.points[3]).toStrictEqual(segments[1]!.points[0]);
    expect(segments[0]!.color).toBe(TOKEN_PALETTE[0]);
    expect(segments[1]!.color).toBe(TOKEN_PALETTE[1]);
  });

  it("advances the palette across strokes", () => {
    const response: RecognizeResponse = {
      ...RESPONSE,
      strokes: [
        RESPONSE.strokes[0]!,
        {
          stroke: 0,
          direction: "horizontal",
          critical_points: [],
          tokens: [[0, 9]],
        },
      ],
    };
    const segments = tokenSegments(response, PAYLOAD, BOX);
    expect(segments[2]!.color).toBe(TOKEN_PALETTE[2]);
  });

  it("clamps token ends to the sent point count", () => {
    const response = {
      ...RESPONSE,
      strokes: [{ ...RESPONSE.strokes[0]!, tokens: [[5, 25]] as [number, number][] }],
    };
    const segments = tokenSegments(response, PAYLOAD, BOX);
    expect(segments[0]!.points).toHaveLength(5); // indices 5..9
    expect(segments[0]!.end).toBe(25); // reported range preserved
  });
});

describe("topClasses", () => {
  it("returns the top 3 by score, ties broken by label", () => {
    expect(topClasses(RESPONSE)).toStrictEqual([
      { label: "a", score: 0.8 },
      { label: "c", score: 0.6 },
      { label: "d", score: 0.6 },
    ]);
  });

  it("honors a smaller n", () => {
    expect(topClasses(RESPONSE, 1)).toStrictEqual([{ label: "a", score: 0.8 }]);
  });
});

describe("featureRows", () => {
  it("formats one row per token feature", () => {
    expect(featureRows(RESPONSE)).toStrictEqual([
      ["0.0", "[0, 3]", "middle-short", "33.3%", "45.0°", "clockwise"],
    ]);
  });
});
