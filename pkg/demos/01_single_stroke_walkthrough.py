"""Walk one stroke through every stage of the pipeline, printing as we go.

Run:  python demos/01_single_stroke_walkthrough.py
"""

import numpy as np

from strokekit import (
    InkPoint,
    InkSample,
    PipelineConfig,
    Stroke,
    analyze_sample,
    direction_length,
    smooth_stroke,
    window_radius,
)

# ---------------------------------------------------------------------------
# Build a noisy arch: pen travels up a steep leg and back down a shallow one.
# ---------------------------------------------------------------------------
rng = np.random.default_rng(5)
t = np.linspace(0.0, 1.0, 80)
xs = t * 100.0
ys = np.where(t < 0.4, t / 0.4, (1 - t) / 0.6) * 60.0
ys = ys + rng.normal(0.0, 0.8, ys.shape)

stroke = Stroke(tuple(InkPoint(float(x), float(y)) for x, y in zip(xs, ys)))
print(f"raw stroke: {len(stroke.points)} points, "
      f"x span {np.ptp(stroke.xs):.1f}, y span {np.ptp(ys):.1f}")

# ---------------------------------------------------------------------------
# Stage 1: smoothing. Endpoints stay put; the wiggle shrinks.
# ---------------------------------------------------------------------------
smoothed = smooth_stroke(stroke)
roughness = lambda s: float(np.abs(np.diff(s.ys, 2)).mean())
print(f"smoothing: roughness {roughness(stroke):.3f} -> {roughness(smoothed):.3f}, "
      f"endpoints unchanged: {smoothed.points[0] == stroke.points[0]} / "
      f"{smoothed.points[-1] == stroke.points[-1]}")

# ---------------------------------------------------------------------------
# Stage 2: direction. Horizontal extent wins, so extrema are scanned on y.
# ---------------------------------------------------------------------------
dl = direction_length(smoothed)
print(f"direction: extent difference {dl.raw_length:+.1f} -> {dl.value.value} "
      f"(window radius m = {window_radius(len(smoothed.points))})")

# ---------------------------------------------------------------------------
# Stages 3-5 in one call: critical points, tokens, features, encoding.
# ---------------------------------------------------------------------------
sample = InkSample("demo", (stroke,))
analysis = analyze_sample(sample, PipelineConfig(passes=1))
seg = analysis.segmentations[0]

for cp in seg.critical_points:
    p = seg.stroke.points[cp.point_index]
    print(f"critical point: index {cp.point_index} ({cp.kind.value}) "
          f"at ({p.x:.1f}, {p.y:.1f})")

print(f"{len(seg.tokens)} tokens:")
for tok, tf in zip(seg.tokens, analysis.token_features):
    print(f"  points [{tok.start:>2}..{tok.end:>2}]  "
          f"{tf.length_ratio_pct:5.1f}% of stroke ({tf.length_category.value}), "
          f"direction {tf.direction_deg:+6.1f} deg, {tf.orientation.value}")

# ---------------------------------------------------------------------------
# The classifier input: 8 slots x 15 bits. Empty slots stay zero.
# ---------------------------------------------------------------------------
layout = analysis.encoded.layout
slots = analysis.encoded.array.reshape(layout.max_tokens, layout.bits_per_token)
print(f"encoded vector ({layout.width} bits, one row per slot):")
for i, row in enumerate(slots):
    tag = "token" if row[14] else "empty"
    print(f"  slot {i}: {''.join(str(int(b)) for b in row)}  ({tag})")
