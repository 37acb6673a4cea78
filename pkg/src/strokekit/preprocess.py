"""Stroke smoothing.

Noise from the capture device is damped with a causal weighted average run
independently over the x and y coordinate sequences of each stroke::

    out[i] = 0.6 * out[i-1] + 0.2 * raw[i] + 0.2 * raw[i+1]    for 0 < i < n-1

The first and last points are pinned so strokes keep their endpoints. The
``out[i-1]`` term is the already-smoothed neighbor, so each sweep is
recursive (left-to-right); ``passes`` controls how many sweeps run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ink import InkPoint, InkSample, Stroke, dedup_points

#: Weights for (previous smoothed, current raw, next raw).
SMOOTH_WEIGHTS = (3 / 5, 1 / 5, 1 / 5)


@dataclass(frozen=True)
class PreprocessConfig:
    """Smoothing knobs."""

    passes: int = 1

    def __post_init__(self):
        if self.passes < 1:
            raise ValueError(f"passes must be >= 1, got {self.passes}")


def extract_axes(sample: InkSample) -> tuple[np.ndarray, np.ndarray]:
    """All x and all y coordinates of a sample, concatenated in stroke order.

    Both arrays have length equal to the sample's total point count.
    """
    xs = np.concatenate([s.xs for s in sample.strokes])
    ys = np.concatenate([s.ys for s in sample.strokes])
    return xs, ys


def smooth_axis(values: np.ndarray, passes: int = 1) -> np.ndarray:
    """Smooth one coordinate sequence, endpoints pinned.

    The recursion makes this a left-to-right scan, not a convolution: the
    previous term is already smoothed within the same sweep.
    """
    out = np.asarray(values, dtype=float).copy()
    n = out.shape[0]
    if n < 3 or passes == 0:
        return out
    w_prev, w_cur, w_next = SMOOTH_WEIGHTS
    for _ in range(passes):
        raw = out.copy()
        for i in range(1, n - 1):
            out[i] = w_prev * out[i - 1] + w_cur * raw[i] + w_next * raw[i + 1]
    return out


def smooth_stroke(stroke: Stroke, config: PreprocessConfig | None = None) -> Stroke:
    """Smooth x and y independently; timestamps ride along unchanged.

    Smoothing can collapse near-coincident neighbors onto the same (x, y);
    such duplicates are dropped (endpoints always survive, since interior
    points are the ones pulled toward them).
    """
    config = config or PreprocessConfig()
    xs = smooth_axis(stroke.xs, config.passes)
    ys = smooth_axis(stroke.ys, config.passes)
    pts = [
        InkPoint(float(x), float(y), p.t)
        for x, y, p in zip(xs, ys, stroke.points)
    ]
    pts, _ = dedup_points(pts)
    return Stroke(tuple(pts))


def smooth_sample(sample: InkSample, config: PreprocessConfig | None = None) -> InkSample:
    """Smooth every stroke of a sample."""
    config = config or PreprocessConfig()
    return InkSample(sample.label, tuple(smooth_stroke(s, config) for s in sample.strokes))
