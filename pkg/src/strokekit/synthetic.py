"""Seeded synthetic ink generator.

Each class is a polyline template (control points in the unit box, one
polyline per stroke). A sample is its template resampled to a seeded point
count along each stroke's arc, perturbed by a seeded affine map (uniform
scale 0.8-1.2 and rotation within +/-5 degrees about the template box
center), then jittered per point with Gaussian noise whose std is
noise * template bounding-box diagonal.

The templates are geometric stand-ins for Arabic letter skeletons, not
calligraphy. Their legs travel steeply along the axis the segmenter scans,
and turns are sharp and deep, so token structure stays stable under the
documented jitter; per-class token counts (and, within a stroke-count
cluster, token category/direction patterns) are what separate the classes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ink import InkPoint, InkSample, Stroke, dedup_points

#: Resampling density, points per unit of template arc length.
POINTS_PER_UNIT_ARC = 40

#: Resampled point count bounds per stroke.
MIN_POINTS, MAX_POINTS = 40, 120

#: Affine perturbation ranges.
SCALE_RANGE = (0.8, 1.2)
ROTATION_MAX_DEG = 5.0

#: Seeded spread applied to each stroke's resample count.
COUNT_JITTER = (0.9, 1.1)


@dataclass(frozen=True)
class TemplateSpec:
    """One class: a label and its per-stroke control polylines."""

    class_label: str
    strokes: tuple[tuple[tuple[float, float], ...], ...]

    def __post_init__(self):
        if not self.class_label:
            raise ValueError("class_label must be non-empty")
        object.__setattr__(
            self,
            "strokes",
            tuple(tuple((float(x), float(y)) for x, y in stroke) for stroke in self.strokes),
        )
        if not self.strokes:
            raise ValueError("template needs at least one stroke")
        for stroke in self.strokes:
            if len(stroke) < 2:
                raise ValueError("each stroke polyline needs at least 2 control points")
            for x, y in stroke:
                if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
                    raise ValueError(f"control point ({x}, {y}) outside the unit box")

    @property
    def stroke_count(self) -> int:
        return len(self.strokes)

    @property
    def bbox(self) -> tuple[float, float, float, float]:
        xs = [x for stroke in self.strokes for x, _ in stroke]
        ys = [y for stroke in self.strokes for _, y in stroke]
        return min(xs), min(ys), max(xs), max(ys)

    @property
    def diagonal(self) -> float:
        x0, y0, x1, y1 = self.bbox
        return math.hypot(x1 - x0, y1 - y0)

    def arc_length(self, stroke_index: int) -> float:
        pts = np.asarray(self.strokes[stroke_index], dtype=float)
        seg = np.diff(pts, axis=0)
        return float(np.hypot(seg[:, 0], seg[:, 1]).sum())


# Chevron ticks stand in for dots/diacritics (dots count as strokes). Both
# have a steep and a shallow leg; A leads steep (token categories
# middle-short then middle-long), B leads shallow (the reverse), giving
# multi-stroke classes distinguishable slot patterns even at equal counts.
# Ticks are sized so they resample to >= 60 points, where the detection
# window is wide enough to absorb jitter; strokes may overlap on the canvas.
def _tick_a(x: float, y: float) -> tuple[tuple[float, float], ...]:
    return ((x, y + 0.62), (x + 0.3317, y), (x + 0.8413, y + 0.62))


def _tick_b(x: float, y: float) -> tuple[tuple[float, float], ...]:
    return ((x, y + 0.62), (x + 0.5096, y), (x + 0.8413, y + 0.62))


# Body strokes. Leg angles sit mid-bin for the 11.25-degree direction
# quantization (28.1, 50.6, 61.9, 73.1 degrees), so +/-5-degree sample
# rotation cannot move a token across a bin edge.
_SLALOM = ((0.04, 0.95), (0.52, 0.6935), (0.04, 0.437), (0.52, 0.1805))  # vertical, 3 tokens
_ARCH = ((0.02, 0.05), (0.395, 0.75), (0.97, 0.05))  # steep up, shallow down; 2 tokens
_ARCH_R = ((0.02, 0.05), (0.595, 0.75), (0.97, 0.05))  # shallow up, steep down; 2 tokens
_BOWL = ((0.05, 0.66), (0.403, 0.0), (0.946, 0.66))  # steep down, shallow up; 2 tokens
_W = ((0.0, 0.639), (0.32, 0.041), (0.50, 0.377), (0.68, 0.041), (1.0, 0.639))  # 4 tokens
_COMB = tuple(
    (0.11 * i, 0.05 if i % 2 == 0 else 0.41) for i in range(7)
)  # 6 steep teeth, 6 tokens


def _shift(
    stroke: tuple[tuple[float, float], ...], dx: float, dy: float
) -> tuple[tuple[float, float], ...]:
    return tuple((x + dx, y + dy) for x, y in stroke)


def default_templates() -> tuple[TemplateSpec, ...]:
    """Twelve classes covering all four stroke-count clusters.

    Ordered so that any prefix spans as many stroke-count clusters as
    possible (the first four classes have 1, 2, 3, and 4 strokes). Within
    each cluster the intended token counts differ, except the two 4-stroke
    classes, which instead invert every token's category/direction slot
    pattern.
    """
    return (
        TemplateSpec("ا", (_SLALOM,)),
        TemplateSpec("ن", (_BOWL, _tick_a(0.08, 0.38))),
        TemplateSpec("ت", (_BOWL, _tick_a(0.0, 0.38), _tick_a(0.158, 0.38))),
        TemplateSpec(
            "ث",
            (_BOWL, _tick_a(0.0, 0.38), _tick_a(0.158, 0.38), _tick_a(0.079, 0.19)),
        ),
        TemplateSpec("د", (_ARCH,)),
        TemplateSpec("ب", (_shift(_W, 0.0, 0.361), _tick_b(0.08, 0.0))),
        TemplateSpec("ق", (_SLALOM, _tick_b(0.15, 0.38), _tick_b(0.15, 0.0))),
        TemplateSpec(
            "چ",
            (_ARCH_R, _tick_b(0.0, 0.38), _tick_b(0.158, 0.38), _tick_b(0.079, 0.19)),
        ),
        TemplateSpec("ح", (_W,)),
        TemplateSpec("ذ", (_SLALOM, _tick_a(0.12, 0.0))),
        TemplateSpec(
            "ي", (_shift(_W, 0.0, 0.361), _tick_a(0.0, 0.0), _tick_a(0.158, 0.0))
        ),
        TemplateSpec("س", (_COMB,)),
    )


def _resample_polyline(ctrl: np.ndarray, n: int) -> np.ndarray:
    """n points spaced evenly by arc length along the control polyline."""
    seg = np.diff(ctrl, axis=0)
    lens = np.hypot(seg[:, 0], seg[:, 1])
    cum = np.concatenate([[0.0], np.cumsum(lens)])
    s = np.linspace(0.0, cum[-1], n)
    return np.stack(
        [np.interp(s, cum, ctrl[:, 0]), np.interp(s, cum, ctrl[:, 1])], axis=1
    )


def _generate_sample(template: TemplateSpec, rng: np.random.Generator, noise: float) -> InkSample:
    x0, y0, x1, y1 = template.bbox
    cx, cy = (x0 + x1) / 2.0, (y0 + y1) / 2.0
    sigma = noise * template.diagonal

    scale = rng.uniform(*SCALE_RANGE)
    angle = np.radians(rng.uniform(-ROTATION_MAX_DEG, ROTATION_MAX_DEG))
    rot = scale * np.array(
        [[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]]
    )

    strokes = []
    for si in range(template.stroke_count):
        ctrl = np.asarray(template.strokes[si], dtype=float)
        u = rng.uniform(*COUNT_JITTER)
        n = int(np.clip(round(POINTS_PER_UNIT_ARC * template.arc_length(si) * u), MIN_POINTS, MAX_POINTS))
        pts = _resample_polyline(ctrl, n)
        pts = (pts - [cx, cy]) @ rot.T + [cx, cy]
        pts = pts + rng.normal(0.0, sigma, size=pts.shape)
        ink_points, _ = dedup_points([InkPoint(float(x), float(y)) for x, y in pts])
        strokes.append(Stroke(tuple(ink_points)))
    return InkSample(template.class_label, tuple(strokes))


def generate(
    templates,
    samples_per_class: int,
    noise: float = 0.02,
    seed: int = 0,
) -> list[InkSample]:
    """Deterministically generate samples_per_class samples of each template.

    Draw order is fixed (per sample: scale, angle, then per stroke: count
    jitter, point jitter), so a seed fully determines the dataset.
    """
    if not 0.0 <= noise <= 0.1:
        raise ValueError(f"noise must be in [0, 0.1], got {noise}")
    if samples_per_class < 1:
        raise ValueError(f"samples_per_class must be >= 1, got {samples_per_class}")
    templates = tuple(templates)
    rng = np.random.default_rng(seed)
    samples = []
    for template in templates:
        for _ in range(samples_per_class):
            samples.append(_generate_sample(template, rng, noise))
    return samples
