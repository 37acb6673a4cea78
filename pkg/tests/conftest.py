"""Shared helpers: quick stroke/sample builders used across the suite."""

from __future__ import annotations

import numpy as np
import pytest

from strokekit.ink import InkPoint, InkSample, Stroke


def stroke_from_xy(xs, ys, ts=None) -> Stroke:
    """Build a stroke from coordinate lists (timestamps optional)."""
    if ts is None:
        pts = tuple(InkPoint(float(x), float(y)) for x, y in zip(xs, ys))
    else:
        pts = tuple(
            InkPoint(float(x), float(y), float(t)) for x, y, t in zip(xs, ys, ts)
        )
    return Stroke(pts)


def sample_of(*strokes: Stroke, label: str = "x") -> InkSample:
    return InkSample(label, tuple(strokes))


def random_stroke(rng: np.random.Generator, n: int | None = None) -> Stroke:
    """A generic random walk stroke; ties or duplicate points have measure zero."""
    if n is None:
        n = int(rng.integers(5, 160))
    xs = np.cumsum(rng.normal(0, 1, n))
    ys = np.cumsum(rng.normal(0, 1, n))
    return stroke_from_xy(xs, ys)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
