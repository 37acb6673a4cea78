"""Stroke segmentation: direction-length classification, critical-point
detection, and tokenization.

A stroke is classed Horizontal or Vertical by comparing its bounding-box
extents. On the axis perpendicular to that dominant direction, local extrema
of the coordinate sequence — pen turns — are detected with a sliding window
whose radius scales with stroke length. The stroke is then cut at those
critical points into tokens, the unit of feature extraction.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .ink import Stroke, Token

logger = logging.getLogger(__name__)

#: Window radius as a fraction of stroke point count.
DEFAULT_WINDOW_FRACTION = 0.05

#: Shortest admissible token, in points.
MIN_TOKEN_POINTS = 2


class Direction(enum.Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"


class ExtremumKind(enum.Enum):
    MAXIMUM = "maximum"
    MINIMUM = "minimum"


@dataclass(frozen=True)
class DirectionLength:
    """Dominant-direction verdict for a stroke.

    raw_length is the signed extent difference (x-extent minus y-extent);
    the stroke is Horizontal exactly when it is >= 0.
    """

    value: Direction
    raw_length: float

    def __post_init__(self):
        expected = Direction.HORIZONTAL if self.raw_length >= 0 else Direction.VERTICAL
        if self.value is not expected:
            raise ValueError(
                f"direction {self.value} inconsistent with raw_length {self.raw_length}"
            )


@dataclass(frozen=True)
class CriticalPoint:
    """A windowed local extremum of the scanned coordinate of one stroke.

    point_index is interior: the detection window fits on both sides.
    """

    stroke_index: int
    point_index: int
    kind: ExtremumKind


@dataclass(frozen=True)
class StrokeSegmentation:
    """Everything segmentation derives from one stroke."""

    stroke: Stroke
    stroke_index: int
    direction: DirectionLength
    critical_points: tuple[CriticalPoint, ...]
    tokens: tuple[Token, ...]
    #: True when the stroke had fewer than 2m+1 points, so no window fit and
    #: critical-point detection was skipped (the stroke is one whole token).
    window_too_short: bool = False


def direction_length(stroke: Stroke) -> DirectionLength:
    """Classify a stroke Horizontal or Vertical by bounding-box extents.

    raw_length = (x_max - x_min) - (y_max - y_min); ties (0) go Horizontal.
    """
    xs, ys = stroke.xs, stroke.ys
    raw = float((xs.max() - xs.min()) - (ys.max() - ys.min()))
    value = Direction.HORIZONTAL if raw >= 0 else Direction.VERTICAL
    return DirectionLength(value, raw)


def window_radius(point_count: int, window_fraction: float = DEFAULT_WINDOW_FRACTION) -> int:
    """Detection window radius m = max(1, floor(window_fraction * N))."""
    return max(1, math.floor(window_fraction * point_count))


def scan_values(stroke: Stroke, dl: DirectionLength) -> np.ndarray:
    """The coordinate sequence scanned for extrema: y for Horizontal strokes,
    x for Vertical ones."""
    return stroke.ys if dl.value is Direction.HORIZONTAL else stroke.xs


def _qualifying(values: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Boolean masks (maxima, minima) over all indices of `values`.

    Index k qualifies as a maximum iff values is non-decreasing over
    [k-m..k], non-increasing over [k..k+m], and strictly greater than at
    least one point in the window; minima mirror this. Only indices with the
    full window on both sides can qualify.
    """
    n = values.shape[0]
    is_max = np.zeros(n, dtype=bool)
    is_min = np.zeros(n, dtype=bool)
    if n < 2 * m + 1:
        return is_max, is_min

    d = np.diff(values)
    # rising[j] == True when d[j..j+m-1] are all >= 0, i.e. values is
    # non-decreasing over [j..j+m]; falling is the mirror.
    rising = sliding_window_view(d >= 0, m).all(axis=1)
    falling = sliding_window_view(d <= 0, m).all(axis=1)

    k = np.arange(m, n - m)
    left_end = values[k - m]
    right_end = values[k + m]
    center = values[k]
    # With monotone flanks, the window's smallest (largest) values sit at its
    # ends, so the exists-a-strict-neighbor test reduces to the endpoints.
    is_max[k] = rising[k - m] & falling[k] & ((left_end < center) | (right_end < center))
    is_min[k] = falling[k - m] & rising[k] & ((left_end > center) | (right_end > center))
    return is_max, is_min


def detect_critical_points(
    stroke: Stroke,
    dl: DirectionLength | None = None,
    window_fraction: float = DEFAULT_WINDOW_FRACTION,
    stroke_index: int = 0,
) -> list[CriticalPoint]:
    """Find windowed local extrema of the scanned coordinate.

    Within any run of consecutive equal-valued qualifying indices only the
    first is emitted. Strokes shorter than 2m+1 points yield an empty list.
    """
    if not 0 < window_fraction < 1:
        raise ValueError(f"window_fraction must be in (0, 1), got {window_fraction}")
    dl = dl or direction_length(stroke)
    values = scan_values(stroke, dl)
    n = values.shape[0]
    m = window_radius(n, window_fraction)
    if n < 2 * m + 1:
        logger.debug(
            "stroke %d: %d points < window %d, no critical points", stroke_index, n, 2 * m + 1
        )
        return []

    is_max, is_min = _qualifying(values, m)
    out: list[CriticalPoint] = []
    for k in np.flatnonzero(is_max | is_min):
        k = int(k)
        kind = ExtremumKind.MAXIMUM if is_max[k] else ExtremumKind.MINIMUM
        mask = is_max if is_max[k] else is_min
        if k > 0 and mask[k - 1] and values[k - 1] == values[k]:
            continue  # not the first of its equal-valued run
        out.append(CriticalPoint(stroke_index, k, kind))
    return out


def tokenize(
    stroke: Stroke, cps: list[CriticalPoint], stroke_index: int = 0
) -> list[Token]:
    """Cut a stroke into tokens at its critical points.

    Each critical point at index k ends the current token at k; the next
    token starts at k+1. If too few points remain after k for a full token,
    the boundary point is given to the later token instead (current token
    ends at k-1); cuts that would still leave an undersized token are
    dropped. Tokens cover the stroke disjointly and every token has at least
    MIN_TOKEN_POINTS points.
    """
    n = len(stroke)
    last = n - 1
    tokens: list[Token] = []
    start = 0
    for cp in cps:
        k = cp.point_index
        if k - start + 1 < MIN_TOKEN_POINTS:
            continue  # current piece too short; boundary joins the later token
        if last - k < MIN_TOKEN_POINTS:
            # The remainder after k is undersized: shift the boundary point
            # into the later token if the earlier one can spare it.
            if k - start >= MIN_TOKEN_POINTS:
                tokens.append(Token(stroke, stroke_index, start, k - 1))
                start = k
            continue
        tokens.append(Token(stroke, stroke_index, start, k))
        start = k + 1
    tokens.append(Token(stroke, stroke_index, start, last))
    return tokens


def segment_stroke(
    stroke: Stroke,
    stroke_index: int = 0,
    window_fraction: float = DEFAULT_WINDOW_FRACTION,
) -> StrokeSegmentation:
    """Run the full per-stroke segmentation: classify, detect, tokenize."""
    dl = direction_length(stroke)
    n = len(stroke)
    m = window_radius(n, window_fraction)
    too_short = n < 2 * m + 1
    cps = detect_critical_points(stroke, dl, window_fraction, stroke_index)
    tokens = tokenize(stroke, cps, stroke_index)
    return StrokeSegmentation(
        stroke=stroke,
        stroke_index=stroke_index,
        direction=dl,
        critical_points=tuple(cps),
        tokens=tuple(tokens),
        window_too_short=too_short,
    )
