"""Per-token features, their fixed-width binary encoding, and stroke-count
grouping.

Each token contributes a 15-bit slice to the classifier input: a length
category one-hot (4), a quantized direction one-hot (8), an orientation bit,
a midpoint-above-stroke-center bit, and a presence bit. A sample's vector is
max_tokens such slices, zero-padded past its actual token count, so the
classifier always sees a fixed-width input.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ink import InkSample, Stroke, Token
from .segmentation import Direction, DirectionLength, direction_length

#: Degrees per direction quantization bin over [0, 90].
DIRECTION_BIN_DEG = 11.25
DIRECTION_BIN_COUNT = 8

#: Bits per token slot: 4 category + 8 direction + orientation + above-center + presence.
BITS_PER_TOKEN = 15

#: Token slots per sample vector.
DEFAULT_MAX_TOKENS = 8

#: Stroke-count clusters: 1, 2, 3, and 4-or-more strokes.
MAX_CLUSTERS = 4


class LengthCategory(enum.Enum):
    SHORT = "short"
    MIDDLE_SHORT = "middle_short"
    MIDDLE_LONG = "middle_long"
    LONG = "long"


#: Category order used by the one-hot encoding.
CATEGORY_ORDER = (
    LengthCategory.SHORT,
    LengthCategory.MIDDLE_SHORT,
    LengthCategory.MIDDLE_LONG,
    LengthCategory.LONG,
)


class Orientation(enum.Enum):
    ON_CLOCKWISE = "clockwise"
    ON_COUNTER_CLOCKWISE = "counterclockwise"


@dataclass(frozen=True)
class TokenFeatures:
    """Features of one token.

    midpoint_above_center records whether the token's box center sits at or
    above its stroke's box center; it is what the encoder binarizes, kept
    here so encoding needs no second look at the geometry.
    """

    length_ratio_pct: float
    length_category: LengthCategory
    direction_deg: float
    midpoint: tuple[float, float]
    orientation: Orientation
    midpoint_above_center: bool

    def __post_init__(self):
        if not 0.0 <= self.length_ratio_pct <= 100.0:
            raise ValueError(f"length_ratio_pct {self.length_ratio_pct} outside [0, 100]")
        if not 0.0 <= self.direction_deg <= 90.0:
            raise ValueError(f"direction_deg {self.direction_deg} outside [0, 90]")
        if self.length_category is not categorize(self.length_ratio_pct):
            raise ValueError(
                f"category {self.length_category} inconsistent with ratio {self.length_ratio_pct}"
            )


@dataclass(frozen=True)
class EncodingLayout:
    """Shape of the fixed-width sample vector."""

    max_tokens: int = DEFAULT_MAX_TOKENS
    bits_per_token: int = BITS_PER_TOKEN

    def __post_init__(self):
        if self.max_tokens < 1:
            raise ValueError(f"max_tokens must be >= 1, got {self.max_tokens}")
        if self.bits_per_token != BITS_PER_TOKEN:
            raise ValueError(f"only the {BITS_PER_TOKEN}-bit token layout is defined")

    @property
    def width(self) -> int:
        return self.max_tokens * self.bits_per_token


@dataclass(frozen=True)
class EncodedVector:
    """Binary classifier input for one sample."""

    bits: tuple[int, ...]
    layout: EncodingLayout

    def __post_init__(self):
        if len(self.bits) != self.layout.width:
            raise ValueError(f"expected {self.layout.width} bits, got {len(self.bits)}")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must be 0 or 1")

    @property
    def array(self) -> np.ndarray:
        return np.array(self.bits, dtype=float)


@dataclass(frozen=True)
class StrokeCountGroup:
    """Routing verdict: which per-stroke-count classifier handles a sample."""

    cluster_id: int
    stroke_count: int

    def __post_init__(self):
        if self.stroke_count < 1:
            raise ValueError(f"stroke_count must be >= 1, got {self.stroke_count}")
        if self.cluster_id != min(self.stroke_count, MAX_CLUSTERS):
            raise ValueError(
                f"cluster_id {self.cluster_id} must be min(stroke_count, {MAX_CLUSTERS})"
            )


def categorize(pct: float) -> LengthCategory:
    """Map a length ratio percentage to its category bin:
    [0,25) short, [25,50) middle-short, [50,75) middle-long, [75,100] long."""
    if pct < 25.0:
        return LengthCategory.SHORT
    if pct < 50.0:
        return LengthCategory.MIDDLE_SHORT
    if pct < 75.0:
        return LengthCategory.MIDDLE_LONG
    return LengthCategory.LONG


def _dominant_extent(xs: np.ndarray, ys: np.ndarray, dl: DirectionLength) -> float:
    if dl.value is Direction.HORIZONTAL:
        return float(xs.max() - xs.min())
    return float(ys.max() - ys.min())


def length_ratio(
    token: Token, stroke: Stroke | None = None, dl: DirectionLength | None = None
) -> tuple[float, LengthCategory]:
    """Token-to-stroke length ratio, both measured as the extent along the
    stroke's dominant axis. Returns (percentage in [0,100], category)."""
    stroke = stroke if stroke is not None else token.stroke
    dl = dl or direction_length(stroke)
    stroke_extent = _dominant_extent(stroke.xs, stroke.ys, dl)
    if stroke_extent == 0.0:
        raise ValueError("stroke has zero extent along its dominant axis")
    token_extent = _dominant_extent(token.xs, token.ys, dl)
    pct = min(100.0, max(0.0, 100.0 * token_extent / stroke_extent))
    return pct, categorize(pct)


def direction(token: Token) -> float:
    """Inclination of the token's bounding box, degrees in [0, 90].

    arctan of (y-extent / x-extent); a zero x-extent returns exactly 90.
    """
    xs, ys = token.xs, token.ys
    dx = float(xs.max() - xs.min())
    dy = float(ys.max() - ys.min())
    if dx == 0.0:
        return 90.0
    return float(np.degrees(np.arctan(dy / dx)))


def midpoint(token: Token) -> tuple[float, float]:
    """Center of the token's bounding box."""
    xs, ys = token.xs, token.ys
    return (
        float((xs.max() + xs.min()) / 2.0),
        float((ys.max() + ys.min()) / 2.0),
    )


def orientation(token: Token) -> Orientation:
    """Concavity of the traced curve relative to its box center.

    Compares the trajectory point at the token's median index against the
    bounding-box center: at-or-above means the curve bows upward, read as
    clockwise pen motion. Tokens of fewer than 3 points default clockwise.
    """
    pts = token.points
    if len(pts) < 3:
        return Orientation.ON_CLOCKWISE
    p = pts[(len(pts) - 1) // 2]
    _, cy = midpoint(token)
    return Orientation.ON_CLOCKWISE if p.y >= cy else Orientation.ON_COUNTER_CLOCKWISE


def stroke_center(stroke: Stroke) -> tuple[float, float]:
    """Center of a stroke's bounding box."""
    xs, ys = stroke.xs, stroke.ys
    return (
        float((xs.max() + xs.min()) / 2.0),
        float((ys.max() + ys.min()) / 2.0),
    )


def extract_token_features(
    token: Token, stroke: Stroke | None = None, dl: DirectionLength | None = None
) -> TokenFeatures:
    """Compute all features of one token against its parent stroke."""
    stroke = stroke if stroke is not None else token.stroke
    pct, category = length_ratio(token, stroke, dl)
    mid = midpoint(token)
    _, center_y = stroke_center(stroke)
    return TokenFeatures(
        length_ratio_pct=pct,
        length_category=category,
        direction_deg=direction(token),
        midpoint=mid,
        orientation=orientation(token),
        midpoint_above_center=mid[1] >= center_y,
    )


def direction_bin(deg: float) -> int:
    """Quantize a direction in [0, 90] to one of 8 bins of 11.25 degrees;
    90 itself lands in the last bin."""
    return min(int(deg / DIRECTION_BIN_DEG), DIRECTION_BIN_COUNT - 1)


def token_bits(tf: TokenFeatures) -> list[int]:
    """The 15-bit slice for one present token."""
    bits = [0] * BITS_PER_TOKEN
    bits[CATEGORY_ORDER.index(tf.length_category)] = 1
    bits[4 + direction_bin(tf.direction_deg)] = 1
    bits[12] = 1 if tf.orientation is Orientation.ON_CLOCKWISE else 0
    bits[13] = 1 if tf.midpoint_above_center else 0
    bits[14] = 1
    return bits


def encode(
    sample_tokens: Sequence[TokenFeatures], layout: EncodingLayout | None = None
) -> EncodedVector:
    """Pack per-token features into the fixed-width binary vector.

    Tokens beyond layout.max_tokens are dropped with a warning; missing
    slots stay all-zero (presence bit included).
    """
    layout = layout or EncodingLayout()
    if len(sample_tokens) > layout.max_tokens:
        warnings.warn(
            f"sample has {len(sample_tokens)} tokens; truncating to {layout.max_tokens}",
            RuntimeWarning,
            stacklevel=2,
        )
        sample_tokens = sample_tokens[: layout.max_tokens]
    bits: list[int] = []
    for tf in sample_tokens:
        bits.extend(token_bits(tf))
    bits.extend([0] * (layout.width - len(bits)))
    return EncodedVector(tuple(bits), layout)


def group_of(sample: InkSample) -> StrokeCountGroup:
    """Which stroke-count cluster a sample belongs to: the stroke count,
    clamped to 4."""
    n = sample.stroke_count
    return StrokeCountGroup(cluster_id=min(n, MAX_CLUSTERS), stroke_count=n)
