"""Core ink data types and the on-disk ink file format.

A handwriting pattern is an ordered list of strokes; a stroke is the pen
trajectory between one pen-down and the next pen-up. Coordinates use the
mathematical convention: y grows upward. UIs capturing screen coordinates
must flip the y axis before building these types.

The ink file format is UTF-8 JSON::

    {"version": 1, "samples": [{"label": "...", "strokes": [[[x, y], ...], ...]}]}

Points may carry an optional third element, a millisecond timestamp; 2- and
3-element points must not be mixed within one stroke.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

INK_FORMAT_VERSION = 1

#: Reserved label for live recognition input that has no ground truth yet.
UNLABELED = "unlabeled"


class InkFormatError(ValueError):
    """Malformed ink file syntax. Carries the offending line/column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class InkValidationError(ValueError):
    """Structurally valid file whose content violates an ink invariant."""

    def __init__(self, message: str, sample_index: int | None = None, field: str | None = None):
        prefix = ""
        if sample_index is not None:
            prefix = f"sample {sample_index}: "
        if field is not None:
            prefix += f"{field}: "
        super().__init__(prefix + message)
        self.sample_index = sample_index
        self.field = field


@dataclass(frozen=True)
class InkPoint:
    """One pen position. x grows rightward, y grows upward; t is optional milliseconds."""

    x: float
    y: float
    t: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InkValidationError(f"non-finite coordinates ({self.x}, {self.y})", field="point")
        if self.t is not None and not math.isfinite(self.t):
            raise InkValidationError(f"non-finite timestamp {self.t}", field="point")


@dataclass(frozen=True)
class Stroke:
    """Pen trajectory between pen-down and pen-up: at least two points, no
    consecutive exact (x, y) duplicates, timestamps (if any) non-decreasing
    and present on either all points or none."""

    points: tuple[InkPoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        pts = self.points
        if len(pts) < 2:
            raise InkValidationError(f"stroke has {len(pts)} point(s), need at least 2", field="stroke")
        timed = [p.t is not None for p in pts]
        if any(timed) and not all(timed):
            raise InkValidationError("mixed timed and untimed points within one stroke", field="stroke")
        for i in range(1, len(pts)):
            if pts[i].x == pts[i - 1].x and pts[i].y == pts[i - 1].y:
                raise InkValidationError(
                    f"consecutive duplicate point at index {i}; dedup on ingest", field="stroke"
                )
            if pts[i].t is not None and pts[i].t < pts[i - 1].t:
                raise InkValidationError(f"timestamp decreases at index {i}", field="stroke")

    def __len__(self) -> int:
        return len(self.points)

    def _axis(self, name: str, values) -> np.ndarray:
        arr = np.array(values, dtype=float)
        arr.flags.writeable = False
        object.__setattr__(self, name, arr)
        return arr

    @property
    def xs(self) -> np.ndarray:
        try:
            return self._xs
        except AttributeError:
            return self._axis("_xs", [p.x for p in self.points])

    @property
    def ys(self) -> np.ndarray:
        try:
            return self._ys
        except AttributeError:
            return self._axis("_ys", [p.y for p in self.points])


@dataclass(frozen=True)
class InkSample:
    """One labeled handwriting pattern: the union of its strokes."""

    label: str
    strokes: tuple[Stroke, ...]

    def __post_init__(self):
        object.__setattr__(self, "strokes", tuple(self.strokes))
        if not isinstance(self.label, str) or not self.label:
            raise InkValidationError("label must be a non-empty string", field="label")
        if len(self.strokes) < 1:
            raise InkValidationError("sample needs at least one stroke", field="strokes")

    @property
    def stroke_count(self) -> int:
        return len(self.strokes)

    @property
    def point_count(self) -> int:
        return sum(len(s) for s in self.strokes)


@dataclass(frozen=True)
class Token:
    """A contiguous run of one stroke's points, cut at critical points.

    start/end are inclusive point indices into the parent stroke; tokens of a
    stroke are disjoint and cover it exactly.
    """

    stroke: Stroke
    stroke_index: int
    start: int
    end: int

    def __post_init__(self):
        if not (0 <= self.start <= self.end < len(self.stroke)):
            raise InkValidationError(
                f"token range [{self.start}, {self.end}] outside stroke of {len(self.stroke)} points",
                field="token",
            )

    def __len__(self) -> int:
        return self.end - self.start + 1

    @property
    def points(self) -> tuple[InkPoint, ...]:
        return self.stroke.points[self.start : self.end + 1]

    @property
    def xs(self) -> np.ndarray:
        return np.array([p.x for p in self.points], dtype=float)

    @property
    def ys(self) -> np.ndarray:
        return np.array([p.y for p in self.points], dtype=float)


def dedup_points(points: Iterable[InkPoint]) -> tuple[list[InkPoint], int]:
    """Drop consecutive points with identical (x, y), keeping the first of each run.

    Returns the surviving points and the number dropped. Timestamps are not
    compared: a repeated position is a zero-length segment regardless of time.
    """
    kept: list[InkPoint] = []
    dropped = 0
    for p in points:
        if kept and p.x == kept[-1].x and p.y == kept[-1].y:
            dropped += 1
            continue
        kept.append(p)
    return kept, dropped


def _point_from_raw(raw, sample_index: int, stroke_index: int, point_index: int, arity: int) -> InkPoint:
    where = f"strokes[{stroke_index}][{point_index}]"
    if not isinstance(raw, list) or len(raw) not in (2, 3):
        raise InkValidationError("point must be [x, y] or [x, y, t]", sample_index, where)
    if len(raw) != arity:
        raise InkValidationError("mixed 2- and 3-element points within one stroke", sample_index, where)
    for v in raw:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise InkValidationError(f"non-numeric point component {v!r}", sample_index, where)
    try:
        if arity == 2:
            return InkPoint(float(raw[0]), float(raw[1]))
        return InkPoint(float(raw[0]), float(raw[1]), float(raw[2]))
    except InkValidationError as exc:
        raise InkValidationError(str(exc), sample_index, where) from exc


def stroke_from_lists(raw_stroke, sample_index: int = 0, stroke_index: int = 0) -> tuple[Stroke, int]:
    """Build one Stroke from a raw ``[[x, y], ...]`` list, deduplicating on the way.

    Returns the stroke and the number of duplicate points dropped.
    """
    where = f"strokes[{stroke_index}]"
    if not isinstance(raw_stroke, list) or not raw_stroke:
        raise InkValidationError("stroke must be a non-empty array of points", sample_index, where)
    first = raw_stroke[0]
    if not isinstance(first, list) or len(first) not in (2, 3):
        raise InkValidationError("point must be [x, y] or [x, y, t]", sample_index, where)
    arity = len(first)
    points = [
        _point_from_raw(rp, sample_index, stroke_index, pi, arity) for pi, rp in enumerate(raw_stroke)
    ]
    points, dropped = dedup_points(points)
    try:
        return Stroke(tuple(points)), dropped
    except InkValidationError as exc:
        raise InkValidationError(str(exc), sample_index, where) from exc


def parse_ink_file(data: bytes | str) -> tuple[list[InkSample], int]:
    """Parse an ink file into validated samples.

    Returns ``(samples, duplicates_dropped)`` where the second element counts
    consecutive duplicate points removed on ingest.

    Raises InkFormatError for malformed syntax (with line/offset) and
    InkValidationError for invariant violations (naming sample and field).
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InkFormatError(f"not UTF-8 text: {exc}") from exc
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise InkFormatError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from exc

    if not isinstance(doc, dict):
        raise InkFormatError("top level must be an object")
    if doc.get("version") != INK_FORMAT_VERSION:
        raise InkFormatError(f"unsupported version {doc.get('version')!r}, expected {INK_FORMAT_VERSION}")
    raw_samples = doc.get("samples")
    if not isinstance(raw_samples, list):
        raise InkFormatError("missing or non-array 'samples'")

    samples: list[InkSample] = []
    total_dropped = 0
    for si, raw in enumerate(raw_samples):
        if not isinstance(raw, dict):
            raise InkValidationError("sample must be an object", si)
        label = raw.get("label", UNLABELED)
        if not isinstance(label, str) or not label:
            raise InkValidationError("label must be a non-empty string", si, "label")
        raw_strokes = raw.get("strokes")
        if not isinstance(raw_strokes, list) or not raw_strokes:
            raise InkValidationError("strokes must be a non-empty array", si, "strokes")
        strokes = []
        for ki, raw_stroke in enumerate(raw_strokes):
            stroke, dropped = stroke_from_lists(raw_stroke, si, ki)
            strokes.append(stroke)
            total_dropped += dropped
        samples.append(InkSample(label, tuple(strokes)))
    return samples, total_dropped


def _point_to_list(p: InkPoint) -> list[float]:
    if p.t is None:
        return [p.x, p.y]
    return [p.x, p.y, p.t]


def sample_to_jsonable(sample: InkSample) -> dict:
    return {
        "label": sample.label,
        "strokes": [[_point_to_list(p) for p in stroke.points] for stroke in sample.strokes],
    }


def write_ink_file(samples: Sequence[InkSample]) -> bytes:
    """Serialize samples to ink file bytes. parse(write(s)) reproduces s exactly:
    floats are written with full round-trip precision."""
    doc = {"version": INK_FORMAT_VERSION, "samples": [sample_to_jsonable(s) for s in samples]}
    return json.dumps(doc, ensure_ascii=False, separators=(",", ":")).encode("utf-8")


def load_ink_file(path) -> tuple[list[InkSample], int]:
    with open(path, "rb") as fh:
        return parse_ink_file(fh.read())


def save_ink_file(path, samples: Sequence[InkSample]) -> None:
    with open(path, "wb") as fh:
        fh.write(write_ink_file(samples))
