"""Reading curves: series CSV, polyline JSON, and sensor attribute derivation.

A polyline is a sequence of axis points with a stroke width.  The sensor turns
it into a :class:`~diffconcepts.encoder.SampleSeries` over any ordered subset
of ``angle``, ``width``, ``x`` and ``y``.  Derived columns use the short names
``a``, ``w``, ``x`` and ``y`` so that tokens read like ``a:>`` or ``w:><``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .encoder import SampleSeries
from .errors import DerivationError, InvalidArgumentError, ParseError

SENSOR_PARAMETERS = {"angle": "a", "width": "w", "x": "x", "y": "y"}
_SHORT_TO_LONG = {v: k for k, v in SENSOR_PARAMETERS.items()}

# the sensor combinations examined on the curve family
SENSOR_COMBINATIONS = (
    ("angle",),
    ("angle", "width"),
    ("angle", "x", "y"),
    ("angle", "x"),
    ("angle", "y"),
    ("angle", "width", "x", "y"),
)


class Point(NamedTuple):
    x: float
    y: float
    w: float


@dataclass(frozen=True)
class Polyline:
    name: str
    points: tuple[Point, ...]

    def __post_init__(self):
        pts = tuple(Point(*map(float, p)) for p in self.points)
        if not pts:
            raise InvalidArgumentError(f"polyline {self.name!r} has no points")
        for i, p in enumerate(pts):
            if not all(math.isfinite(v) for v in p):
                raise InvalidArgumentError(f"polyline {self.name!r}: point {i} is not finite")
            if p.w < 0:
                raise InvalidArgumentError(f"polyline {self.name!r}: point {i} has negative width")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def as_array(self) -> np.ndarray:
        return np.array(self.points, dtype=float).reshape(-1, 3)

    def to_json(self) -> str:
        return json.dumps(
            {"name": self.name, "points": [{"x": p.x, "y": p.y, "w": p.w} for p in self.points]},
            separators=(",", ":"),
        )


@dataclass(frozen=True)
class AttributeSelection:
    """Ordered, duplicate-free subset of the sensor parameters."""

    chosen: tuple[str, ...]

    def __post_init__(self):
        chosen = tuple(_SHORT_TO_LONG.get(c, c) for c in self.chosen)
        if not chosen:
            raise InvalidArgumentError("select at least one sensor parameter")
        unknown = [c for c in chosen if c not in SENSOR_PARAMETERS]
        if unknown:
            raise InvalidArgumentError(
                f"unknown sensor parameter(s) {unknown}; choose from {', '.join(SENSOR_PARAMETERS)}"
            )
        if len(set(chosen)) != len(chosen):
            raise InvalidArgumentError(f"duplicate sensor parameters in {chosen}")
        object.__setattr__(self, "chosen", chosen)

    @classmethod
    def parse(cls, text: str) -> AttributeSelection:
        return cls(tuple(p.strip() for p in text.split(",") if p.strip()))

    @property
    def columns(self) -> tuple[str, ...]:
        return tuple(SENSOR_PARAMETERS[c] for c in self.chosen)

    def label(self) -> str:
        return ", ".join(self.chosen)


def parse_series_csv(text: str, name: str = "series") -> SampleSeries:
    """Series from CSV text: a header of attribute names, then one sample per row."""
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows:
        raise ParseError("missing header row", row=1)
    header = [h.strip() for h in rows[0]]
    for col, h in enumerate(header, 1):
        if not h or ":" in h:
            raise ParseError(f"invalid attribute name {h!r}", row=1, column=col)
    if len(set(header)) != len(header):
        raise ParseError("duplicate attribute names in header", row=1)
    if len(rows) == 1:
        raise ParseError("empty body", row=2)
    values = []
    for r, row in enumerate(rows[1:], 2):
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} cells, found {len(row)}", row=r)
        parsed = []
        for c, cell in enumerate(row, 1):
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(f"not a number: {cell.strip()!r}", row=r, column=c) from None
            if not math.isfinite(v):
                raise ParseError(f"non-finite value {cell.strip()!r}", row=r, column=c)
            parsed.append(v)
        values.append(parsed)
    return SampleSeries(name, tuple(header), values)


def series_to_csv(series: SampleSeries) -> str:
    """CSV with shortest round-trip float formatting; inverse of :func:`parse_series_csv`."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(series.attributes)
    for row in series.values.tolist():
        w.writerow(repr(float(v)) for v in row)
    return buf.getvalue()


def parse_polyline_json(text: str) -> Polyline:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", row=exc.lineno, column=exc.colno) from None
    if not isinstance(data, dict):
        raise ParseError("polyline JSON must be an object")
    name = data.get("name")
    if not isinstance(name, str):
        raise ParseError("missing or non-text 'name'")
    pts = data.get("points")
    if not isinstance(pts, list) or not pts:
        raise ParseError("'points' must be a non-empty array")
    points = []
    for i, p in enumerate(pts):
        if not isinstance(p, dict):
            raise ParseError(f"point {i} is not an object")
        coords = []
        for key in ("x", "y", "w"):
            v = p.get(key)
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ParseError(f"point {i}: missing or non-numeric {key!r}")
            if not math.isfinite(v):
                raise ParseError(f"point {i}: non-finite {key!r}")
            coords.append(float(v))
        if coords[2] < 0:
            raise ParseError(f"point {i}: negative width")
        points.append(Point(*coords))
    return Polyline(name, tuple(points))


def resample_uniform(polyline: Polyline, step: float) -> Polyline:
    """Points every ``step`` of arc length, keeping both original endpoints.

    ``x``, ``y`` and width are interpolated linearly along the arc; the final
    gap may be shorter than ``step``.
    """
    if not (math.isfinite(step) and step > 0):
        raise InvalidArgumentError(f"step must be positive, got {step!r}")
    if len(polyline) < 2:
        raise InvalidArgumentError("resampling needs at least two points")
    pts = polyline.as_array()
    seg = np.hypot(np.diff(pts[:, 0]), np.diff(pts[:, 1]))
    keep = np.concatenate([[True], seg > 0])
    pts, seg = pts[keep], seg[seg > 0]
    arc = np.concatenate([[0.0], np.cumsum(seg)])
    total = arc[-1]
    if total == 0:
        first, last = polyline.points[0], polyline.points[-1]
        return Polyline(polyline.name, (first, last))
    count = int(math.floor(total / step))
    stations = step * np.arange(count + 1)
    # drop a station that lands on the end up to rounding
    stations = stations[stations < total - 1e-12 * max(1.0, total)]
    out = np.column_stack([np.interp(stations, arc, pts[:, k]) for k in range(3)])
    out[0] = pts[0]
    out = np.vstack([out, pts[-1:]])
    return Polyline(polyline.name, tuple(Point(*row) for row in out.tolist()))


def unwrap_angles(angles: Iterable[float]) -> list[float]:
    """Shift each angle by whole turns so successive steps stay within 180 degrees."""
    a = np.asarray(list(angles), dtype=float)
    if a.size == 0:
        return []
    turns = np.rint(np.diff(a) / 360.0).astype(np.int64)
    offsets = np.concatenate([[0], -np.cumsum(turns)]) * 360
    return (a + offsets).tolist()


def segment_angles(polyline: Polyline) -> list[float]:
    """Unwrapped heading in degrees from each point to the next.

    The last point repeats the previous heading.  A zero-length step takes the
    heading of the nearest non-degenerate step before it (or after it, at the
    start).
    """
    if len(polyline) < 2:
        raise DerivationError(f"polyline {polyline.name!r}: angle needs at least two points")
    pts = polyline.as_array()
    dx, dy = np.diff(pts[:, 0]), np.diff(pts[:, 1])
    moving = (dx != 0) | (dy != 0)
    if not moving.any():
        raise DerivationError(f"polyline {polyline.name!r}: all points coincide, angle undefined")
    raw = np.degrees(np.arctan2(dy, dx))
    idx = np.where(moving, np.arange(raw.size), -1)
    idx = np.maximum.accumulate(idx)
    idx[idx < 0] = np.flatnonzero(moving)[0]
    headings = unwrap_angles(raw[idx])
    return headings + headings[-1:]


def derive_series(polyline: Polyline, selection: AttributeSelection | Sequence[str]) -> SampleSeries:
    """One sample per point with the selected sensor parameters, in selection order."""
    if not isinstance(selection, AttributeSelection):
        selection = AttributeSelection(tuple(selection))
    pts = polyline.as_array()
    cols = []
    for param in selection.chosen:
        if param == "angle":
            cols.append(segment_angles(polyline))
        elif param == "width":
            cols.append(pts[:, 2])
        elif param == "x":
            cols.append(pts[:, 0])
        else:
            cols.append(pts[:, 1])
    return SampleSeries(polyline.name, selection.columns, np.column_stack(cols))
