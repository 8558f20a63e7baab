"""Bundled example data: the worked-example series and a synthetic curve family.

The family has eight stroked curves ``a``..``h`` that run left to right and
form four visually similar pairs (a, b), (c, d), (e, f), (g, h).  Each curve
is drawn by a turtle: a list of moves ``(steps, turn per step in degrees,
width change per step)`` at unit step length.
"""

from __future__ import annotations

import math
from importlib import resources
from pathlib import Path

from .encoder import SampleSeries
from .sensor import Point, Polyline, parse_polyline_json, parse_series_csv

# (steps, turn/step, dwidth/step)
FAMILY_MOVES: dict[str, list[tuple[int, float, float]]] = {
    # gentle S: dip, rise, settle
    "a": [(3, 0, 0.1), (3, -20, 0.1), (2, 0, 0), (6, 20, -0.05), (2, 0, -0.05), (3, -20, 0), (3, 0, 0)],
    "b": [(3, 0, 0.1), (4, -15, 0.1), (2, 0, 0), (6, 20, -0.05), (2, 0, 0), (4, -15, -0.05), (2, 0, 0)],
    # loop, then c keeps climbing while d dives
    "c": [(3, 0, 0.05), (12, 30, 0.05), (2, 0, 0), (2, 20, -0.05), (3, 0, -0.05)],
    "d": [(3, 0, 0.05), (12, 30, 0.05), (2, 0, 0), (4, -30, -0.05), (3, 0, -0.05)],
    # single hump
    "e": [(2, 0, 0), (3, 15, 0.1), (3, 0, 0.1), (6, -15, -0.1), (3, 0, 0), (3, 15, 0)],
    "f": [(2, 0, 0), (3, 15, -0.05), (3, 0, 0), (6, -15, 0.1), (3, 0, 0.1), (3, 15, 0)],
    # double hump
    "g": [(2, 0, 0.1), (2, 30, 0.1), (2, -30, 0), (2, 30, -0.1), (2, -30, 0), (3, 0, 0.1)],
    "h": [(2, 0, 0.1), (2, 30, 0.1), (2, -30, 0.1), (2, 30, -0.1), (2, -30, 0), (3, 0, 0)],
}

FAMILY_PAIRS = (("a", "b"), ("c", "d"), ("e", "f"), ("g", "h"))


def turtle_polyline(name: str, moves, start_width: float = 1.0) -> Polyline:
    x = y = heading = 0.0
    w = start_width
    points = [Point(x, y, w)]
    for steps, turn, dw in moves:
        for _ in range(steps):
            heading += turn
            x += math.cos(math.radians(heading))
            y += math.sin(math.radians(heading))
            w = round(max(w + dw, 0.0), 6)
            points.append(Point(x, y, w))
    return Polyline(name, tuple(points))


def curve_family() -> list[Polyline]:
    return [turtle_polyline(name, moves) for name, moves in FAMILY_MOVES.items()]


def write_family(directory: Path) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for poly in curve_family():
        path = directory / f"{poly.name}.json"
        path.write_text(poly.to_json() + "\n", encoding="utf-8")
        paths.append(path)
    return paths


def data_path(*parts: str) -> Path:
    return Path(str(resources.files("diffconcepts").joinpath("data", *parts)))


def bundled_family() -> list[Polyline]:
    """The family as shipped in the package data (identical to :func:`curve_family`)."""
    return [parse_polyline_json(data_path("curves", f"{n}.json").read_text(encoding="utf-8"))
            for n in FAMILY_MOVES]


def worked_series() -> SampleSeries:
    """The worked-example curve: width ``w`` and angle ``a`` at 17 samples."""
    return parse_series_csv(data_path("worked_example.csv").read_text(encoding="utf-8"), name="worked")
