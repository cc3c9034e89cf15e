"""Planar geometry for thick-segment polygon outlines.

Coordinates follow the math convention: y grows upward, angle 0 is the +x
axis, angles increase counterclockwise. Screen-oriented callers convert
before they get here.

All functions are pure; shapes and points are immutable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterator


class ShapeError(ValueError):
    """A shape definition violates a structural invariant."""


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"point coordinates must be finite, got ({self.x}, {self.y})")


@dataclass(frozen=True)
class Segment:
    """One directed edge of a shape outline, from vertex a toward vertex b."""

    a: Point
    b: Point
    index: int

    def __post_init__(self) -> None:
        if self.a == self.b:
            raise ShapeError(f"segment {self.index} has zero length at ({self.a.x}, {self.a.y})")

    @property
    def length(self) -> float:
        return math.hypot(self.b.x - self.a.x, self.b.y - self.a.y)


@dataclass(frozen=True)
class Shape:
    """Closed polygon outline with a band thickness.

    Segment i runs from vertex i to vertex (i+1) mod n. The outline is the
    set of points within `thickness` of some segment's centerline.
    """

    name: str
    vertices: tuple[Point, ...]
    thickness: float

    def __post_init__(self) -> None:
        if len(self.vertices) < 3:
            raise ShapeError(f"shape {self.name!r} needs at least 3 vertices, got {len(self.vertices)}")
        if not (self.thickness > 0 and math.isfinite(self.thickness)):
            raise ShapeError(f"shape {self.name!r} thickness must be > 0, got {self.thickness}")
        n = len(self.vertices)
        for i in range(n):
            if self.vertices[i] == self.vertices[(i + 1) % n]:
                raise ShapeError(
                    f"shape {self.name!r} has coincident consecutive vertices at index {i}"
                )

    @property
    def n(self) -> int:
        return len(self.vertices)

    def segment(self, i: int) -> Segment:
        return Segment(self.vertices[i], self.vertices[(i + 1) % self.n], i)

    def segments(self) -> Iterator[Segment]:
        for i in range(self.n):
            yield self.segment(i)

    def perimeter(self) -> float:
        return sum(s.length for s in self.segments())

    def bounds(self) -> tuple[float, float, float, float]:
        """(min_x, min_y, max_x, max_y) of the vertex set (band not included)."""
        xs = [v.x for v in self.vertices]
        ys = [v.y for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)


def nearest_point_on_segment(p: Point, s: Segment) -> Point:
    """Closest point to p on the closed segment [a, b].

    Projects p onto the segment's line and clamps the parameter to [0, 1].
    """
    dx = s.b.x - s.a.x
    dy = s.b.y - s.a.y
    t = ((p.x - s.a.x) * dx + (p.y - s.a.y) * dy) / (dx * dx + dy * dy)
    t = min(1.0, max(0.0, t))
    return Point(s.a.x + t * dx, s.a.y + t * dy)


def distance_to_segment(p: Point, s: Segment) -> float:
    q = nearest_point_on_segment(p, s)
    return math.hypot(p.x - q.x, p.y - q.y)


def on_segment_band(p: Point, s: Segment, thickness: float) -> bool:
    """True iff p lies within `thickness` of the segment's centerline (boundary inclusive)."""
    return distance_to_segment(p, s) <= thickness


def in_target_region(p: Point, s: Segment, thickness: float) -> bool:
    """True iff p is in the half-disc of radius `thickness` capping the far end of s.

    The half-disc sits at the end vertex b and faces away from the segment:
    p must be within `thickness` of b and on or beyond the perpendicular to
    the segment at b, i.e. (p - b) . (b - a) >= 0.
    """
    px = p.x - s.b.x
    py = p.y - s.b.y
    if math.hypot(px, py) > thickness:
        return False
    return px * (s.b.x - s.a.x) + py * (s.b.y - s.a.y) >= 0.0


def on_shape(p: Point, shape: Shape) -> bool:
    """True iff p lies on the outline band of any segment of the shape."""
    return any(distance_to_segment(p, s) <= shape.thickness for s in shape.segments())


def shape_from_dict(data: object) -> Shape:
    """Build a Shape from the JSON object form, with diagnostics on bad input.

    Expected form: {"name": str, "vertices": [[x, y], ...], "thickness": number}.
    The vertex list is in order; the polygon closes implicitly.
    """
    if not isinstance(data, dict):
        raise ShapeError(f"shape file must hold a JSON object, got {type(data).__name__}")
    name = data.get("name")
    if not isinstance(name, str) or not name:
        raise ShapeError("shape is missing a non-empty 'name' string")
    raw_vertices = data.get("vertices")
    if not isinstance(raw_vertices, list):
        raise ShapeError(f"shape {name!r} is missing a 'vertices' list")
    vertices = []
    for i, entry in enumerate(raw_vertices):
        if (
            not isinstance(entry, (list, tuple))
            or len(entry) != 2
            or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in entry)
        ):
            raise ShapeError(f"shape {name!r} vertex {i} must be a [x, y] number pair, got {entry!r}")
        try:
            vertices.append(Point(float(entry[0]), float(entry[1])))
        except ValueError as exc:
            raise ShapeError(f"shape {name!r} vertex {i}: {exc}") from exc
    thickness = data.get("thickness")
    if not isinstance(thickness, (int, float)) or isinstance(thickness, bool):
        raise ShapeError(f"shape {name!r} is missing a numeric 'thickness'")
    return Shape(name=name, vertices=tuple(vertices), thickness=float(thickness))


def shape_to_dict(shape: Shape) -> dict:
    return {
        "name": shape.name,
        "vertices": [[v.x, v.y] for v in shape.vertices],
        "thickness": shape.thickness,
    }


def load_shape(path: str) -> Shape:
    """Load a shape JSON file, raising ShapeError with a diagnostic on any defect."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ShapeError(f"cannot read shape file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ShapeError(f"shape file {path} is not valid JSON: {exc}") from exc
    return shape_from_dict(data)
