"""Cursor-to-tactile guidance around a shape outline.

The engine walks the outline one segment at a time, forever. While the
cursor sits inside the current segment's band, the direction pattern aims
at the segment's end vertex (the target); off the band it aims at the
nearest point on the segment. Entering the half-disc target region advances
to the next segment; wrapping past the last segment counts a lap.

States are immutable: step() returns a new state, so one session never
shares mutable data with another.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from fractions import Fraction

from .geometry import Point, Shape, in_target_region, nearest_point_on_segment, on_segment_band, on_shape
from .tactons import BlinkLevel, Direction8, TactileState

VERTEX_REACHED = "vertex_reached"
LAP_COMPLETED = "lap_completed"

# Sector lookup ordered by floor((theta + 22.5) / 45) mod 8.
_SECTOR_ORDER = (
    Direction8.E,
    Direction8.NE,
    Direction8.N,
    Direction8.NW,
    Direction8.W,
    Direction8.SW,
    Direction8.S,
    Direction8.SE,
)


class GuidanceError(RuntimeError):
    """The engine cannot make progress (malformed shape geometry)."""


@dataclass(frozen=True)
class GuidanceEvent:
    """Trace record of an advancement: a vertex reached or a lap closed."""

    kind: str
    segment_index: int
    time_ms: int


@dataclass(frozen=True)
class GuidanceState:
    shape: Shape
    current_segment: int
    laps_completed: int
    advancements: int
    last_direction: Direction8


def quantize_direction(dx: float, dy: float) -> Direction8:
    """Map a nonzero vector to the eight-direction sector containing its angle.

    Sectors are half-open counterclockwise: direction d covers
    [center - 22.5, center + 22.5) degrees, so an exact boundary angle
    belongs to the counterclockwise neighbor. The index arithmetic runs in
    exact rationals: float rounding of (theta + 22.5) / 45 could flip a
    boundary angle into the wrong sector.
    """
    if dx == 0.0 and dy == 0.0:
        raise ValueError("cannot quantize a zero vector")
    theta = math.degrees(math.atan2(dy, dx))
    index = int((Fraction(theta) + Fraction(45, 2)) // 45) % 8
    return _SECTOR_ORDER[index]


def blink_for_distance(distance: float, segment_length: float) -> BlinkLevel:
    """Blink level for a distance to the target, normalized by segment length.

    Thirds of the segment length split the three levels; the blink speeds up
    as the target gets closer, reaching FAST within the final third.
    """
    if segment_length <= 0:
        raise ValueError("segment length must be positive")
    if distance > 2.0 * segment_length / 3.0:
        return BlinkLevel.SLOW
    if distance > segment_length / 3.0:
        return BlinkLevel.MEDIUM
    return BlinkLevel.FAST


def aim_point(p: Point, state: GuidanceState) -> Point:
    """Where the direction pattern points: the target vertex from inside the
    band, the nearest point on the segment from outside."""
    seg = state.shape.segment(state.current_segment)
    if on_segment_band(p, seg, state.shape.thickness):
        return seg.b
    return nearest_point_on_segment(p, seg)


def reset(shape: Shape) -> GuidanceState:
    """Fresh state at segment 0, initially aiming from vertex 0 toward vertex 1."""
    v0, v1 = shape.vertices[0], shape.vertices[1]
    return GuidanceState(
        shape=shape,
        current_segment=0,
        laps_completed=0,
        advancements=0,
        last_direction=quantize_direction(v1.x - v0.x, v1.y - v0.y),
    )


def step(
    state: GuidanceState, p: Point, time_ms: int
) -> tuple[GuidanceState, TactileState, list[GuidanceEvent]]:
    """Process one cursor sample; returns the successor state, the tactile
    output, and any advancement events.

    A sample inside the current target region advances the segment, possibly
    several times for tiny segments, but never more than n times: needing an
    (n+1)th advancement means every target region contains p, which only a
    malformed shape can produce.
    """
    shape = state.shape
    n = shape.n
    thickness = shape.thickness
    current = state.current_segment
    laps = state.laps_completed
    advancements = state.advancements
    events: list[GuidanceEvent] = []

    advanced_this_call = 0
    while in_target_region(p, shape.segment(current), thickness):
        if advanced_this_call == n:
            raise GuidanceError(
                f"shape {shape.name!r}: target regions of all {n} segments overlap at "
                f"({p.x}, {p.y}); thickness is too large for this geometry"
            )
        events.append(GuidanceEvent(VERTEX_REACHED, current, time_ms))
        if current == n - 1:
            laps += 1
            events.append(GuidanceEvent(LAP_COMPLETED, current, time_ms))
        current = (current + 1) % n
        advancements += 1
        advanced_this_call += 1

    seg = shape.segment(current)
    interim = replace(
        state, current_segment=current, laps_completed=laps, advancements=advancements
    )
    aim = aim_point(p, interim)
    if aim.x == p.x and aim.y == p.y:
        direction = state.last_direction
    else:
        direction = quantize_direction(aim.x - p.x, aim.y - p.y)
    blink = blink_for_distance(math.hypot(p.x - seg.b.x, p.y - seg.b.y), seg.length)
    tactile = TactileState(direction=direction, blink=blink, on_shape=on_shape(p, shape))
    new_state = replace(interim, last_direction=direction)
    return new_state, tactile, events


def event_to_dict(event: GuidanceEvent) -> dict:
    return {"kind": event.kind, "seg": event.segment_index, "t": event.time_ms}


def step_record(
    time_ms: int,
    p: Point,
    tactile: TactileState,
    segment_index: int,
    events: list[GuidanceEvent],
) -> dict:
    """One session-log record for a step, with a stable key order."""
    return {
        "t": time_ms,
        "x": p.x,
        "y": p.y,
        "dir": tactile.direction.name,
        "blink": tactile.blink.value,
        "on_shape": tactile.on_shape,
        "seg": segment_index,
        "events": [event_to_dict(e) for e in events],
    }


def record_to_jsonl(record: dict) -> str:
    """Serialize one log record to a single compact JSON line."""
    return json.dumps(record, separators=(",", ":"))
