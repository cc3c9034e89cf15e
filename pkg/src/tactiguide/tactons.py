"""Encoding of tactile state into time-varying 4x4 pin frames.

A tactile state is (direction, blink level, on-shape flag). The index-finger
array alternates a directional glyph with a blank frame, both phases lasting
half the blink period; the middle-finger array is a binary all-raised /
all-lowered on-shape indicator.

Glyphs live in a bundled JSON asset (one 4x4 bitmap per direction) so the
patterns can be corrected without touching code.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from typing import Mapping

_SQRT_HALF = math.sqrt(0.5)


class Direction8(Enum):
    """The eight compass directions, counterclockwise from east."""

    E = "E"
    NE = "NE"
    N = "N"
    NW = "NW"
    W = "W"
    SW = "SW"
    S = "S"
    SE = "SE"

    @property
    def center_deg(self) -> float:
        """Center angle of this direction's sector (E=0, counterclockwise)."""
        return _CENTER_DEG[self]

    @property
    def unit(self) -> tuple[float, float]:
        """Unit vector pointing this way (exact zeros on the axes)."""
        return _UNIT[self]

    @classmethod
    def from_name(cls, name: str) -> "Direction8":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown direction {name!r}; expected one of "
                             f"{', '.join(d.name for d in cls)}") from None


_CENTER_DEG = {
    Direction8.E: 0.0,
    Direction8.NE: 45.0,
    Direction8.N: 90.0,
    Direction8.NW: 135.0,
    Direction8.W: 180.0,
    Direction8.SW: 225.0,
    Direction8.S: 270.0,
    Direction8.SE: 315.0,
}

_UNIT = {
    Direction8.E: (1.0, 0.0),
    Direction8.NE: (_SQRT_HALF, _SQRT_HALF),
    Direction8.N: (0.0, 1.0),
    Direction8.NW: (-_SQRT_HALF, _SQRT_HALF),
    Direction8.W: (-1.0, 0.0),
    Direction8.SW: (-_SQRT_HALF, -_SQRT_HALF),
    Direction8.S: (0.0, -1.0),
    Direction8.SE: (_SQRT_HALF, -_SQRT_HALF),
}


class BlinkLevel(Enum):
    """Blink speed encoding distance to the target: faster means closer.

    The numeric value is the wire level (1 slow .. 3 fast).
    """

    SLOW = 1
    MEDIUM = 2
    FAST = 3


DEFAULT_PERIODS_MS: Mapping[BlinkLevel, int] = {
    BlinkLevel.SLOW: 1000,
    BlinkLevel.MEDIUM: 500,
    BlinkLevel.FAST: 250,
}


def validate_periods(periods: Mapping[BlinkLevel, int]) -> None:
    """Check a blink period table: all positive, fast < medium < slow."""
    for level in BlinkLevel:
        if level not in periods or periods[level] <= 0:
            raise ValueError(f"blink period table needs a positive period for {level.name}")
    if not periods[BlinkLevel.FAST] < periods[BlinkLevel.MEDIUM] < periods[BlinkLevel.SLOW]:
        raise ValueError("blink periods must strictly decrease from SLOW to FAST")


@dataclass(frozen=True)
class PinFrame:
    """State of one 4x4 pin array; pins are row-major, row 0 on top, True = raised."""

    pins: tuple[bool, ...]

    def __post_init__(self) -> None:
        if len(self.pins) != 16 or not all(isinstance(p, bool) for p in self.pins):
            raise ValueError("a pin frame holds exactly 16 booleans")

    @classmethod
    def from_rows(cls, rows) -> "PinFrame":
        """Build from four rows of four truthy/falsy cells."""
        if len(rows) != 4 or any(len(r) != 4 for r in rows):
            raise ValueError("expected a 4x4 grid")
        return cls(tuple(bool(c) for row in rows for c in row))

    def pin(self, row: int, col: int) -> bool:
        return self.pins[row * 4 + col]

    def rows(self) -> tuple[tuple[bool, ...], ...]:
        return tuple(self.pins[r * 4:(r + 1) * 4] for r in range(4))

    def bits(self) -> int:
        """Pack into a 16-bit integer (bit i = pin i), handy for comparisons."""
        value = 0
        for i, raised in enumerate(self.pins):
            if raised:
                value |= 1 << i
        return value


FRAME_BLANK = PinFrame((False,) * 16)
FRAME_FULL = PinFrame((True,) * 16)


@dataclass(frozen=True)
class TactileState:
    """Semantic output of the guidance engine before frame rendering."""

    direction: Direction8
    blink: BlinkLevel
    on_shape: bool


RAISED_CHAR = "●"   # ●
LOWERED_CHAR = "·"  # ·


def render_ascii(frame: PinFrame) -> str:
    """Four lines of four characters: ● raised, · lowered."""
    return "\n".join(
        "".join(RAISED_CHAR if cell else LOWERED_CHAR for cell in row)
        for row in frame.rows()
    )


def parse_ascii(text: str) -> PinFrame:
    """Inverse of render_ascii; rejects anything that is not a clean 4x4 block."""
    lines = text.splitlines()
    if len(lines) != 4 or any(len(line) != 4 for line in lines):
        raise ValueError("expected 4 lines of 4 characters")
    pins = []
    for line in lines:
        for ch in line:
            if ch == RAISED_CHAR:
                pins.append(True)
            elif ch == LOWERED_CHAR:
                pins.append(False)
            else:
                raise ValueError(f"unexpected character {ch!r} in pin frame text")
    return PinFrame(tuple(pins))


def _load_glyph_data(data: object, source: str) -> dict[Direction8, PinFrame]:
    if not isinstance(data, dict):
        raise ValueError(f"glyph asset {source} must be a JSON object")
    expected = {d.name for d in Direction8}
    if set(data) != expected:
        raise ValueError(
            f"glyph asset {source} must define exactly the 8 directions; "
            f"got {sorted(data)}"
        )
    glyphs: dict[Direction8, PinFrame] = {}
    for name, rows in data.items():
        frame = PinFrame.from_rows(rows)
        if not any(frame.pins):
            raise ValueError(f"glyph asset {source}: glyph {name} has no raised pins")
        glyphs[Direction8[name]] = frame
    if len({f.bits() for f in glyphs.values()}) != 8:
        raise ValueError(f"glyph asset {source}: the 8 glyphs must be pairwise distinct")
    return glyphs


def load_glyphs(path: str | None = None) -> dict[Direction8, PinFrame]:
    """Load and validate a direction glyph table (bundled asset by default)."""
    if path is None:
        text = resources.files("tactiguide").joinpath("assets/glyphs.json").read_text("utf-8")
        source = "assets/glyphs.json"
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
        source = path
    return _load_glyph_data(json.loads(text), source)


_default_glyphs: dict[Direction8, PinFrame] | None = None


def default_glyphs() -> dict[Direction8, PinFrame]:
    global _default_glyphs
    if _default_glyphs is None:
        _default_glyphs = load_glyphs()
    return _default_glyphs


def pattern_for_direction(
    direction: Direction8,
    glyphs: Mapping[Direction8, PinFrame] | None = None,
) -> PinFrame:
    """The 4x4 glyph displayed for a direction during the raised phase."""
    table = glyphs if glyphs is not None else default_glyphs()
    return table[direction]


def frame_at(
    state: TactileState,
    time_ms: int,
    periods: Mapping[BlinkLevel, int] | None = None,
    glyphs: Mapping[Direction8, PinFrame] | None = None,
) -> tuple[PinFrame, PinFrame]:
    """Both array frames at a given time.

    The index frame shows the direction glyph during the first half of the
    blink period and the blank frame during the second half, so both phases
    get equal time. The middle frame is all-raised iff the cursor is on the
    shape; it does not blink.
    """
    table = periods if periods is not None else DEFAULT_PERIODS_MS
    period = table[state.blink]
    in_raised_phase = (time_ms % period) * 2 < period
    index_frame = pattern_for_direction(state.direction, glyphs) if in_raised_phase else FRAME_BLANK
    middle_frame = FRAME_FULL if state.on_shape else FRAME_BLANK
    return index_frame, middle_frame
