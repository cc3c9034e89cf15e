"""Synthetic explorers that close the guidance loop headlessly.

The agent is deliberately crude: at every tick it moves a fixed step along
the quantized eight-way direction it is shown (what a person would feel),
optionally plus seeded noise. If such a follower laps the shape, the
direction encoding carries enough information to explore it completely.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .geometry import Point, Shape
from .guidance import GuidanceEvent, GuidanceState, reset, step
from .tactons import TactileState


@dataclass(frozen=True)
class AgentConfig:
    step_size: float
    noise_radius: float = 0.0
    max_steps: int = 0
    seed: int = 0
    tick_ms: int = 10

    def __post_init__(self) -> None:
        if not (self.step_size > 0):
            raise ValueError("step_size must be positive")
        if self.noise_radius < 0:
            raise ValueError("noise_radius cannot be negative")
        if self.max_steps < 0:
            raise ValueError("max_steps cannot be negative")
        if self.tick_ms <= 0:
            raise ValueError("tick_ms must be positive")


@dataclass
class AgentTick:
    """Everything observed at one tick, for logging and analysis."""

    time_ms: int
    position: Point
    tactile: TactileState
    segment_index: int
    events: list[GuidanceEvent] = field(default_factory=list)


@dataclass
class AgentRun:
    trajectory: list[Point]
    ticks: list[AgentTick]
    events: list[GuidanceEvent]
    laps: int
    final_state: GuidanceState


def simulate(shape: Shape, start: Point, cfg: AgentConfig) -> AgentRun:
    """Run the follower until it completes a lap or exhausts max_steps."""
    state = reset(shape)
    rng = random.Random(cfg.seed)
    p = start
    trajectory: list[Point] = []
    ticks: list[AgentTick] = []
    events: list[GuidanceEvent] = []

    for i in range(cfg.max_steps):
        t = i * cfg.tick_ms
        trajectory.append(p)
        state, tactile, step_events = step(state, p, t)
        ticks.append(AgentTick(t, p, tactile, state.current_segment, step_events))
        events.extend(step_events)
        if state.laps_completed >= 1:
            break
        ux, uy = tactile.direction.unit
        nx = ny = 0.0
        if cfg.noise_radius > 0:
            r = cfg.noise_radius * math.sqrt(rng.random())
            angle = rng.random() * 2.0 * math.pi
            nx = r * math.cos(angle)
            ny = r * math.sin(angle)
        p = Point(p.x + cfg.step_size * ux + nx, p.y + cfg.step_size * uy + ny)

    return AgentRun(
        trajectory=trajectory,
        ticks=ticks,
        events=events,
        laps=state.laps_completed,
        final_state=state,
    )


def greedy_follow(
    shape: Shape, start: Point, cfg: AgentConfig
) -> tuple[list[Point], list[GuidanceEvent], int]:
    """Follow the guidance from `start`; returns (trajectory, events, laps)."""
    run = simulate(shape, start, cfg)
    return run.trajectory, run.events, run.laps


def default_step_budget(shape: Shape, step_size: float, laps: int = 1) -> int:
    """Step budget that comfortably covers `laps` laps of zigzag following."""
    return int(math.ceil(4.0 * laps * shape.perimeter() / step_size))
