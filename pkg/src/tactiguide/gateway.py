"""Real-time session protocol between the engine and interactive clients.

Every message is one JSON object per line, in both directions. A session
walks the trial list at its own pace:

    client -> server: hello{v, mode, condition}; cursor{x, y, t};
                      answer{label, confidence}; next_trial{}
    server -> client: hello{v, periods_ms}; trial{index, count, time_limit_ms};
                      tactile{direction, blink, on_shape, t};
                      trial_end{reason, correct}; session_summary{trials, stats};
                      error{message}

Timestamps are client-logical milliseconds from trial start. Answering ends
the trial and immediately starts the next one (or the summary); a timeout
ends the trial and the client asks for the next with next_trial. Blink
animation is rendered client-side from the period table advertised in the
server hello, so an unchanged tactile state generates no traffic.

The shape geometry is never sent to the client during a session: shapes must
stay non-visual.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping

from .geometry import Shape
from .session_stats import (
    DEFAULT_TIME_LIMIT_MS,
    Answer,
    CursorSample,
    TrialRecord,
    TrialRunner,
    record_to_dict,
    summary_stats_dict,
)
from .tactons import DEFAULT_PERIODS_MS, BlinkLevel, TactileState, validate_periods

PROTOCOL_VERSION = 1
MODES = ("guidance", "pixels")


def tactile_change_filter(prev: TactileState, next_state: TactileState) -> bool:
    """True iff the client must be told: direction, blink or flag changed."""
    return (
        prev.direction != next_state.direction
        or prev.blink != next_state.blink
        or prev.on_shape != next_state.on_shape
    )


def periods_wire_table(periods: Mapping[BlinkLevel, int]) -> dict[str, int]:
    return {str(level.value): periods[level] for level in BlinkLevel}


@dataclass
class GatewayConfig:
    shapes: list[Shape]
    time_limit_ms: int = DEFAULT_TIME_LIMIT_MS
    periods_ms: Mapping[BlinkLevel, int] = field(default_factory=lambda: dict(DEFAULT_PERIODS_MS))

    def __post_init__(self) -> None:
        if not self.shapes:
            raise ValueError("a gateway needs at least one shape")
        if self.time_limit_ms <= 0:
            raise ValueError("time limit must be positive")
        validate_periods(self.periods_ms)


class Session:
    """One client's trial sequence; messages are processed strictly in order."""

    def __init__(self, config: GatewayConfig) -> None:
        self.config = config
        self.mode: str | None = None
        self.condition: str = ""
        self.trial_index = -1
        self.runner: TrialRunner | None = None
        self.records: list[TrialRecord] = []
        self._last_emitted: TactileState | None = None
        self._last_cursor_t = 0
        self._phase = "awaiting_hello"  # -> in_trial -> between_trials -> done

    # -- message plumbing ---------------------------------------------------

    def handle_line(self, line: str) -> list[str]:
        """Decode one line, dispatch, encode the replies (one line each)."""
        try:
            msg = json.loads(line)
        except json.JSONDecodeError as exc:
            return [_encode(_error(f"malformed JSON: {exc}"))]
        return [_encode(reply) for reply in self.handle_message(msg)]

    def handle_message(self, msg: object) -> list[dict]:
        if not isinstance(msg, dict) or not isinstance(msg.get("type"), str):
            return [_error("every message needs a string 'type' field")]
        handler = {
            "hello": self._on_hello,
            "cursor": self._on_cursor,
            "answer": self._on_answer,
            "next_trial": self._on_next_trial,
        }.get(msg["type"])
        if handler is None:
            return [_error(f"unknown message type {msg['type']!r}")]
        return handler(msg)

    # -- handlers -----------------------------------------------------------

    def _on_hello(self, msg: dict) -> list[dict]:
        if self._phase != "awaiting_hello":
            return [_error("hello already received")]
        if msg.get("v") != PROTOCOL_VERSION:
            return [_error(f"unsupported protocol version {msg.get('v')!r}; this server speaks v{PROTOCOL_VERSION}")]
        mode = msg.get("mode")
        if mode not in MODES:
            return [_error(f"mode must be one of {MODES}, got {mode!r}")]
        self.mode = mode
        condition = msg.get("condition", "")
        if not isinstance(condition, str):
            return [_error("condition must be a string")]
        self.condition = condition
        ack = {
            "type": "hello",
            "v": PROTOCOL_VERSION,
            "periods_ms": periods_wire_table(self.config.periods_ms),
        }
        return [ack, self._start_next_trial()]

    def _on_cursor(self, msg: dict) -> list[dict]:
        if self._phase != "in_trial":
            return [_error("cursor outside an active trial")]
        try:
            x, y, t = _finite_number(msg, "x"), _finite_number(msg, "y"), _finite_number(msg, "t")
        except ValueError as exc:
            return [_error(str(exc))]
        assert self.runner is not None
        self._last_cursor_t = int(t)
        tactile = self.runner.feed_cursor(CursorSample(x=x, y=y, t_ms=int(t)))
        if self.runner.finished:  # the sample arrived past the time limit
            return [self._end_trial()]
        if tactile is None:  # pixels mode has no tactile stream
            return []
        if self._last_emitted is not None and not tactile_change_filter(self._last_emitted, tactile):
            return []
        self._last_emitted = tactile
        return [
            {
                "type": "tactile",
                "direction": tactile.direction.name,
                "blink": tactile.blink.value,
                "on_shape": tactile.on_shape,
                "t": int(t),
            }
        ]

    def _on_answer(self, msg: dict) -> list[dict]:
        if self._phase != "in_trial":
            return [_error("answer outside an active trial")]
        label = msg.get("label")
        if not isinstance(label, str) or not label.strip():
            return [_error("answer needs a non-empty 'label' string")]
        confidence = msg.get("confidence")
        # The answer's timestamp is optional on the wire; without one the
        # response time is the last cursor sample's.
        t_raw = msg.get("t", self._last_cursor_t)
        if isinstance(t_raw, bool) or not isinstance(t_raw, (int, float)) or not math.isfinite(t_raw):
            return [_error("'t' must be a finite number")]
        assert self.runner is not None
        try:
            self.runner.feed_answer(Answer(label=label, confidence=confidence, t_ms=int(t_raw)))
        except ValueError as exc:
            # Bad confidence: reject and let the client re-prompt; trial continues.
            return [_error(str(exc))]
        replies = [self._end_trial()]
        if self._phase == "between_trials":
            replies.append(self._start_next_trial())
        return replies

    def _on_next_trial(self, msg: dict) -> list[dict]:
        if self._phase != "between_trials":
            return [_error("no trial waiting to start")]
        return [self._start_next_trial()]

    # -- trial sequencing ---------------------------------------------------

    def _start_next_trial(self) -> dict:
        self.trial_index += 1
        if self.trial_index >= len(self.config.shapes):
            self._phase = "done"
            return self._summary()
        shape = self.config.shapes[self.trial_index]
        assert self.mode is not None
        self.runner = TrialRunner(shape, self.mode, self.condition, self.config.time_limit_ms)
        self._last_emitted = None
        self._last_cursor_t = 0
        self._phase = "in_trial"
        return {
            "type": "trial",
            "index": self.trial_index,
            "count": len(self.config.shapes),
            "time_limit_ms": self.config.time_limit_ms,
        }

    def _end_trial(self) -> dict:
        assert self.runner is not None
        record = self.runner.finish()
        self.records.append(record)
        self.runner = None
        self._phase = "between_trials"
        return {
            "type": "trial_end",
            "reason": "timeout" if record.timed_out else "answered",
            "correct": record.correct,
        }

    def _summary(self) -> dict:
        return {
            "type": "session_summary",
            "trials": [record_to_dict(r) for r in self.records],
            "stats": summary_stats_dict(self.records) if self.records else {},
        }


def _error(message: str) -> dict:
    return {"type": "error", "message": message}


def _encode(msg: dict) -> str:
    return json.dumps(msg, separators=(",", ":"))


def _finite_number(msg: dict, key: str) -> float:
    value = msg.get(key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"'{key}' must be a number")
    if not math.isfinite(value):
        raise ValueError(f"'{key}' must be finite")
    return float(value)
