"""Command-line front door: run agents, preview pin patterns, replay scripted
experiments, compute statistics, serve the session gateway.

Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.
All options can also come from a JSON config file (--config); explicit flags
win over the file.
"""

from __future__ import annotations

import argparse
import json
import sys

from .agent import AgentConfig, default_step_budget, simulate
from .gateway import GatewayConfig
from .geometry import Point, ShapeError, load_shape
from .guidance import record_to_jsonl, step_record
from .server import GatewayServer, parse_address
from .session_stats import (
    DEFAULT_TIME_LIMIT_MS,
    Answer,
    CursorSample,
    error_fraction,
    read_trials,
    record_to_dict,
    render_fraction,
    render_report,
    run_trial,
)
from .shapes import load_shapes_dir, session_order
from .tactons import (
    BlinkLevel,
    Direction8,
    TactileState,
    frame_at,
    load_glyphs,
    render_ascii,
)

USAGE_ERROR = 2
RUNTIME_ERROR = 1


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    config = {}
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                config = json.load(fh)
            if not isinstance(config, dict):
                raise ValueError("config file must hold a JSON object")
        except (OSError, ValueError) as exc:
            print(f"error: bad config file: {exc}", file=sys.stderr)
            return USAGE_ERROR
    try:
        return args.func(args, config)
    except ShapeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except BrokenPipeError:
        return RUNTIME_ERROR


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tactiguide",
        description="Non-visual shape exploration: guidance engine, pin-array "
        "preview, experiment harness, statistics, session gateway.",
    )
    parser.add_argument("--config", help="JSON file of default option values")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("explore", help="run a synthetic agent around a shape")
    p.add_argument("--shape", required=True, help="shape JSON file")
    p.add_argument("--agent", choices=["greedy", "noisy"], default=None)
    p.add_argument("--step", type=float, default=None, help="agent step size (default thickness/2)")
    p.add_argument("--noise", type=float, default=None, help="noise disc radius for the noisy agent")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--max-steps", type=int, default=None, help="tick budget (default 4*perimeter/step)")
    p.add_argument("--tick-ms", type=int, default=None, help="logical milliseconds per tick")
    p.add_argument("--start", default=None, help="start point as X,Y (default vertex 0)")
    p.add_argument("--log", default=None, help="write the session log (JSON lines) here")
    p.set_defaults(func=_cmd_explore)

    p = sub.add_parser("render", help="print both pin arrays for a tactile state")
    p.add_argument("--direction", required=True, help="one of N NE E SE S SW W NW")
    p.add_argument("--blink", type=int, choices=[1, 2, 3], default=1, help="1 slow, 2 medium, 3 fast")
    p.add_argument("--on-shape", action="store_true")
    p.add_argument("--at-ms", type=int, default=0)
    p.add_argument("--glyphs", default=None, help="alternative glyph asset JSON")
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("experiment", help="replay a scripted participant over a shape set")
    p.add_argument("--shapes", required=True, help="directory of shape JSON files")
    p.add_argument("--mode", choices=["guidance", "pixels"], default=None)
    p.add_argument("--script", required=True, help="participant script JSON file")
    p.add_argument("--condition", default=None, help="condition label recorded on trials")
    p.add_argument("--time-limit-ms", type=int, default=None)
    p.add_argument("--log", default=None, help="write trial records (JSON lines) here")
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("stats", help="compare two trial logs")
    p.add_argument("--a", required=True, help="first trial log (JSON lines)")
    p.add_argument("--b", required=True, help="second trial log (JSON lines)")
    p.add_argument("--label-a", default=None)
    p.add_argument("--label-b", default=None)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("serve", help="serve the session gateway (and optionally the UI)")
    p.add_argument("--addr", default=None, help="listen address HOST:PORT (default 127.0.0.1:8765)")
    p.add_argument("--shapes", required=True, help="directory of shape JSON files")
    p.add_argument("--static", default=None, help="directory with the UI bundle to serve over HTTP")
    p.add_argument("--time-limit-ms", type=int, default=None)
    p.set_defaults(func=_cmd_serve)

    return parser


def _pick(args_value, config, key, default):
    if args_value is not None:
        return args_value
    if key in config:
        return config[key]
    return default


def _cmd_explore(args, config) -> int:
    shape = load_shape(args.shape)
    step_size = float(_pick(args.step, config, "step", shape.thickness / 2.0))
    if step_size <= 0:
        print("error: --step must be positive", file=sys.stderr)
        return USAGE_ERROR
    agent_kind = _pick(args.agent, config, "agent", "greedy")
    noise = float(_pick(args.noise, config, "noise", shape.thickness / 4.0 if agent_kind == "noisy" else 0.0))
    if agent_kind == "greedy":
        noise = 0.0
    seed = int(_pick(args.seed, config, "seed", 0))
    tick_ms = int(_pick(args.tick_ms, config, "tick_ms", 10))
    max_steps = _pick(args.max_steps, config, "max_steps", None)
    if max_steps is None:
        max_steps = default_step_budget(shape, step_size)
    max_steps = int(max_steps)
    if args.start is not None:
        try:
            x_text, y_text = args.start.split(",")
            start = Point(float(x_text), float(y_text))
        except ValueError:
            print(f"error: --start must be X,Y, got {args.start!r}", file=sys.stderr)
            return USAGE_ERROR
    else:
        start = shape.vertices[0]

    try:
        cfg = AgentConfig(
            step_size=step_size, noise_radius=noise, max_steps=max_steps, seed=seed, tick_ms=tick_ms
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    run = simulate(shape, start, cfg)

    if args.log:
        try:
            with open(args.log, "w", encoding="utf-8") as fh:
                for tick in run.ticks:
                    record = step_record(
                        tick.time_ms, tick.position, tick.tactile, tick.segment_index, tick.events
                    )
                    fh.write(record_to_jsonl(record) + "\n")
        except OSError as exc:
            print(f"error: cannot write log: {exc}", file=sys.stderr)
            return RUNTIME_ERROR
    print(f"steps: {len(run.trajectory)}")
    print(f"laps: {run.laps}")
    return 0


def _cmd_render(args, config) -> int:
    try:
        direction = Direction8.from_name(args.direction)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    glyphs = None
    glyph_path = _pick(args.glyphs, config, "glyphs", None)
    if glyph_path:
        try:
            glyphs = load_glyphs(glyph_path)
        except (OSError, ValueError) as exc:
            print(f"error: bad glyph asset: {exc}", file=sys.stderr)
            return USAGE_ERROR
    if args.at_ms < 0:
        print("error: --at-ms cannot be negative", file=sys.stderr)
        return USAGE_ERROR
    state = TactileState(direction=direction, blink=BlinkLevel(args.blink), on_shape=args.on_shape)
    index_frame, middle_frame = frame_at(state, args.at_ms, glyphs=glyphs)
    print(f"index frame ({direction.name}, blink {args.blink}, at {args.at_ms} ms):")
    print(render_ascii(index_frame))
    print(f"middle frame ({'on' if args.on_shape else 'off'} shape):")
    print(render_ascii(middle_frame))
    return 0


def _cmd_experiment(args, config) -> int:
    shapes = load_shapes_dir(args.shapes)
    by_name = {s.name: s for s in shapes}
    try:
        with open(args.script, "r", encoding="utf-8") as fh:
            script = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: bad script file: {exc}", file=sys.stderr)
        return USAGE_ERROR
    if not isinstance(script, dict) or not isinstance(script.get("trials"), list):
        print("error: script must be an object with a 'trials' list", file=sys.stderr)
        return USAGE_ERROR
    mode = _pick(args.mode, config, "mode", script.get("mode", "guidance"))
    condition = _pick(args.condition, config, "condition", script.get("condition", ""))
    time_limit = int(_pick(args.time_limit_ms, config, "time_limit_ms",
                           script.get("time_limit_ms", DEFAULT_TIME_LIMIT_MS)))

    records = []
    for i, trial in enumerate(script["trials"]):
        if not isinstance(trial, dict) or "shape" not in trial:
            print(f"error: trial {i} must be an object naming a 'shape'", file=sys.stderr)
            return USAGE_ERROR
        shape = by_name.get(trial["shape"])
        if shape is None:
            print(f"error: trial {i} names unknown shape {trial['shape']!r}", file=sys.stderr)
            return USAGE_ERROR
        events: list[CursorSample | Answer] = []
        for sample in trial.get("cursor", []):
            try:
                x, y, t = sample
                events.append(CursorSample(float(x), float(y), int(t)))
            except (TypeError, ValueError):
                print(f"error: trial {i} has a bad cursor sample {sample!r}", file=sys.stderr)
                return USAGE_ERROR
        if trial.get("answer") is not None:
            events.append(
                Answer(
                    label=str(trial["answer"]),
                    confidence=trial.get("confidence"),
                    t_ms=int(trial.get("answer_at_ms", 0)),
                )
            )
        try:
            records.append(run_trial(shape, mode, condition, events, time_limit))
        except (TypeError, ValueError) as exc:
            print(f"error: trial {i}: {exc}", file=sys.stderr)
            return USAGE_ERROR

    if args.log:
        try:
            with open(args.log, "w", encoding="utf-8") as fh:
                for record in records:
                    fh.write(json.dumps(record_to_dict(record), separators=(",", ":")) + "\n")
        except OSError as exc:
            print(f"error: cannot write log: {exc}", file=sys.stderr)
            return RUNTIME_ERROR
    errors, total = error_fraction(records)
    print(f"trials: {total}")
    print(f"errors: {render_fraction(errors, total)}")
    return 0


def _cmd_stats(args, config) -> int:
    try:
        trials_a = read_trials(args.a)
        trials_b = read_trials(args.b)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    if not trials_a or not trials_b:
        print("error: both trial logs must be non-empty", file=sys.stderr)
        return USAGE_ERROR
    label_a = _pick(args.label_a, config, "label_a", _condition_label(trials_a, "A"))
    label_b = _pick(args.label_b, config, "label_b", _condition_label(trials_b, "B"))
    print(render_report(label_a, trials_a, label_b, trials_b))
    return 0


def _condition_label(trials, fallback: str) -> str:
    labels = {t.condition for t in trials}
    if len(labels) == 1:
        label = labels.pop()
        if label:
            return label
    return fallback


def _cmd_serve(args, config) -> int:
    addr_text = str(_pick(args.addr, config, "addr", "127.0.0.1:8765"))
    try:
        addr = parse_address(addr_text)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    shapes = session_order(load_shapes_dir(args.shapes))
    time_limit = int(_pick(args.time_limit_ms, config, "time_limit_ms", DEFAULT_TIME_LIMIT_MS))
    gateway_config = GatewayConfig(shapes=shapes, time_limit_ms=time_limit)
    static_dir = _pick(args.static, config, "static", None)
    try:
        server = GatewayServer(addr, gateway_config, static_dir=static_dir)
    except OSError as exc:
        print(f"error: cannot listen on {addr_text}: {exc}", file=sys.stderr)
        return RUNTIME_ERROR
    host, port = server.bound_address
    print(f"listening on {host}:{port} ({len(shapes)} shapes)", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
