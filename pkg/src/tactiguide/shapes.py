"""Bundled shape corpus and shape-directory loading.

Eleven shapes ship with the package: ten test shapes (square, triangle,
rectangle and simple polygons, convex and concave) plus one training shape,
all in a 1000x1000 workspace with thickness 20.
"""

from __future__ import annotations

import os
from importlib import resources

from .geometry import Shape, ShapeError, load_shape, shape_from_dict

TRAINING_PREFIX = "training"


def bundled_shape_names() -> list[str]:
    root = resources.files("tactiguide").joinpath("shapes")
    names = [
        entry.name[: -len(".json")]
        for entry in root.iterdir()
        if entry.name.endswith(".json")
    ]
    return sorted(names)


def load_bundled_shape(name: str) -> Shape:
    import json

    root = resources.files("tactiguide").joinpath("shapes")
    try:
        text = root.joinpath(f"{name}.json").read_text("utf-8")
    except FileNotFoundError:
        raise ShapeError(
            f"no bundled shape named {name!r}; available: {', '.join(bundled_shape_names())}"
        ) from None
    return shape_from_dict(json.loads(text))


def load_all_bundled() -> list[Shape]:
    return [load_bundled_shape(name) for name in bundled_shape_names()]


def session_order(shapes: list[Shape]) -> list[Shape]:
    """Trial order for a session: training shapes first, then the rest by name."""
    return sorted(shapes, key=lambda s: (not s.name.startswith(TRAINING_PREFIX), s.name))


def load_shapes_dir(path: str) -> list[Shape]:
    """Load every *.json shape in a directory, sorted by name.

    Raises ShapeError if the directory is unreadable, holds no shapes, or any
    file fails validation.
    """
    try:
        entries = sorted(os.listdir(path))
    except OSError as exc:
        raise ShapeError(f"cannot read shapes directory {path}: {exc}") from exc
    shapes = [
        load_shape(os.path.join(path, entry))
        for entry in entries
        if entry.endswith(".json")
    ]
    if not shapes:
        raise ShapeError(f"no shapes found in {path}")
    return shapes
