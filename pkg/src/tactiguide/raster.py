"""The traditional dark-pixel presentation: rasterize the outline, then raise
the pins matching dark pixels in the 4x4 window around the cursor.

Pixels are square cells of side `cell_size` workspace units; a pixel is dark
iff its center lies on the shape's outline band. Rows are stored bottom-up
so the grid shares the y-up convention of the geometry; PGM export flips to
the usual image order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import Point, Shape, on_shape
from .tactons import PinFrame

# Guard against accidental huge rasters (cell_size tiny vs. workspace).
DEFAULT_MAX_PIXELS = 4_000_000


@dataclass(frozen=True)
class RasterImage:
    """Boolean pixel grid over a workspace rectangle (True = dark)."""

    width: int
    height: int
    cell_size: float
    origin_x: float  # workspace x of the left edge of column 0
    origin_y: float  # workspace y of the bottom edge of row 0
    pixels: tuple[bool, ...]  # row-major, row 0 at the bottom

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ValueError("raster dimensions must be positive")
        if not (self.cell_size > 0):
            raise ValueError("cell_size must be positive")
        if len(self.pixels) != self.width * self.height:
            raise ValueError("pixel buffer does not match dimensions")

    def pixel(self, ix: int, iy: int) -> bool:
        return self.pixels[iy * self.width + ix]

    def in_image(self, ix: int, iy: int) -> bool:
        return 0 <= ix < self.width and 0 <= iy < self.height

    def cell_of(self, x: float, y: float) -> tuple[int, int]:
        """Grid indices of the cell containing a workspace point."""
        return (
            int(math.floor((x - self.origin_x) / self.cell_size)),
            int(math.floor((y - self.origin_y) / self.cell_size)),
        )

    def cell_center(self, ix: int, iy: int) -> Point:
        return Point(
            self.origin_x + (ix + 0.5) * self.cell_size,
            self.origin_y + (iy + 0.5) * self.cell_size,
        )


def rasterize_outline(
    shape: Shape, cell_size: float, max_pixels: int = DEFAULT_MAX_PIXELS
) -> RasterImage:
    """Rasterize a shape's outline band over its padded bounding box.

    A pixel is dark iff its center is on the shape. The image covers the
    vertex bounding box expanded by thickness plus one cell, so the whole
    band is inside with a light margin around it.
    """
    if not (cell_size > 0):
        raise ValueError("cell_size must be positive")
    min_x, min_y, max_x, max_y = shape.bounds()
    margin = shape.thickness + cell_size
    origin_x = min_x - margin
    origin_y = min_y - margin
    width = max(1, int(math.ceil((max_x + margin - origin_x) / cell_size)))
    height = max(1, int(math.ceil((max_y + margin - origin_y) / cell_size)))
    if width * height > max_pixels:
        raise ValueError(
            f"raster of {width}x{height} pixels exceeds the limit of {max_pixels}; "
            f"increase cell_size"
        )
    pixels = []
    for iy in range(height):
        cy = origin_y + (iy + 0.5) * cell_size
        for ix in range(width):
            cx = origin_x + (ix + 0.5) * cell_size
            pixels.append(on_shape(Point(cx, cy), shape))
    return RasterImage(
        width=width,
        height=height,
        cell_size=cell_size,
        origin_x=origin_x,
        origin_y=origin_y,
        pixels=tuple(pixels),
    )


def sample_window(img: RasterImage, p: Point) -> PinFrame:
    """4x4 pin frame of the image cells around the cursor.

    One cell per pin, cursor at the window center: pin (r, c) samples the
    cell at offset (c - 1.5, 1.5 - r) cells from p, so pin row 0 is the +y
    side. Cells outside the image read as light.
    """
    pins = []
    for r in range(4):
        for c in range(4):
            sx = p.x + (c - 1.5) * img.cell_size
            sy = p.y + (1.5 - r) * img.cell_size
            ix, iy = img.cell_of(sx, sy)
            pins.append(img.in_image(ix, iy) and img.pixel(ix, iy))
    return PinFrame(tuple(pins))


def to_pgm(img: RasterImage) -> bytes:
    """Binary PGM (P5) export for debugging: dark = 0, light = 255."""
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    body = bytearray()
    for iy in reversed(range(img.height)):
        for ix in range(img.width):
            body.append(0 if img.pixel(ix, iy) else 255)
    return header + bytes(body)
