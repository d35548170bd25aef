"""Point-cloud rasterizer with binary PPM output.

One pixel per point, no anti-aliasing; identical inputs give byte-identical
files, which is what the golden-image tests rely on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import ScaledPointSet

BACKGROUND = (255, 255, 255)
POINT_TONE = (176, 176, 176)
OVERLAY_TONE = (160, 16, 16)


@dataclass(frozen=True)
class RasterImage:
    width: int
    height: int
    pixels: bytes  # row-major RGB, 3 bytes per pixel
    transform: tuple  # (x0, y0, scale, x_offset, y_offset)

    def pixel(self, x: int, y: int) -> tuple[int, int, int]:
        base = 3 * (y * self.width + x)
        return tuple(self.pixels[base:base + 3])


def _to_pixels(coords: np.ndarray, width, height, x0, y0, scale, xoff, yoff):
    px = np.floor((coords[:, 0] - x0) * scale + xoff).astype(np.int64)
    py = np.floor((coords[:, 1] - y0) * scale + yoff).astype(np.int64)
    px = np.clip(px, 0, width - 1)
    # image rows grow downward, world y upward
    py = height - 1 - np.clip(py, 0, height - 1)
    return px, py


def rasterize(points: ScaledPointSet, width: int, height: int,
              margin: float = 0.05, overlay: ScaledPointSet | None = None,
              background=BACKGROUND, tone=POINT_TONE,
              overlay_tone=OVERLAY_TONE) -> RasterImage:
    """Plot a planar point set (and an optional overlay) on a pixel grid.

    The bounding box of the main cloud, padded by ``margin`` as a fraction of
    its extent, is fitted into the canvas preserving aspect ratio. A single
    point (or a degenerate axis) lands on the canvas center.
    """
    if points.pair.n != 2:
        raise ValueError("rendering is implemented for the plane only")
    if len(points) == 0:
        raise ValueError("nothing to render")
    if width < 1 or height < 1:
        raise ValueError("image must be at least one pixel")
    coords = points.real_coordinates()
    lo = coords.min(axis=0)
    hi = coords.max(axis=0)
    pad = (hi - lo) * margin
    lo, hi = lo - pad, hi + pad
    extent = hi - lo
    scales = [
        (size / ext) if ext > 0 else np.inf
        for size, ext in zip((width, height), extent)
    ]
    scale = min(scales)
    if not np.isfinite(scale):
        scale = 1.0  # fully degenerate cloud, park it at the center
    xoff = (width - extent[0] * scale) / 2.0
    yoff = (height - extent[1] * scale) / 2.0

    buf = bytearray(bytes(background) * (width * height))

    def paint(cloud, rgb):
        px, py = _to_pixels(cloud, width, height, lo[0], lo[1], scale, xoff, yoff)
        for x, y in zip(px.tolist(), py.tolist()):
            base = 3 * (y * width + x)
            buf[base:base + 3] = bytes(rgb)

    paint(coords, tone)
    if overlay is not None and len(overlay):
        paint(overlay.real_coordinates(), overlay_tone)
    return RasterImage(
        width=width,
        height=height,
        pixels=bytes(buf),
        transform=(float(lo[0]), float(lo[1]), float(scale), float(xoff), float(yoff)),
    )


def write_pnm(image: RasterImage, path) -> None:
    """Binary PPM (P6, 8-bit): header then raw RGB rows."""
    header = f"P6\n{image.width} {image.height}\n255\n".encode("ascii")
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(image.pixels)
    except OSError as exc:
        raise OSError(f"cannot write image to {path}: {exc}") from exc
