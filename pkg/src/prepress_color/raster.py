"""Binary PPM (P6) raster output and chart rasterization."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from .chartgen import N_COLUMNS, N_ROWS, Chart

__all__ = [
    "PATCH_PX",
    "MARGIN_PX",
    "encode_ppm",
    "decode_ppm",
    "write_raster",
    "read_raster",
    "chart_raster",
    "chart_raster_size",
]

PATCH_PX = 20
MARGIN_PX = 10
PAPER_WHITE = (255, 255, 255)


def _as_pixels(pixels: NDArray) -> NDArray[np.uint8]:
    arr = np.asarray(pixels)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected an (height, width, 3) array, got shape {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError("raster must be at least 1x1")
    if arr.dtype != np.uint8:
        if np.any(arr < 0) or np.any(arr > 255):
            raise ValueError("pixel values must lie in 0..255")
        arr = arr.astype(np.uint8)
    return np.ascontiguousarray(arr)


def encode_ppm(pixels: NDArray) -> bytes:
    arr = _as_pixels(pixels)
    h, w, _ = arr.shape
    return f"P6\n{w} {h}\n255\n".encode("ascii") + arr.tobytes()


def decode_ppm(data: bytes) -> NDArray[np.uint8]:
    """Read a P6/maxval-255 image (comments in the header are allowed)."""
    tokens: list[bytes] = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            pos = data.index(b"\n", pos) + 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ValueError("truncated PPM header")
        tokens.append(data[start:pos])
    if tokens[0] != b"P6":
        raise ValueError(f"not a binary PPM (magic {tokens[0]!r})")
    w, h, maxval = (int(t) for t in tokens[1:])
    if maxval != 255:
        raise ValueError(f"only maxval 255 is supported, got {maxval}")
    pos += 1  # single whitespace after maxval
    body = data[pos : pos + w * h * 3]
    if len(body) != w * h * 3:
        raise ValueError("truncated PPM pixel data")
    return np.frombuffer(body, dtype=np.uint8).reshape(h, w, 3).copy()


def write_raster(pixels: NDArray, path: str | Path) -> Path:
    path = Path(path)
    path.write_bytes(encode_ppm(pixels))
    return path


def read_raster(path: str | Path) -> NDArray[np.uint8]:
    return decode_ppm(Path(path).read_bytes())


def chart_raster_size(patch_px: int = PATCH_PX, margin_px: int = MARGIN_PX) -> tuple[int, int]:
    """``(height, width)`` of :func:`chart_raster` output."""
    return N_ROWS * patch_px + 2 * margin_px, N_COLUMNS * patch_px + 2 * margin_px


def chart_raster(chart: Chart, patch_px: int = PATCH_PX, margin_px: int = MARGIN_PX) -> NDArray[np.uint8]:
    """The chart's RGB renderings laid out on the patch grid with a white margin."""
    h, w = chart_raster_size(patch_px, margin_px)
    img = np.empty((h, w, 3), dtype=np.uint8)
    img[:] = PAPER_WHITE
    for p in chart.patches:
        y = margin_px + (p.row - 1) * patch_px
        x = margin_px + (p.column - 1) * patch_px
        img[y : y + patch_px, x : x + patch_px] = p.reference_rgb.as_tuple()
    return img
