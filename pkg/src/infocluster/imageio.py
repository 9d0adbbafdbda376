"""Pixel-level utilities: PNG io, resizing cores, and montage tiling.

Images live in memory as float32 H x W x 3 arrays in [0, 1]; segmentation
maps as int32 H x W label arrays. On disk both are 8-bit PNG (RGB for
images, single channel for labels), so label ids must fit in a byte.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import UnreadableImage


def load_png(path: str | os.PathLike) -> np.ndarray:
    """Read an RGB PNG into a float32 [0, 1] array of shape H x W x 3."""
    try:
        with Image.open(path) as im:
            arr = np.asarray(im.convert("RGB"), dtype=np.uint8)
    except Exception as exc:
        raise UnreadableImage(f"{path}: {exc}") from exc
    return (arr.astype(np.float32) / 255.0).astype(np.float32)


def save_png(path: str | os.PathLike, pixels: np.ndarray) -> None:
    """Write a float [0, 1] H x W x 3 array as an 8-bit RGB PNG."""
    arr = np.round(np.clip(pixels, 0.0, 1.0) * 255.0).astype(np.uint8)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(arr, mode="RGB").save(path, format="PNG")


def load_label_png(path: str | os.PathLike) -> np.ndarray:
    """Read a single-channel label PNG into an int32 H x W array."""
    try:
        with Image.open(path) as im:
            arr = np.asarray(im.convert("L"), dtype=np.uint8)
    except Exception as exc:
        raise UnreadableImage(f"{path}: {exc}") from exc
    return arr.astype(np.int32)


def save_label_png(path: str | os.PathLike, labels: np.ndarray) -> None:
    if labels.min() < 0 or labels.max() > 255:
        raise ValueError("label ids must fit in one byte for PNG storage")
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(labels.astype(np.uint8), mode="L").save(path, format="PNG")


def bilinear_resize(arr: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Bilinear resample with half-pixel centers and edge clamping.

    Convex weights keep outputs inside the input value range; resizing to
    the input's own size reproduces it bit for bit.
    """
    h, w = arr.shape[:2]
    ys = np.clip((np.arange(out_h) + 0.5) * (h / out_h) - 0.5, 0.0, h - 1.0)
    xs = np.clip((np.arange(out_w) + 0.5) * (w / out_w) - 0.5, 0.0, w - 1.0)
    y0 = ys.astype(np.int64)
    x0 = xs.astype(np.int64)
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    wy = (ys - y0)[:, None, None]
    wx = (xs - x0)[None, :, None]

    a = arr.astype(np.float64)
    if a.ndim == 2:
        a = a[:, :, None]
        squeeze = True
    else:
        squeeze = False
    out = (
        a[np.ix_(y0, x0)] * (1.0 - wy) * (1.0 - wx)
        + a[np.ix_(y0, x1)] * (1.0 - wy) * wx
        + a[np.ix_(y1, x0)] * wy * (1.0 - wx)
        + a[np.ix_(y1, x1)] * wy * wx
    )
    if squeeze:
        out = out[:, :, 0]
    return out.astype(arr.dtype if np.issubdtype(arr.dtype, np.floating) else np.float32)


def nearest_resize(labels: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Nearest-neighbor resample for integer label maps."""
    h, w = labels.shape
    ys = np.minimum(((np.arange(out_h) + 0.5) * (h / out_h)).astype(np.int64), h - 1)
    xs = np.minimum(((np.arange(out_w) + 0.5) * (w / out_w)).astype(np.int64), w - 1)
    return labels[np.ix_(ys, xs)]


def tile_montage(
    images: np.ndarray, rows: int, cols: int, pad: int = 2, pad_value: float = 1.0
) -> np.ndarray:
    """Tile a batch of images (n, H, W, 3) into a rows x cols montage.

    Missing tiles (n < rows * cols) are filled with the pad value.
    """
    n, h, w, _ = images.shape
    out_h = rows * h + (rows + 1) * pad
    out_w = cols * w + (cols + 1) * pad
    canvas = np.full((out_h, out_w, 3), pad_value, dtype=np.float32)
    for i in range(min(n, rows * cols)):
        r, c = divmod(i, cols)
        y = pad + r * (h + pad)
        x = pad + c * (w + pad)
        canvas[y : y + h, x : x + w] = images[i]
    return canvas
