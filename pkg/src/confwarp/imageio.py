"""8-bit image file I/O (PNG and binary PGM/PPM) for ImageGrid values.

Pixels are stored as floats in [0, 1] internally; quantization to 8 bits
happens only here, with round-half-up scaling by 255.
"""

from __future__ import annotations

import os

import numpy as np
from PIL import Image

from .errors import DomainError
from .warp import ImageGrid

_SUPPORTED = {".png", ".pgm", ".ppm", ".pnm"}


def load_image(path: str | os.PathLike) -> ImageGrid:
    """Read an 8-bit grayscale or RGB image; non-square inputs are rejected
    because the conformal map is defined on the square domain only."""
    with Image.open(path) as im:
        if im.mode not in ("L", "RGB"):
            im = im.convert("RGB" if im.mode in ("RGBA", "P", "CMYK") else "L")
        arr = np.asarray(im, dtype=np.uint8)
    if arr.shape[0] != arr.shape[1]:
        raise DomainError(
            f"{path}: image is {arr.shape[1]}x{arr.shape[0]}, but the conformal "
            "square-to-disk mapping requires a square image"
        )
    return ImageGrid(arr.astype(float) / 255.0)


def save_image(img: ImageGrid, path: str | os.PathLike) -> None:
    """Write an ImageGrid as an 8-bit PNG or binary PGM/PPM file."""
    ext = os.path.splitext(os.fspath(path))[1].lower()
    if ext not in _SUPPORTED:
        raise DomainError(f"unsupported image format {ext!r} (use {sorted(_SUPPORTED)})")
    q = np.clip(np.floor(img.pixels * 255.0 + 0.5), 0, 255).astype(np.uint8)
    if img.channels == 1:
        Image.fromarray(q[:, :, 0], mode="L").save(path)
    elif img.channels == 3:
        Image.fromarray(q, mode="RGB").save(path)
    else:
        raise DomainError(f"cannot save image with {img.channels} channels")
