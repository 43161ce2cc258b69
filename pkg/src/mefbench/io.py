"""PNG/JPEG loading and saving (8-bit RGB or grayscale)."""

from __future__ import annotations

import os

import numpy as np
from PIL import Image, UnidentifiedImageError

from .core import to_grayscale
from .errors import DecodeError

IMAGE_EXTENSIONS = (".png", ".jpg", ".jpeg")


def load_color(path) -> np.ndarray:
    """Decode an image file to an H x W x 3 uint8 RGB array."""
    try:
        with Image.open(path) as im:
            return np.asarray(im.convert("RGB"))
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise DecodeError(f"cannot decode {os.fspath(path)}: {exc}") from exc


def load_gray(path) -> np.ndarray:
    """Decode an image file straight to a luminance plane."""
    return to_grayscale(load_color(path))


def save_png(path, img: np.ndarray) -> None:
    arr = np.asarray(img)
    if arr.dtype != np.uint8:
        arr = np.clip(np.rint(arr), 0, 255).astype(np.uint8)
    Image.fromarray(arr).save(path, format="PNG")
