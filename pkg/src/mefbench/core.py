"""Shared single-channel image primitives.

A "plane" throughout this package is a 2-D float64 ndarray of luminance
values on the [0, 255] scale.  Color images are H x W x 3 uint8 arrays.
All functions here are pure and safe to call from multiple workers.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, PlaneTooSmall

#: BT.601 luma weights for RGB -> grayscale.
LUMA_WEIGHTS = (0.299, 0.587, 0.114)

#: Horizontal Sobel kernel (responds to vertical edges).
SOBEL_X = np.array([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]])
#: Vertical Sobel kernel.
SOBEL_Y = SOBEL_X.T.copy()

#: Default sliding-window side used by the structural metrics.
WINDOW_SIZE = 8


class GradientField(NamedTuple):
    gx: np.ndarray
    gy: np.ndarray


class WindowStats(NamedTuple):
    """Per-window population moments for every full window position."""

    mu_x: np.ndarray
    mu_f: np.ndarray
    var_x: np.ndarray
    var_f: np.ndarray
    cov: np.ndarray


def as_plane(p) -> np.ndarray:
    """Coerce to a validated 2-D float64 plane."""
    arr = np.asarray(p, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"expected a nonempty 2-D plane, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("plane contains non-finite values")
    return arr


def check_same_shape(*planes: np.ndarray) -> None:
    shapes = {p.shape for p in planes}
    if len(shapes) > 1:
        raise DimensionMismatch(f"plane shapes differ: {sorted(shapes)}")


def check_min_side(p: np.ndarray, side: int) -> None:
    if min(p.shape) < side:
        raise PlaneTooSmall(f"plane {p.shape} is smaller than {side}x{side}")


def to_grayscale(img) -> np.ndarray:
    """BT.601 luma of an H x W x 3 RGB image, kept real-valued."""
    arr = np.asarray(img)
    if arr.ndim == 2:
        return arr.astype(np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected H x W x 3 RGB, got shape {arr.shape}")
    r, g, b = (arr[..., k].astype(np.float64) for k in range(3))
    wr, wg, wb = LUMA_WEIGHTS
    return wr * r + wg * g + wb * b


def bin_indices(p: np.ndarray) -> np.ndarray:
    """256-level bin index per pixel: floor, with 255.0 landing in bin 255."""
    return np.clip(np.floor(p), 0, 255).astype(np.intp)


def histogram(p) -> np.ndarray:
    """Normalized 256-bin intensity histogram."""
    p = as_plane(p)
    counts = np.bincount(bin_indices(p).ravel(), minlength=256)
    return counts / p.size


def joint_histogram(x, f) -> np.ndarray:
    """Normalized 256 x 256 co-occurrence histogram of two aligned planes."""
    x = as_plane(x)
    f = as_plane(f)
    check_same_shape(x, f)
    flat = 256 * bin_indices(x).ravel() + bin_indices(f).ravel()
    counts = np.bincount(flat, minlength=256 * 256)
    return counts.reshape(256, 256) / x.size


def shannon_entropy(h) -> float:
    """Entropy in bits of a normalized histogram, with 0*log(0) = 0."""
    h = np.asarray(h, dtype=np.float64)
    nz = h > 0
    return float(-np.sum(h[nz] * np.log2(h[nz])) + 0.0)  # +0.0 avoids -0.0


def convolve3x3(p, kernel) -> np.ndarray:
    """True 2-D convolution (kernel flipped) with replicated borders."""
    p = as_plane(p)
    k = np.asarray(kernel, dtype=np.float64)
    if k.shape != (3, 3):
        raise ValueError(f"kernel must be 3x3, got {k.shape}")
    padded = np.pad(p, 1, mode="edge")
    h, w = p.shape
    out = np.zeros_like(p)
    for u in range(3):
        for v in range(3):
            out += k[u, v] * padded[2 - u : 2 - u + h, 2 - v : 2 - v + w]
    return out


def sobel(p) -> GradientField:
    """Sobel derivative responses (replicated borders)."""
    p = as_plane(p)
    return GradientField(convolve3x3(p, SOBEL_X), convolve3x3(p, SOBEL_Y))


def _box_sums(p: np.ndarray, win: int) -> np.ndarray:
    """Sums over every full win x win window (integral image)."""
    c = np.cumsum(np.cumsum(p, axis=0), axis=1)
    c = np.pad(c, ((1, 0), (1, 0)))
    return c[win:, win:] - c[:-win, win:] - c[win:, :-win] + c[:-win, :-win]


def window_sums(p: np.ndarray, win: int = WINDOW_SIZE) -> np.ndarray:
    p = as_plane(p)
    check_min_side(p, win)
    return _box_sums(p, win)


def window_stats(x, f, win: int = WINDOW_SIZE) -> WindowStats:
    """Population moments of two planes over all full sliding windows.

    Windows that would be clipped by the border are skipped, so the output
    arrays have shape (H - win + 1, W - win + 1).
    """
    x = as_plane(x)
    f = as_plane(f)
    check_same_shape(x, f)
    check_min_side(x, win)
    n = win * win
    sx = _box_sums(x, win)
    sf = _box_sums(f, win)
    mu_x = sx / n
    mu_f = sf / n
    var_x = _box_sums(x * x, win) / n - mu_x * mu_x
    var_f = _box_sums(f * f, win) / n - mu_f * mu_f
    cov = _box_sums(x * f, win) / n - mu_x * mu_f
    np.maximum(var_x, 0.0, out=var_x)
    np.maximum(var_f, 0.0, out=var_f)
    return WindowStats(mu_x, mu_f, var_x, var_f, cov)
