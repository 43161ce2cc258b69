"""Information-theory based fusion metrics.

All functions take luminance planes on the [0, 255] scale and return a
plain float.  The two-source metrics treat `a` as the under-exposed and
`b` as the over-exposed image, but none of the math depends on that.
"""

from __future__ import annotations

import numpy as np

from ..core import (
    as_plane,
    check_min_side,
    check_same_shape,
    histogram,
    joint_histogram,
    shannon_entropy,
    sobel,
)
from ..errors import DegenerateEntropy

#: Floor used for zero fused-histogram bins in the cross entropy.
CE_EPSILON = 1e-12

#: PSNR reported when the mean squared error is exactly zero.
PSNR_CAP = 100.0

#: Default Tsallis order.
DEFAULT_TSALLIS_ALPHA = 1.85

_LOG2_256 = 8.0


def _cross_entropy(hx: np.ndarray, hf: np.ndarray) -> float:
    nz = hx > 0
    floor = np.where(hf[nz] > 0, hf[nz], CE_EPSILON)
    return float(np.sum(hx[nz] * np.log2(hx[nz] / floor)))


def ce(a, b, f) -> float:
    """Mean cross entropy between the fused histogram and each source's."""
    a, b, f = as_plane(a), as_plane(b), as_plane(f)
    check_same_shape(a, b, f)
    hf = histogram(f)
    return 0.5 * (_cross_entropy(histogram(a), hf) + _cross_entropy(histogram(b), hf))


def en(f) -> float:
    """Shannon entropy of the fused image, in bits."""
    return shannon_entropy(histogram(f))


def mutual_information(x, f) -> float:
    """Mutual information in bits between two aligned planes."""
    j = joint_histogram(x, f)
    px = j.sum(axis=1)
    pf = j.sum(axis=0)
    nz = j > 0
    outer = px[:, None] * pf[None, :]
    return float(np.sum(j[nz] * np.log2(j[nz] / outer[nz])))


def mi(a, b, f) -> float:
    """Information transferred from both sources into the fused image."""
    a, b, f = as_plane(a), as_plane(b), as_plane(f)
    check_same_shape(a, b, f)
    return mutual_information(a, f) + mutual_information(b, f)


def _gradient_feature(p: np.ndarray) -> np.ndarray:
    """Sobel gradient magnitude rescaled onto [0, 255]."""
    gx, gy = sobel(p)
    mag = np.hypot(gx, gy)
    peak = mag.max()
    return mag * (255.0 / peak) if peak > 0 else mag


def fmi(a, b, f) -> float:
    """Mutual information between gradient feature maps of sources and fused."""
    a, b, f = as_plane(a), as_plane(b), as_plane(f)
    check_same_shape(a, b, f)
    check_min_side(f, 3)
    ff = _gradient_feature(f)
    return mutual_information(_gradient_feature(a), ff) + mutual_information(
        _gradient_feature(b), ff
    )


def nmi(a, b, f) -> float:
    """Entropy-normalized mutual information, range [0, 2]."""
    a, b, f = as_plane(a), as_plane(b), as_plane(f)
    check_same_shape(a, b, f)
    hf = shannon_entropy(histogram(f))
    ha = shannon_entropy(histogram(a))
    hb = shannon_entropy(histogram(b))
    if ha + hf == 0 or hb + hf == 0:
        raise DegenerateEntropy("all planes constant: NMI is undefined")
    return 2.0 * (
        mutual_information(a, f) / (ha + hf) + mutual_information(b, f) / (hb + hf)
    )


def psnr(a, b, f) -> float:
    """Peak signal-to-noise ratio in dB against the averaged source MSE.

    The peak is the 255 range maximum, not the sample maximum, so values are
    comparable across images.  A zero MSE reports the 100 dB cap.
    """
    a, b, f = as_plane(a), as_plane(b), as_plane(f)
    check_same_shape(a, b, f)
    mse = 0.5 * (np.mean((a - f) ** 2) + np.mean((b - f) ** 2))
    if mse == 0:
        return PSNR_CAP
    return float(10.0 * np.log10(255.0**2 / mse))


def _base256_entropies(x: np.ndarray, f: np.ndarray) -> tuple[float, float, float]:
    j = joint_histogram(x, f)
    hx = shannon_entropy(j.sum(axis=1)) / _LOG2_256
    hf = shannon_entropy(j.sum(axis=0)) / _LOG2_256
    hxf = shannon_entropy(j) / _LOG2_256
    return hx, hf, hxf


def nonlinear_correlation(x, f) -> float:
    """Histogram-based correlation in [0, 1]: 1 for identical planes, 0 when
    statistically independent (mutual information over the larger marginal
    entropy)."""
    hx, hf, hxf = _base256_entropies(as_plane(x), as_plane(f))
    denom = max(hx, hf)
    if denom == 0:
        return 1.0
    return (hx + hf - hxf) / denom


def q_ncie(a, b, f) -> float:
    """Nonlinear correlation information entropy of the (a, b, f) triple."""
    a, b, f = as_plane(a), as_plane(b), as_plane(f)
    check_same_shape(a, b, f)
    n_ab = nonlinear_correlation(a, b)
    n_af = nonlinear_correlation(a, f)
    n_bf = nonlinear_correlation(b, f)
    r = np.array([[1.0, n_ab, n_af], [n_ab, 1.0, n_bf], [n_af, n_bf, 1.0]])
    lam = np.clip(np.linalg.eigvalsh(r), 0.0, None)
    q = 1.0
    for lv in lam:
        if lv > 0:
            q += (lv / 3.0) * np.log2(lv / 3.0) / _LOG2_256
    return float(q)


def _tsallis_divergence(x: np.ndarray, f: np.ndarray, alpha: float) -> float:
    j = joint_histogram(x, f)
    px = j.sum(axis=1)
    pf = j.sum(axis=0)
    nz = j > 0
    outer = px[:, None] * pf[None, :]
    s = np.sum(j[nz] ** alpha / outer[nz] ** (alpha - 1.0))
    return float((1.0 - s) / (alpha - 1.0))


def te(a, b, f, alpha: float = DEFAULT_TSALLIS_ALPHA) -> float:
    """Tsallis-entropy similarity between each source and the fused image."""
    if not (alpha > 0 and alpha != 1.0):
        raise ValueError(f"Tsallis order must be positive and != 1, got {alpha}")
    a, b, f = as_plane(a), as_plane(b), as_plane(f)
    check_same_shape(a, b, f)
    return _tsallis_divergence(a, f, alpha) + _tsallis_divergence(b, f, alpha)
