"""Perception-inspired fusion metrics: Qcb, Qcv, and a fusion VIF.

Constants (contrast-sensitivity parameterizations, block sizes, HVS noise
variance) follow the values published with each metric:

==========  =======================================================
Qcb         DoG CSF f0=15.387, f1=1.3456, a=0.7622; viewing scale
            dim/30 cycles; local contrast from sigma 2 vs sigma 4
            Gaussians (31x31); masking k=h=1, p=3, q=2, Z=1e-4
Qcv         Mannos-Sakrison CSF 2.6(0.0192+0.144r)exp(-(0.144r)^1.1);
            viewing scale dim/8; 16x16 blocks; saliency = Sobel
            magnitude ** 5
VIF         4 scales, Gaussian window N=2^(5-s)+1 sigma=N/5, HVS
            noise variance 2.0, eps 1e-10
==========  =======================================================
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage, signal

from ..core import as_plane, check_min_side, check_same_shape, sobel

QCB_F0 = 15.3870
QCB_F1 = 1.3456
QCB_A = 0.7622
QCB_MASK_P = 3
QCB_MASK_Q = 2
QCB_MASK_Z = 1e-4

QCV_WINDOW = 16
QCV_SALIENCY_ALPHA = 5.0

VIF_SIGMA_N_SQ = 2.0
VIF_EPS = 1e-10
VIF_SCALES = 4


def _csf_grid(shape: tuple[int, int], scale_div: float) -> np.ndarray:
    """Radial frequency grid (unshifted, DC at [0,0]) in viewing units."""
    h, w = shape
    fy = np.fft.fftfreq(h) * (h / scale_div)
    fx = np.fft.fftfreq(w) * (w / scale_div)
    return np.hypot(fy[:, None], fx[None, :])


def _csf_filter(p: np.ndarray, response: np.ndarray) -> np.ndarray:
    return np.real(np.fft.ifft2(np.fft.fft2(p) * response))


def _gaussian_kernel1d(sigma: float, half: int = 15) -> tuple[np.ndarray, float]:
    """Separable factor of the (unnormalized) 2-D Gaussian plus its gain."""
    xs = np.arange(-half, half + 1, dtype=np.float64)
    g = np.exp(-(xs**2) / (2.0 * sigma * sigma))
    return g, 1.0 / (2.0 * np.pi * sigma * sigma)


def _gauss2d_same(p: np.ndarray, k: tuple[np.ndarray, float]) -> np.ndarray:
    kernel, gain = k
    out = ndimage.correlate1d(p, kernel, axis=0, mode="constant", cval=0.0)
    out = ndimage.correlate1d(out, kernel, axis=1, mode="constant", cval=0.0)
    return out * gain


def _masked_contrast(p: np.ndarray, g1, g2) -> np.ndarray:
    lo = _gauss2d_same(p, g1)
    lo2 = _gauss2d_same(p, g2)
    with np.errstate(divide="ignore", invalid="ignore"):
        c = np.where(lo2 != 0, lo / lo2 - 1.0, 0.0)
    c = np.abs(c)
    return c**QCB_MASK_P / (c**QCB_MASK_Q + QCB_MASK_Z)


def qcb(a, b, f) -> float:
    """Chen-Blum contrast-preservation quality."""
    a, b, f = as_plane(a), as_plane(b), as_plane(f)
    check_same_shape(a, b, f)
    check_min_side(f, 32)

    r = _csf_grid(f.shape, 30.0)
    csf = np.exp(-((r / QCB_F0) ** 2)) - QCB_A * np.exp(-((r / QCB_F1) ** 2))
    g1 = _gaussian_kernel1d(2.0)
    g2 = _gaussian_kernel1d(4.0)

    ca = _masked_contrast(_csf_filter(a, csf), g1, g2)
    cb = _masked_contrast(_csf_filter(b, csf), g1, g2)
    cf = _masked_contrast(_csf_filter(f, csf), g1, g2)

    hi_a = np.maximum(ca, cf)
    hi_b = np.maximum(cb, cf)
    q_af = np.where(hi_a > 0, np.minimum(ca, cf) / np.where(hi_a > 0, hi_a, 1.0), 1.0)
    q_bf = np.where(hi_b > 0, np.minimum(cb, cf) / np.where(hi_b > 0, hi_b, 1.0), 1.0)

    wa = ca * ca
    wb = cb * cb
    total = wa + wb
    safe = np.where(total > 0, total, 1.0)
    lam_a = np.where(total > 0, wa / safe, 0.5)
    q = lam_a * q_af + (1.0 - lam_a) * q_bf
    return float(q.mean())


def _block_sums(p: np.ndarray, size: int) -> np.ndarray:
    """Non-overlapping size x size block sums; trailing partial blocks dropped."""
    h = p.shape[0] - p.shape[0] % size
    w = p.shape[1] - p.shape[1] % size
    trimmed = p[:h, :w]
    return trimmed.reshape(h // size, size, w // size, size).sum(axis=(1, 3))


def qcv(a, b, f) -> float:
    """Chen-Varshney saliency-weighted filtered error (lower is better)."""
    a, b, f = as_plane(a), as_plane(b), as_plane(f)
    check_same_shape(a, b, f)
    check_min_side(f, 32)

    ga = np.hypot(*sobel(a))
    gb = np.hypot(*sobel(b))
    lam_a = _block_sums(ga**QCV_SALIENCY_ALPHA, QCV_WINDOW)
    lam_b = _block_sums(gb**QCV_SALIENCY_ALPHA, QCV_WINDOW)

    r = _csf_grid(f.shape, 8.0)
    csf = 2.6 * (0.0192 + 0.144 * r) * np.exp(-((0.144 * r) ** 1.1))
    da = _csf_filter(a - f, csf)
    db = _csf_filter(b - f, csf)
    n = QCV_WINDOW * QCV_WINDOW
    err_a = _block_sums(da * da, QCV_WINDOW) / n
    err_b = _block_sums(db * db, QCV_WINDOW) / n

    denom = np.sum(lam_a + lam_b)
    if denom == 0:
        return float(0.5 * (err_a.mean() + err_b.mean()))
    return float(np.sum(lam_a * err_a + lam_b * err_b) / denom)


def _vif_pair(x: np.ndarray, f: np.ndarray) -> float:
    """Pixel-domain multi-scale VIF of f against reference x."""
    ratios = []
    for scale in range(1, VIF_SCALES + 1):
        size = 2 ** (VIF_SCALES - scale + 1) + 1
        sigma = size / 5.0
        xs = np.arange(size, dtype=np.float64) - (size - 1) / 2.0
        k1 = np.exp(-(xs**2) / (2.0 * sigma * sigma))
        kernel = np.outer(k1, k1)
        kernel /= kernel.sum()

        if scale > 1:
            x = signal.convolve2d(x, kernel, mode="valid")[::2, ::2]
            f = signal.convolve2d(f, kernel, mode="valid")[::2, ::2]

        mu_x = signal.convolve2d(x, kernel, mode="valid")
        mu_f = signal.convolve2d(f, kernel, mode="valid")
        var_x = signal.convolve2d(x * x, kernel, mode="valid") - mu_x * mu_x
        var_f = signal.convolve2d(f * f, kernel, mode="valid") - mu_f * mu_f
        cov = signal.convolve2d(x * f, kernel, mode="valid") - mu_x * mu_f
        np.maximum(var_x, 0.0, out=var_x)
        np.maximum(var_f, 0.0, out=var_f)

        g = cov / (var_x + VIF_EPS)
        sv = var_f - g * cov
        g = np.where(var_x < VIF_EPS, 0.0, g)
        sv = np.where(var_x < VIF_EPS, var_f, sv)
        var_x = np.where(var_x < VIF_EPS, 0.0, var_x)
        sv = np.where(var_f < VIF_EPS, 0.0, sv)
        g = np.where(var_f < VIF_EPS, 0.0, g)
        sv = np.where(g < 0, var_f, sv)
        g = np.maximum(g, 0.0)
        sv = np.maximum(sv, VIF_EPS)

        num = np.sum(np.log10(1.0 + g * g * var_x / (sv + VIF_SIGMA_N_SQ)))
        den = np.sum(np.log10(1.0 + var_x / VIF_SIGMA_N_SQ))
        ratios.append(1.0 if den == 0 else num / den)
    return float(np.mean(ratios))


def vif_fusion(a, b, f) -> float:
    """Mean of the two source-to-fused visual information fidelities."""
    a, b, f = as_plane(a), as_plane(b), as_plane(f)
    check_same_shape(a, b, f)
    check_min_side(f, 64)
    return 0.5 * (_vif_pair(a, f) + _vif_pair(b, f))
