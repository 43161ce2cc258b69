"""Image-feature based fusion metrics: AG, EI, QABF, QP, SD, SF."""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from ..core import as_plane, check_min_side, check_same_shape, sobel
from ._phasecong import phase_congruency

# Xydeas-Petrovic sigmoid constants for edge-strength / orientation
# preservation.
QABF_GAMMA_G = 0.9994
QABF_KAPPA_G = -15.0
QABF_SIGMA_G = 0.5
QABF_GAMMA_A = 0.9879
QABF_KAPPA_A = -22.0
QABF_SIGMA_A = 0.8

#: Phase-congruency mask threshold used by Qp.
QP_PC_THRESHOLD = 0.1
_QP_C = 1e-4
_QP_SIGMA = 1.5
_QP_WINDOW = 11


def ag(f) -> float:
    """Average gradient: mean forward-difference magnitude over the region
    where both differences exist (last row and column excluded)."""
    f = as_plane(f)
    check_min_side(f, 2)
    dx = f[:-1, :-1] - f[1:, :-1]
    dy = f[:-1, :-1] - f[:-1, 1:]
    return float(np.mean(np.sqrt((dx * dx + dy * dy) / 2.0)))


def ei(f) -> float:
    """Edge intensity: mean Sobel gradient magnitude."""
    f = as_plane(f)
    check_min_side(f, 3)
    gx, gy = sobel(f)
    return float(np.mean(np.hypot(gx, gy)))


def sd(f) -> float:
    """Population standard deviation of the plane."""
    return float(np.std(as_plane(f)))


def sf(f) -> float:
    """Spatial frequency: RMS of row and column difference energies."""
    f = as_plane(f)
    check_min_side(f, 2)
    rf2 = np.sum((f[:, 1:] - f[:, :-1]) ** 2) / f.size
    cf2 = np.sum((f[1:, :] - f[:-1, :]) ** 2) / f.size
    return float(np.sqrt(rf2 + cf2))


def _sigmoid(gamma: float, kappa: float, sigma: float, x: np.ndarray) -> np.ndarray:
    return gamma / (1.0 + np.exp(kappa * (x - sigma)))


def _edge_preservation(
    gx: np.ndarray, ax: np.ndarray, gf: np.ndarray, af: np.ndarray
) -> np.ndarray:
    """Per-pixel Q^XF: product of strength and orientation preservation,
    each normalized so perfect preservation scores exactly 1."""
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(gx > gf, gf / gx, gx / gf)
    g_rel = np.where((gx > 0) & (gf > 0), ratio, np.where(gx == gf, 1.0, 0.0))
    a_rel = 1.0 - np.abs(ax - af) / (np.pi / 2.0)
    qg = _sigmoid(QABF_GAMMA_G, QABF_KAPPA_G, QABF_SIGMA_G, g_rel)
    qa = _sigmoid(QABF_GAMMA_A, QABF_KAPPA_A, QABF_SIGMA_A, a_rel)
    qg /= _sigmoid(QABF_GAMMA_G, QABF_KAPPA_G, QABF_SIGMA_G, np.float64(1.0))
    qa /= _sigmoid(QABF_GAMMA_A, QABF_KAPPA_A, QABF_SIGMA_A, np.float64(1.0))
    return qg * qa


def _strength_orientation(p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    gx, gy = sobel(p)
    with np.errstate(divide="ignore", invalid="ignore"):
        # atan (not atan2): orientation in (-pi/2, pi/2], edges modulo polarity
        alpha = np.where((gx == 0) & (gy == 0), 0.0, np.arctan(gy / gx))
    alpha = np.where((gx == 0) & (gy != 0), np.pi / 2.0, alpha)
    return np.hypot(gx, gy), alpha


def qabf(a, b, f) -> float:
    """Xydeas-Petrovic edge-information transfer Q^AB/F, in [0, 1]."""
    a, b, f = as_plane(a), as_plane(b), as_plane(f)
    check_same_shape(a, b, f)
    check_min_side(f, 3)
    ga, aa = _strength_orientation(a)
    gb, ab = _strength_orientation(b)
    gf, af = _strength_orientation(f)
    qaf = _edge_preservation(ga, aa, gf, af)
    qbf = _edge_preservation(gb, ab, gf, af)
    denom = np.sum(ga + gb)
    if denom == 0:
        return 0.0
    return float(np.sum(qaf * ga + qbf * gb) / denom)


def _gauss_filter(p: np.ndarray) -> np.ndarray:
    """11x11 Gaussian (sigma 1.5) local mean, zero-padded borders."""
    half = _QP_WINDOW // 2
    xs = np.arange(-half, half + 1, dtype=np.float64)
    k = np.exp(-(xs**2) / (2.0 * _QP_SIGMA**2))
    k /= k.sum()
    out = ndimage.correlate1d(p, k, axis=0, mode="constant", cval=0.0)
    return ndimage.correlate1d(out, k, axis=1, mode="constant", cval=0.0)


def _local_correlation(x: np.ndarray, f: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Windowed correlation of a masked feature map against the fused map,
    zero outside the mask."""
    xm = np.where(mask, x, 0.0)
    mu_x = _gauss_filter(xm)
    mu_f = _gauss_filter(f)
    var_x = _gauss_filter(xm * xm) - mu_x * mu_x
    var_f = _gauss_filter(f * f) - mu_f * mu_f
    cov = _gauss_filter(xm * f) - mu_x * mu_f
    res = (cov + _QP_C) / (np.sqrt(np.abs(var_x * var_f)) + _QP_C)
    return np.where(mask, res, 0.0)


def _qp_component(
    fa: np.ndarray,
    fb: np.ndarray,
    ff: np.ndarray,
    f_max: np.ndarray,
    mask_a: np.ndarray,
    mask_b: np.ndarray,
    mask_max: np.ndarray,
    mask_f: np.ndarray,
) -> float:
    res_a = _local_correlation(fa, ff, mask_a)
    res_b = _local_correlation(fb, ff, mask_b)
    res_max = _local_correlation(f_max, ff, mask_max)
    best = np.maximum(np.maximum(res_a, res_b), res_max)
    # salience must survive fusion: without this gate a featureless fused
    # image scores 1 through the stabilizing constant (0/0 regularized)
    best = np.where(mask_f, best, 0.0)
    n = int(mask_max.sum())
    if n == 0:
        return 0.0
    return float(best.sum() / n)


def qp(a, b, f) -> float:
    """Phase-congruency metric (Zhao): product of the fused image's
    correlations with the phase-congruency map and the max/min orientation
    moments, evaluated over salient (pc > 0.1) locations."""
    a, b, f = as_plane(a), as_plane(b), as_plane(f)
    check_same_shape(a, b, f)
    check_min_side(f, 32)
    pa = phase_congruency(a)
    pb = phase_congruency(b)
    pf = phase_congruency(f)
    select_a = pa.pc > pb.pc
    mask_a = pa.pc > QP_PC_THRESHOLD
    mask_b = pb.pc > QP_PC_THRESHOLD
    pc_max = np.where(select_a, pa.pc, pb.pc)
    mask_max = pc_max > QP_PC_THRESHOLD
    mask_f = pf.pc > QP_PC_THRESHOLD
    result = 1.0
    for fa, fb, ff in zip(pa, pb, pf):
        f_max = np.where(select_a, fa, fb)
        result *= _qp_component(fa, fb, ff, f_max, mask_a, mask_b, mask_max, mask_f)
    return float(result)
