"""Structural-similarity based fusion metrics: SSIM, Qy, Qc, Qw, MEF-SSIM.

Every metric here slides an 8x8 uniform window with stride 1 and skips
windows clipped by the border.  Moments are population moments computed
from integral images, so large planes stay cheap.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from ..core import (
    WINDOW_SIZE,
    as_plane,
    check_min_side,
    check_same_shape,
    window_stats,
)

#: Standard 8-bit SSIM stabilizers.
SSIM_C1 = (0.01 * 255.0) ** 2
SSIM_C2 = (0.03 * 255.0) ** 2
SSIM_C3 = SSIM_C2 / 2.0

#: Window similarity threshold for the Qy branch.
QY_THRESHOLD = 0.75


class SsimResult(NamedTuple):
    map: np.ndarray
    mean: float


def _ssim_from_stats(mu_x, mu_f, var_x, var_f, cov) -> np.ndarray:
    luminance = (2.0 * mu_x * mu_f + SSIM_C1) / (mu_x * mu_x + mu_f * mu_f + SSIM_C1)
    sx = np.sqrt(var_x)
    sf = np.sqrt(var_f)
    contrast = (2.0 * sx * sf + SSIM_C2) / (var_x + var_f + SSIM_C2)
    structure = (cov + SSIM_C3) / (sx * sf + SSIM_C3)
    return luminance * contrast * structure


def ssim_pair(x, f) -> SsimResult:
    """Three-factor SSIM between two planes: per-window map and its mean."""
    st = window_stats(x, f)
    m = _ssim_from_stats(*st)
    return SsimResult(m, float(m.mean()))


def ssim_fusion(a, b, f) -> float:
    """Fusion SSIM: sum of the two source-to-fused mean SSIMs, in (-2, 2]."""
    a, b, f = as_plane(a), as_plane(b), as_plane(f)
    check_same_shape(a, b, f)
    return ssim_pair(a, f).mean + ssim_pair(b, f).mean


def qy(a, b, f) -> float:
    """Yang's metric: saliency-weighted SSIM where the sources agree,
    best-source SSIM where they do not."""
    a, b, f = as_plane(a), as_plane(b), as_plane(f)
    check_same_shape(a, b, f)
    s_ab = ssim_pair(a, b).map
    s_af = ssim_pair(a, f).map
    s_bf = ssim_pair(b, f).map
    va = window_stats(a, a).var_x
    vb = window_stats(b, b).var_x
    total = va + vb
    # weighted form written symmetrically so qy(a,b,f) == qy(b,a,f) bitwise
    weighted = np.where(total > 0, (va * s_af + vb * s_bf) / np.where(total > 0, total, 1.0), 0.5 * (s_af + s_bf))
    combined = np.where(s_ab >= QY_THRESHOLD, weighted, np.maximum(s_af, s_bf))
    return float(combined.mean())


def qc(a, b, f) -> float:
    """Cvejic's metric: SSIMs blended by the source-to-fused covariances."""
    a, b, f = as_plane(a), as_plane(b), as_plane(f)
    check_same_shape(a, b, f)
    st_af = window_stats(a, f)
    st_bf = window_stats(b, f)
    s_af = _ssim_from_stats(*st_af)
    s_bf = _ssim_from_stats(*st_bf)
    wa = np.maximum(st_af.cov, 0.0)
    wb = np.maximum(st_bf.cov, 0.0)
    total = wa + wb
    safe = np.where(total > 0, total, 1.0)
    mu = np.where(total > 0, wa / safe, 0.0)
    combined = mu * s_af + (1.0 - mu) * s_bf
    return float(combined.mean())


def _uqi_from_stats(mu_x, mu_f, var_x, var_f, cov) -> np.ndarray:
    """Wang-Bovik universal quality index per window, with the reference's
    zero-denominator branches."""
    num = 4.0 * cov * mu_x * mu_f
    mu_term = mu_x * mu_x + mu_f * mu_f
    var_term = var_x + var_f
    den = var_term * mu_term
    q = np.ones_like(num)
    lum_only = (den == 0) & (mu_term != 0)
    q = np.where(lum_only, 2.0 * mu_x * mu_f / np.where(mu_term != 0, mu_term, 1.0), q)
    ok = den != 0
    q = np.where(ok, num / np.where(ok, den, 1.0), q)
    return q


def qw(a, b, f) -> float:
    """Piella's weighted quality index with variance saliency."""
    a, b, f = as_plane(a), as_plane(b), as_plane(f)
    check_same_shape(a, b, f)
    q_af = _uqi_from_stats(*window_stats(a, f))
    q_bf = _uqi_from_stats(*window_stats(b, f))
    va = window_stats(a, a).var_x
    vb = window_stats(b, b).var_x
    total = va + vb
    lam = np.where(total > 0, va / np.where(total > 0, total, 1.0), 0.5)
    local = lam * q_af + (1.0 - lam) * q_bf
    c = np.maximum(va, vb)
    c_total = c.sum()
    if c_total == 0:
        return float(local.mean())
    return float(np.sum(c * local) / c_total)


def mef_ssim(a, b, f) -> float:
    """MEF structural similarity for a two-exposure stack.

    Per window the desired patch takes the larger of the two source signal
    strengths and the strength-weighted mean structure direction; the score
    is the contrast/structure SSIM term between that desired patch and the
    fused patch, averaged over windows.
    """
    a, b, f = as_plane(a), as_plane(b), as_plane(f)
    check_same_shape(a, b, f)
    check_min_side(f, WINDOW_SIZE)

    st_af = window_stats(a, f)
    st_bf = window_stats(b, f)
    var_a, var_f, cov_af = st_af.var_x, st_af.var_f, st_af.cov
    var_b, cov_bf = st_bf.var_x, st_bf.cov
    cov_ab = window_stats(a, b).cov

    # Desired-patch moments in per-pixel variance units.  The desired patch
    # is c_hat * s_hat with c_hat the max source strength and s_hat the unit
    # direction of x~_a + x~_b (strength-weighted mean of unit structures).
    var_hat = np.maximum(var_a, var_b)
    v_norm_sq = var_a + var_b + 2.0 * cov_ab
    np.maximum(v_norm_sq, 0.0, out=v_norm_sq)
    v_dot_f = cov_af + cov_bf
    denom = np.sqrt(v_norm_sq)
    cov_hat = np.where(denom > 0, np.sqrt(var_hat) * v_dot_f / np.where(denom > 0, denom, 1.0), 0.0)

    q = (2.0 * cov_hat + SSIM_C2) / (var_hat + var_f + SSIM_C2)
    return float(q.mean())
