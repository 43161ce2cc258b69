import numpy as np
import pytest

from mefbench.errors import DimensionMismatch
from mefbench.metrics.structural import (
    SSIM_C1,
    SSIM_C2,
    SSIM_C3,
    mef_ssim,
    qc,
    qw,
    qy,
    ssim_fusion,
    ssim_pair,
)

from conftest import noise_plane, smooth_texture


def windows(p, win=8):
    h, w = p.shape
    for i in range(h - win + 1):
        for j in range(w - win + 1):
            yield p[i : i + win, j : j + win]


def naive_ssim_map(x, f, win=8):
    out = []
    for wx, wf in zip(windows(x, win), windows(f, win)):
        mx, mf = wx.mean(), wf.mean()
        vx, vf = wx.var(), wf.var()
        cov = np.mean((wx - mx) * (wf - mf))
        lum = (2 * mx * mf + SSIM_C1) / (mx**2 + mf**2 + SSIM_C1)
        con = (2 * np.sqrt(vx) * np.sqrt(vf) + SSIM_C2) / (vx + vf + SSIM_C2)
        struct = (cov + SSIM_C3) / (np.sqrt(vx) * np.sqrt(vf) + SSIM_C3)
        out.append(lum * con * struct)
    return np.array(out)


def test_ssim_pair_identity_and_shape():
    x = noise_plane(40, 16)
    res = ssim_pair(x, x)
    assert res.map.shape == (9, 9)
    assert np.allclose(res.map, 1.0)
    assert res.mean == pytest.approx(1.0, abs=1e-12)


def test_ssim_pair_matches_naive_oracle():
    x = noise_plane(41, 16)
    f = noise_plane(42, 16)
    res = ssim_pair(x, f)
    assert np.allclose(res.map.ravel(), naive_ssim_map(x, f), atol=1e-9)


def test_ssim_pair_noise_degrades():
    rng = np.random.default_rng(43)
    x = np.full((32, 32), 128.0)
    f = np.clip(x + rng.normal(0, 80, x.shape), 0, 255)
    assert ssim_pair(x, f).mean <= 0.2


def test_ssim_pair_joint_shift_with_matching_means():
    # perturbation with zero mean in every 8x8 window, so window means of
    # x and f coincide and a joint constant shift cancels exactly
    x = smooth_texture(44, 24) * 0.5 + 60.0
    checker = 5.0 * ((-1.0) ** (np.add.outer(np.arange(24), np.arange(24))))
    f = x + checker
    base = ssim_pair(x, f).mean
    shifted = ssim_pair(x + 20.0, f + 20.0).mean
    assert shifted == pytest.approx(base, abs=1e-6)


def test_ssim_fusion_sum_property_and_identity():
    a, b, f = noise_plane(45, 16), noise_plane(46, 16), noise_plane(47, 16)
    assert ssim_fusion(a, b, f) == ssim_pair(a, f).mean + ssim_pair(b, f).mean
    x = noise_plane(48, 16)
    assert ssim_fusion(x, x, x) == pytest.approx(2.0, abs=1e-12)


def test_ssim_fusion_with_one_matching_source():
    a = smooth_texture(49, 32)
    b = noise_plane(50, 32)
    v = ssim_fusion(a, b, a)
    second = ssim_pair(b, a).mean
    assert v == pytest.approx(1.0 + second, abs=1e-12)
    assert abs(second) < 0.35


def naive_qy(a, b, f, win=8):
    vals = []
    s_ab = naive_ssim_map(a, b, win)
    s_af = naive_ssim_map(a, f, win)
    s_bf = naive_ssim_map(b, f, win)
    idx = 0
    for wa, wb in zip(windows(a, win), windows(b, win)):
        va, vb = wa.var(), wb.var()
        if s_ab[idx] >= 0.75:
            lam = va / (va + vb) if va + vb > 0 else 0.5
            vals.append(lam * s_af[idx] + (1 - lam) * s_bf[idx])
        else:
            vals.append(max(s_af[idx], s_bf[idx]))
        idx += 1
    return float(np.mean(vals))


def test_qy_identity_and_max_branch():
    p = smooth_texture(51, 24)
    assert qy(p, p, p) == pytest.approx(1.0, abs=1e-9)
    inverted = 255.0 - p
    # dissimilar sources take the max branch; SSIM(a, f=a) = 1 wins
    assert qy(p, inverted, p) == pytest.approx(1.0, abs=1e-9)


def test_qy_matches_branch_oracle_and_symmetry():
    a, b, f = noise_plane(52, 16), noise_plane(53, 16), noise_plane(54, 16)
    v = qy(a, b, f)
    assert v == pytest.approx(naive_qy(a, b, f), abs=1e-9)
    assert qy(b, a, f) == pytest.approx(v, abs=1e-12)


def naive_qc(a, b, f, win=8):
    vals = []
    s_af = naive_ssim_map(a, f, win)
    s_bf = naive_ssim_map(b, f, win)
    idx = 0
    for wa, wb, wf in zip(windows(a, win), windows(b, win), windows(f, win)):
        caf = np.mean((wa - wa.mean()) * (wf - wf.mean()))
        cbf = np.mean((wb - wb.mean()) * (wf - wf.mean()))
        wa_, wb_ = max(caf, 0.0), max(cbf, 0.0)
        mu = wa_ / (wa_ + wb_) if wa_ + wb_ > 0 else 0.0
        vals.append(mu * s_af[idx] + (1 - mu) * s_bf[idx])
        idx += 1
    return float(np.mean(vals))


def test_qc_identity_oracle_and_saturation():
    p = smooth_texture(55, 24)
    assert qc(p, p, p) == pytest.approx(1.0, abs=1e-9)

    a, b, f = noise_plane(56, 16), noise_plane(57, 16), noise_plane(58, 16)
    assert qc(a, b, f) == pytest.approx(naive_qc(a, b, f), abs=1e-9)

    # f = a with a low-contrast uncorrelated b: covariance weight saturates
    # toward the matching source
    rng = np.random.default_rng(60)
    a = smooth_texture(59, 32)
    b = np.clip(128 + rng.normal(0, 12, a.shape), 0, 255)
    assert qc(a, b, a) >= 0.95


def naive_qw(a, b, f, win=8):
    locals_, sals = [], []
    for wa, wb, wf in zip(windows(a, win), windows(b, win), windows(f, win)):
        def q0(x, y):
            mx, my = x.mean(), y.mean()
            vx, vy = x.var(), y.var()
            cov = np.mean((x - mx) * (y - my))
            den = (vx + vy) * (mx**2 + my**2)
            if den == 0:
                if mx**2 + my**2 != 0:
                    return 2 * mx * my / (mx**2 + my**2)
                return 1.0
            return 4 * cov * mx * my / den

        va, vb = wa.var(), wb.var()
        lam = va / (va + vb) if va + vb > 0 else 0.5
        locals_.append(lam * q0(wa, wf) + (1 - lam) * q0(wb, wf))
        sals.append(max(va, vb))
    sals = np.array(sals)
    if sals.sum() == 0:
        return float(np.mean(locals_))
    return float(np.sum(sals * np.array(locals_)) / sals.sum())


def test_qw_identity_flat_and_oracle():
    p = smooth_texture(61, 24)
    assert qw(p, p, p) == pytest.approx(1.0, abs=1e-9)

    flat = np.full_like(p, 100.0)
    assert qw(p, 255.0 - p, flat) <= 0.1

    a, b, f = noise_plane(62, 16), noise_plane(63, 16), noise_plane(64, 16)
    assert qw(a, b, f) == pytest.approx(naive_qw(a, b, f), abs=1e-9)


def naive_mef_ssim(a, b, f, win=8):
    vals = []
    for wa, wb, wf in zip(windows(a, win), windows(b, win), windows(f, win)):
        xa = (wa - wa.mean()).ravel()
        xb = (wb - wb.mean()).ravel()
        xf = (wf - wf.mean()).ravel()
        c_hat = max(np.linalg.norm(xa), np.linalg.norm(xb))
        v = xa + xb
        nv = np.linalg.norm(v)
        desired = c_hat * v / nv if nv > 0 else np.zeros_like(v)
        n = xa.size
        var_d = desired @ desired / n
        var_f = xf @ xf / n
        cov = desired @ xf / n
        vals.append((2 * cov + SSIM_C2) / (var_d + var_f + SSIM_C2))
    return float(np.mean(vals))


def test_mef_ssim_identity_oracle_and_selection():
    p = smooth_texture(65, 24)
    assert mef_ssim(p, p, p) == pytest.approx(1.0, abs=1e-9)

    a, b, f = noise_plane(66, 16), noise_plane(67, 16), noise_plane(68, 16)
    assert mef_ssim(a, b, f) == pytest.approx(naive_mef_ssim(a, b, f), abs=1e-9)

    # two-texture pair: per-pixel max-contrast choice beats the plain mean
    a = smooth_texture(69, 32)
    b = smooth_texture(70, 32)
    stronger = np.where(np.abs(a - a.mean()) > np.abs(b - b.mean()), a, b)
    mean_f = 0.5 * (a + b)
    assert mef_ssim(a, b, stronger) >= mef_ssim(a, b, mean_f)


def test_structural_shape_mismatch():
    good = np.zeros((16, 16))
    bad = np.zeros((16, 17))
    for fn in (qy, qc, qw, mef_ssim, ssim_fusion):
        with pytest.raises(DimensionMismatch):
            fn(good, good, bad)
