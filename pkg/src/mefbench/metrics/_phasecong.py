"""Log-Gabor phase congruency (Kovesi's PC_2 measure).

Returns the phase congruency map together with the maximum and minimum
moments of the orientation covariance, which the Qp metric correlates
between source and fused images.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

N_SCALES = 4
N_ORIENTATIONS = 6
MIN_WAVELENGTH = 3.0
SCALE_MULT = 2.1
SIGMA_ON_F = 0.55
D_THETA_ON_SIGMA = 1.2
NOISE_K = 2.0
CUTOFF = 0.5
SHARPNESS_G = 10.0
_EPS = 1e-4


class PhaseCongruency(NamedTuple):
    pc: np.ndarray
    moment_max: np.ndarray
    moment_min: np.ndarray


def _frequency_grid(rows: int, cols: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Normalized radius and angle grids with DC at index (0, 0)."""
    if cols % 2:
        xr = np.arange(-(cols - 1) / 2, (cols - 1) / 2 + 1) / (cols - 1)
    else:
        xr = np.arange(-cols / 2, cols / 2) / cols
    if rows % 2:
        yr = np.arange(-(rows - 1) / 2, (rows - 1) / 2 + 1) / (rows - 1)
    else:
        yr = np.arange(-rows / 2, rows / 2) / rows
    x, y = np.meshgrid(xr, yr)
    radius = np.hypot(x, y)
    radius[rows // 2, cols // 2] = 1.0
    theta = np.arctan2(-y, x)
    return np.fft.ifftshift(radius), np.fft.ifftshift(theta), None


def _lowpass(rows: int, cols: int, cutoff: float = 0.45, order: int = 15) -> np.ndarray:
    xr = (np.arange(1, cols + 1) - (cols // 2 + 1)) / cols
    yr = (np.arange(1, rows + 1) - (rows // 2 + 1)) / rows
    x, y = np.meshgrid(xr, yr)
    radius = np.hypot(x, y)
    return np.fft.fftshift(1.0 / (1.0 + (radius / cutoff) ** (2 * order)))


def _filter_bank(rows: int, cols: int) -> tuple[list[np.ndarray], list[np.ndarray]]:
    radius, theta, _ = _frequency_grid(rows, cols)
    lp = _lowpass(rows, cols)
    log_gabor = []
    for s in range(N_SCALES):
        wavelength = MIN_WAVELENGTH * SCALE_MULT**s
        f0 = 1.0 / wavelength
        g = np.exp(-(np.log(radius / f0) ** 2) / (2.0 * math.log(SIGMA_ON_F) ** 2))
        g *= lp
        g[0, 0] = 0.0
        log_gabor.append(g)

    theta_sigma = math.pi / N_ORIENTATIONS / D_THETA_ON_SIGMA
    sin_t, cos_t = np.sin(theta), np.cos(theta)
    spreads = []
    for o in range(N_ORIENTATIONS):
        angle = o * math.pi / N_ORIENTATIONS
        ds = sin_t * math.cos(angle) - cos_t * math.sin(angle)
        dc = cos_t * math.cos(angle) + sin_t * math.sin(angle)
        dtheta = np.abs(np.arctan2(ds, dc))
        spreads.append(np.exp(-(dtheta**2) / (2.0 * theta_sigma**2)))
    return log_gabor, spreads


_BANK_CACHE: dict[tuple[int, int], tuple[list[np.ndarray], list[np.ndarray]]] = {}


def _cached_bank(rows: int, cols: int):
    key = (rows, cols)
    if key not in _BANK_CACHE:
        if len(_BANK_CACHE) > 8:
            _BANK_CACHE.clear()
        _BANK_CACHE[key] = _filter_bank(rows, cols)
    return _BANK_CACHE[key]


def phase_congruency(plane: np.ndarray) -> PhaseCongruency:
    rows, cols = plane.shape
    log_gabor, spreads = _cached_bank(rows, cols)
    image_fft = np.fft.fft2(plane)

    total_energy = np.zeros((rows, cols))
    total_sum_an = np.zeros((rows, cols))
    covx2 = np.zeros((rows, cols))
    covy2 = np.zeros((rows, cols))
    covxy = np.zeros((rows, cols))

    for o in range(N_ORIENTATIONS):
        angle = o * math.pi / N_ORIENTATIONS
        sum_e = np.zeros((rows, cols))
        sum_o = np.zeros((rows, cols))
        sum_an = np.zeros((rows, cols))
        eo_per_scale = []
        ifft_filters = []
        em_n = 0.0
        max_an = None
        for s in range(N_SCALES):
            filt = log_gabor[s] * spreads[o]
            ifft_filters.append(np.real(np.fft.ifft2(filt)) * math.sqrt(rows * cols))
            eo = np.fft.ifft2(image_fft * filt)
            eo_per_scale.append(eo)
            an = np.abs(eo)
            sum_an += an
            sum_e += eo.real
            sum_o += eo.imag
            if s == 0:
                em_n = float(np.sum(filt**2))
                max_an = an
            else:
                max_an = np.maximum(max_an, an)

        x_energy = np.hypot(sum_e, sum_o) + _EPS
        mean_e = sum_e / x_energy
        mean_o = sum_o / x_energy
        energy = np.zeros((rows, cols))
        for eo in eo_per_scale:
            e, od = eo.real, eo.imag
            energy += e * mean_e + od * mean_o - np.abs(e * mean_o - od * mean_e)

        # Rayleigh-model noise threshold from the smallest-scale response.
        median_e2n = float(np.median(np.abs(eo_per_scale[0]) ** 2))
        mean_e2n = -median_e2n / math.log(0.5)
        noise_power = mean_e2n / em_n
        est_sum_an2 = sum(np.sum(fi**2) for fi in ifft_filters)
        est_sum_aiaj = 0.0
        for si in range(N_SCALES - 1):
            for sj in range(si + 1, N_SCALES):
                est_sum_aiaj += float(np.sum(ifft_filters[si] * ifft_filters[sj]))
        est_noise_energy2 = 2 * noise_power * est_sum_an2 + 4 * noise_power * est_sum_aiaj
        tau = math.sqrt(max(est_noise_energy2, 0.0) / 2)
        est_noise_energy = tau * math.sqrt(math.pi / 2)
        est_noise_sigma = math.sqrt((2 - math.pi / 2) * tau**2)
        threshold = (est_noise_energy + NOISE_K * est_noise_sigma) / 1.7

        energy = np.maximum(energy - threshold, 0.0)
        width = sum_an / (max_an + _EPS) / N_SCALES
        weight = 1.0 / (1.0 + np.exp((CUTOFF - width) * SHARPNESS_G))
        oriented_energy = weight * energy

        total_sum_an += sum_an
        total_energy += oriented_energy

        with np.errstate(invalid="ignore", divide="ignore"):
            pc_o = np.where(sum_an > 0, oriented_energy / sum_an, 0.0)
        cx = pc_o * math.cos(angle)
        cy = pc_o * math.sin(angle)
        covx2 += cx * cx
        covy2 += cy * cy
        covxy += cx * cy

    pc = total_energy / (total_sum_an + _EPS)
    covx2 /= N_ORIENTATIONS / 2.0
    covy2 /= N_ORIENTATIONS / 2.0
    covxy /= N_ORIENTATIONS  # 2*covxy / (n/2)
    denom = np.sqrt(covxy**2 + (covx2 - covy2) ** 2) + _EPS
    moment_max = (covy2 + covx2 + denom) / 2.0
    moment_min = (covy2 + covx2 - denom) / 2.0
    return PhaseCongruency(pc, moment_max, moment_min)
