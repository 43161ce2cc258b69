import numpy as np
import pytest

from mefbench.errors import DimensionMismatch
from mefbench.fusion import fuse_baseline
from mefbench.metrics.structural import ssim_fusion

from conftest import exposure_pair, smooth_texture


def test_identity_inputs_reproduce_the_image():
    rng = np.random.default_rng(90)
    img = rng.integers(0, 256, (48, 40, 3)).astype(np.uint8)
    for levels in (1, 2, 4, 6):
        fused = fuse_baseline(img, img, levels)
        assert fused.shape == img.shape
        assert np.max(np.abs(fused.astype(int) - img.astype(int))) <= 1


def test_output_dimensions_and_range():
    under, over = exposure_pair(91, 64)
    fused = fuse_baseline(under, over)
    assert fused.shape == under.shape
    assert fused.dtype == np.uint8
    assert fused.min() >= 0 and fused.max() <= 255


def test_well_exposedness_favors_midgray():
    black = np.zeros((32, 32))
    midgray = np.full((32, 32), 128.0)
    fused = fuse_baseline(black, midgray)
    # the black source keeps a small but nonzero well-exposedness weight,
    # so the result sits just below the mid-gray mean
    assert abs(float(fused.mean()) - 128.0) <= 8.0
    assert float(fused.mean()) > 100.0


def test_fused_beats_either_source_on_ssim():
    under, over = exposure_pair(92, 64)
    fused = fuse_baseline(under, over).astype(np.float64)
    score = ssim_fusion(under, over, fused)
    assert score > ssim_fusion(under, over, under)
    assert score > ssim_fusion(under, over, over)


def test_shape_mismatch_and_bad_levels():
    with pytest.raises(DimensionMismatch):
        fuse_baseline(np.zeros((8, 8)), np.zeros((8, 9)))
    with pytest.raises(ValueError):
        fuse_baseline(np.zeros((8, 8)), np.zeros((8, 8)), levels=0)


def test_levels_change_the_result():
    under, over = exposure_pair(93, 64)
    one = fuse_baseline(under, over, 1)
    four = fuse_baseline(under, over, 4)
    assert not np.array_equal(one, four)


def test_grayscale_input_supported():
    p = smooth_texture(94, 32)
    fused = fuse_baseline(p, p)
    assert fused.ndim == 2
    assert np.max(np.abs(fused.astype(float) - np.rint(p))) <= 1
