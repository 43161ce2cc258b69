import numpy as np
import pytest
from scipy import ndimage

from mefbench.io import save_png


def smooth_texture(seed: int, size: int = 64, sigma: float = 3.0) -> np.ndarray:
    """Band-limited random texture on [0, 255] — behaves like a photo crop."""
    rng = np.random.default_rng(seed)
    n = ndimage.gaussian_filter(rng.normal(size=(size, size)), sigma)
    return (n - n.min()) / (n.max() - n.min()) * 255.0


def noise_plane(seed: int, size: int = 64) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(0, 256, (size, size)).astype(np.float64)


def exposure_pair(seed: int, size: int = 64):
    """Synthetic under/over exposed pair of the same scene."""
    base = smooth_texture(seed, size) / 255.0
    under = np.clip(base * 0.45, 0.0, 1.0) * 255.0
    over = np.clip(base * 0.6 + 0.4, 0.0, 1.0) * 255.0
    return under, over


@pytest.fixture
def dataset_dir(tmp_path):
    """Two well-formed pairs under the standard layout."""
    for idx, pid in enumerate(("pair_a", "pair_b")):
        under, over = exposure_pair(10 + idx, 96)
        d = tmp_path / "input" / pid
        d.mkdir(parents=True)
        save_png(d / "A.png", under)
        save_png(d / "B.png", over)
    return tmp_path


def write_fused(root, algo, pair_id, image):
    d = root / "fused" / algo
    d.mkdir(parents=True, exist_ok=True)
    save_png(d / f"{pair_id}.png", image)
