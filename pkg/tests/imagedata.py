"""Synthetic images shared by the test modules."""

import os

import numpy as np

RAMP_SIZE = 512

# frozen from a standalone pure-Python brute-force run (loops over blocks and
# pixels, lowest-bin search by linear scan); see ramp_oracle in test_acceptance
RAMP_GOLDEN = {
    8: (0.0012986523074632603, 28.865071084822425),
    16: (0.0003304396143050136, 34.80907893425581),
    32: (8.205453422944883e-05, 40.858974153857716),
    64: (2.0843868993188057e-05, 46.8102166510201),
    128: (5.25519174079323e-06, 52.79411433689154),
}

CORPUS_NAMES = (
    "astronaut", "camera", "chelsea", "coffee", "coins", "moon", "page", "text",
    "brick", "grass", "gravel", "ihc", "motorcycle_left", "cell", "clock_motion",
    "microaneurysms",
)


def linear_ramp(size=RAMP_SIZE):
    """RGB ramp: R along columns, G along rows, B along x + 2y."""
    y, x = np.mgrid[0:size, 0:size].astype(np.float64)
    r = x / (size - 1)
    g = y / (size - 1)
    b = (x + 2 * y) / (3 * (size - 1))
    return np.stack([r, g, b], axis=-1)


def _block(total, n=12):
    """n 8-bit samples in two adjacent levels summing to ``total``."""
    lo = total // n
    hi_count = total - lo * n
    vals = [lo + 1] * hi_count + [lo] * (n - hi_count)
    return np.array(vals, dtype=np.uint8).reshape(2, 2, 3)


def worked_example_uint8():
    """4x4 RGB image whose 2x2 blocks sum to exactly 3, 3, 6 and 12 (x 255)."""
    img = np.zeros((4, 4, 3), dtype=np.uint8)
    img[0:2, 0:2] = _block(765)
    img[0:2, 2:4] = _block(765)
    img[2:4, 0:2] = _block(1530)
    img[2:4, 2:4] = _block(3060)
    return img


def skimage_data_dir():
    try:
        import skimage.data
    except ImportError:
        return None
    return os.path.dirname(skimage.data.__file__)
