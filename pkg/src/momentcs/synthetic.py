"""Small deterministic test images used when the standard benchmark set is unavailable."""

import numpy as np


def gradient(size=144):
    y, x = np.mgrid[0:size, 0:size] / (size - 1)
    return 255.0 * (0.6 * x + 0.4 * y)


def checkerboard(size=144, square=18, low=40.0, high=215.0):
    y, x = np.mgrid[0:size, 0:size] // square
    return np.where((x + y) % 2 == 0, low, high).astype(np.float64)


def blobs(size=144):
    """Smooth Gaussian blobs over a dim background gradient."""
    y, x = np.mgrid[0:size, 0:size] / size
    img = 30.0 + 40.0 * x
    for cy, cx, r, amp in [(0.3, 0.3, 0.12, 160.0), (0.65, 0.7, 0.18, 120.0), (0.75, 0.25, 0.08, 180.0), (0.2, 0.8, 0.06, 100.0)]:
        img += amp * np.exp(-((y - cy) ** 2 + (x - cx) ** 2) / (2 * r * r))
    return np.clip(img, 0.0, 255.0)


SYNTHETIC = {
    "gradient": gradient,
    "checkerboard": checkerboard,
    "blobs": blobs,
}


def synthetic_images(size=144):
    return {name: fn(size) for name, fn in SYNTHETIC.items()}
