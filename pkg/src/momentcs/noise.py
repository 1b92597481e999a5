"""Seeded additive white Gaussian noise.

Draws come from NumPy's PCG64 bit generator (``numpy.random.default_rng``)
seeded with the 64-bit ``seed``, one standard normal per pixel in row-major
order. Output is reproducible for a given NumPy PCG64/ziggurat implementation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from momentcs.errors import InvalidArgument

DYNAMIC_RANGE = 255.0


@dataclass(frozen=True)
class NoiseSpec:
    ratio: float
    seed: int = 0
    clamp: bool = True

    def __post_init__(self):
        if not (isinstance(self.ratio, (int, float)) and math.isfinite(self.ratio) and 0.0 <= self.ratio <= 1.0):
            raise InvalidArgument(f"noise ratio must lie in [0, 1], got {self.ratio!r}")
        if isinstance(self.seed, bool) or int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise InvalidArgument(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def sigma(self):
        return self.ratio * DYNAMIC_RANGE


def add_gaussian_noise(img, spec):
    img = np.asarray(img, dtype=np.float64)
    if spec.sigma == 0.0:
        return img.copy()
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    noisy = img + spec.sigma * rng.standard_normal(img.shape)
    if spec.clamp:
        np.clip(noisy, 0.0, DYNAMIC_RANGE, out=noisy)
    return noisy
