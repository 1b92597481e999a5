"""PSNR, SSIM and sparsity statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from momentcs.errors import InvalidArgument


@dataclass(frozen=True)
class SsimConfig:
    """Uniform square window slid with stride 1; population (1/n) moments."""

    window: int = 8
    c1: float = (0.01 * 255) ** 2
    c2: float = (0.03 * 255) ** 2

    def __post_init__(self):
        if isinstance(self.window, bool) or int(self.window) != self.window or self.window < 1:
            raise InvalidArgument(f"SSIM window must be a positive integer, got {self.window!r}")
        if not (self.c1 > 0 and self.c2 > 0):
            raise InvalidArgument("SSIM constants c1, c2 must be positive")


def _pair(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise InvalidArgument(f"image shapes differ: {a.shape} vs {b.shape}")
    return a, b


def psnr(reference, test, max_value=255.0):
    """Peak signal-to-noise ratio in dB; ``math.inf`` when the images are identical."""
    a, b = _pair(reference, test)
    mse = float(np.mean((a - b) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(max_value * max_value / mse)


def window_stats(a, b, window=8):
    """Per-window means, variances and covariance of two images.

    Returns ``(mu_a, mu_b, var_a, var_b, cov)``, each of shape
    ``(H - window + 1, W - window + 1)``. Second moments are computed about
    the window mean, so they do not depend on a common intensity offset.
    """
    a, b = _pair(a, b)
    if a.ndim != 2 or min(a.shape) < window:
        raise InvalidArgument(f"images of shape {a.shape} are smaller than the {window}x{window} window")
    wa = sliding_window_view(a, (window, window))
    wb = sliding_window_view(b, (window, window))
    mu_a = wa.mean(axis=(2, 3))
    mu_b = wb.mean(axis=(2, 3))
    da = wa - mu_a[:, :, None, None]
    db = wb - mu_b[:, :, None, None]
    var_a = (da * da).mean(axis=(2, 3))
    var_b = (db * db).mean(axis=(2, 3))
    cov = (da * db).mean(axis=(2, 3))
    return mu_a, mu_b, var_a, var_b, cov


def ssim_map(a, b, cfg=None):
    cfg = cfg or SsimConfig()
    mu_a, mu_b, var_a, var_b, cov = window_stats(a, b, cfg.window)
    num = (2 * mu_a * mu_b + cfg.c1) * (2 * cov + cfg.c2)
    den = (mu_a**2 + mu_b**2 + cfg.c1) * (var_a + var_b + cfg.c2)
    return num / den


def ssim(a, b, cfg=None):
    """Mean structural similarity over all window positions."""
    return float(ssim_map(a, b, cfg).mean())


def sparsity_summary(stats, atom_dim):
    """Mean number of selected atoms per patch and its fraction of ``atom_dim``.

    ``stats`` is a :class:`~momentcs.pipeline.DenoiseStats` or a mapping from
    atom count to number of patches.
    """
    hist = getattr(stats, "selected_histogram", stats)
    total = sum(hist.values())
    if total == 0:
        return 0.0, 0.0
    mean = sum(k * v for k, v in hist.items()) / total
    return mean, mean / atom_dim
