"""Patch-based denoising: extract, center, sparse-code, reconstruct, average."""

from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from momentcs.basis import BasisKind
from momentcs.dictionary import build_dictionary
from momentcs.errors import InvalidArgument
from momentcs.omp import StoppingRule, is_orthonormal, omp_encode, omp_encode_orthonormal, reconstruct


@dataclass(frozen=True)
class PipelineConfig:
    patch_size: int = 12
    stride: int = 1
    resize_to: Optional[Tuple[int, int]] = (144, 144)
    stop_gain: float = 1.15
    max_atoms: int = 36
    basis: str = "tchebichef"
    p1: float = 0.5
    p2: float = 0.5
    # "auto" takes the vectorized path when the dictionary is orthonormal
    solver: str = "auto"

    def __post_init__(self):
        kind = BasisKind(self.basis, self.p1 if str(self.basis).lower() == "krawtchouk" else None)
        object.__setattr__(self, "basis", kind.variant)
        for name in ("p1", "p2"):
            p = getattr(self, name)
            if not 0.0 < p < 1.0:
                raise InvalidArgument(f"{name} must lie strictly inside (0, 1), got {p!r}")
        if int(self.patch_size) != self.patch_size or self.patch_size < 2:
            raise InvalidArgument(f"patch_size must be an integer >= 2, got {self.patch_size!r}")
        if int(self.stride) != self.stride or not 1 <= self.stride <= self.patch_size:
            raise InvalidArgument(f"stride must be an integer in [1, patch_size], got {self.stride!r}")
        if not self.stop_gain > 0:
            raise InvalidArgument(f"stop_gain must be positive, got {self.stop_gain!r}")
        if int(self.max_atoms) != self.max_atoms or not 1 <= self.max_atoms < self.patch_size**2:
            raise InvalidArgument(f"max_atoms must be in [1, {self.patch_size ** 2 - 1}], got {self.max_atoms!r}")
        if self.resize_to is not None:
            w, h = self.resize_to
            if min(w, h) < self.patch_size:
                raise InvalidArgument(f"resize target {w}x{h} is smaller than the patch")
        if self.solver not in ("auto", "omp"):
            raise InvalidArgument(f"solver must be 'auto' or 'omp', got {self.solver!r}")

    def dictionary(self):
        return build_dictionary(self.basis, self.patch_size, self.p1, self.p2)


@dataclass
class DenoiseStats:
    patches_total: int
    mean_selected: float
    selected_histogram: dict = field(default_factory=dict)
    mean_residual: float = 0.0
    wall_time_ms: float = 0.0


def _anchors(length, patch, stride):
    pos = list(range(0, length - patch + 1, stride))
    if pos[-1] != length - patch:
        pos.append(length - patch)
    return pos


def patch_anchors(shape, patch_size, stride):
    h, w = shape
    if patch_size > h or patch_size > w:
        raise InvalidArgument(f"patch {patch_size}x{patch_size} does not fit in a {h}x{w} image")
    if not 1 <= stride <= patch_size:
        # a larger stride would leave pixels no patch covers
        raise InvalidArgument(f"stride must lie in [1, patch_size={patch_size}], got {stride}")
    return [(r, c) for r in _anchors(h, patch_size, stride) for c in _anchors(w, patch_size, stride)]


def extract_patches(img, patch_size, stride=1):
    """Row-major list of ``(row, col, vector)``; the last anchor in each axis sits flush with the border."""
    img = np.asarray(img, dtype=np.float64)
    s = patch_size
    return [(r, c, img[r : r + s, c : c + s].reshape(-1).copy()) for r, c in patch_anchors(img.shape, s, stride)]


def center_patch(patch):
    patch = np.asarray(patch, dtype=np.float64)
    mean = float(patch.mean())
    return patch - mean, mean


def aggregate_patches(estimates, shape):
    """Average overlapping patch estimates pixel by pixel, clamped to [0, 255].

    Accumulation follows the order of ``estimates`` so results are bit-stable.
    """
    h, w = shape
    acc = np.zeros((h, w))
    count = np.zeros((h, w))
    for r, c, vec in estimates:
        vec = np.asarray(vec, dtype=np.float64)
        s = math.isqrt(vec.size)
        if s * s != vec.size:
            raise InvalidArgument(f"patch vector of length {vec.size} is not square")
        if r < 0 or c < 0 or r + s > h or c + s > w:
            raise InvalidArgument(f"patch at ({r}, {c}) of size {s} lies outside a {h}x{w} image")
        acc[r : r + s, c : c + s] += vec.reshape(s, s)
        count[r : r + s, c : c + s] += 1
    if np.any(count == 0):
        raise InvalidArgument("some pixels are not covered by any patch")
    return np.clip(acc / count, 0.0, 255.0)


def resize_bilinear(img, size):
    """Resample to ``size = (width, height)`` with Pillow's bilinear filter.

    When shrinking, Pillow widens the filter support by the scale factor, so
    downsampling is antialiased rather than point-sampled.
    """
    from PIL import Image

    img = np.asarray(img, dtype=np.float32)
    w, h = size
    if img.shape == (h, w):
        return img.astype(np.float64)
    out = Image.fromarray(img, mode="F").resize((w, h), Image.Resampling.BILINEAR)
    return np.asarray(out, dtype=np.float64)


def denoise_image(noisy, cfg, sigma, dictionary=None):
    """Denoise ``noisy`` given the injected noise level ``sigma``.

    Every patch is mean-centered, coded until its residual norm falls to
    ``cfg.stop_gain * sigma * patch_size`` (capped at ``cfg.max_atoms``),
    reconstructed with its mean restored, and the overlapping estimates are
    averaged. Resizing is the caller's job (see :func:`prepare_image`).
    """
    if sigma < 0 or not math.isfinite(sigma):
        raise InvalidArgument(f"sigma must be a finite non-negative number, got {sigma!r}")
    noisy = np.asarray(noisy, dtype=np.float64)
    D = dictionary if dictionary is not None else cfg.dictionary()
    s = cfg.patch_size
    threshold = cfg.stop_gain * sigma * math.sqrt(s * s)
    t0 = time.perf_counter()

    anchors = patch_anchors(noisy.shape, s, cfg.stride)
    Y = np.stack([noisy[r : r + s, c : c + s].reshape(-1) for r, c in anchors])
    means = Y.mean(axis=1)
    Yc = Y - means[:, None]

    if cfg.solver == "auto" and is_orthonormal(D):
        coefs, counts, residuals = omp_encode_orthonormal(D, Yc, threshold, cfg.max_atoms)
        est = coefs @ D.atoms.T
    else:
        rule = StoppingRule(threshold, cfg.max_atoms)
        est = np.empty_like(Yc)
        counts = np.empty(len(anchors), dtype=int)
        residuals = np.empty(len(anchors))
        for i, y in enumerate(Yc):
            code = omp_encode(D, y, rule)
            est[i] = reconstruct(D, code)
            counts[i] = code.iterations
            residuals[i] = code.residual_norm
    est += means[:, None]

    out = aggregate_patches(((r, c, e) for (r, c), e in zip(anchors, est)), noisy.shape)
    elapsed = (time.perf_counter() - t0) * 1000.0
    hist = dict(sorted(Counter(int(k) for k in counts).items()))
    stats = DenoiseStats(
        patches_total=len(anchors),
        mean_selected=float(np.mean(counts)),
        selected_histogram=hist,
        mean_residual=float(np.mean(residuals)),
        wall_time_ms=elapsed,
    )
    return out, stats


def prepare_image(img, cfg):
    if cfg.resize_to is None:
        return np.asarray(img, dtype=np.float64)
    return resize_bilinear(img, cfg.resize_to)
