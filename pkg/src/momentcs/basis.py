"""Orthonormal 1D discrete bases: Tchebichef, Krawtchouk and DCT-II.

Each generator returns a :class:`BasisMatrix` whose row ``n`` is the basis
function of order ``n`` sampled at ``x = 0..N-1``. Rows are produced with
three-term recurrences and then renormalized to unit Euclidean norm.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal

from momentcs.errors import InvalidArgument

TCHEBICHEF = "tchebichef"
KRAWTCHOUK = "krawtchouk"
DCT = "dct"
VARIANTS = (TCHEBICHEF, KRAWTCHOUK, DCT)


@dataclass(frozen=True)
class BasisKind:
    variant: str
    krawtchouk_p: Optional[float] = None

    def __post_init__(self):
        variant = str(self.variant).lower()
        if variant not in VARIANTS:
            raise InvalidArgument(f"unknown basis {self.variant!r}, expected one of {', '.join(VARIANTS)}")
        object.__setattr__(self, "variant", variant)
        if variant == KRAWTCHOUK:
            p = 0.5 if self.krawtchouk_p is None else float(self.krawtchouk_p)
            _check_p(p)
            object.__setattr__(self, "krawtchouk_p", p)
        elif self.krawtchouk_p is not None:
            raise InvalidArgument("krawtchouk_p only applies to the Krawtchouk basis")

    @property
    def label(self):
        return self.variant


@dataclass(frozen=True, eq=False)
class BasisMatrix:
    rows: np.ndarray = field(repr=False)
    kind: BasisKind

    def __post_init__(self):
        rows = np.array(self.rows, dtype=np.float64)
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def size(self):
        return self.rows.shape[0]

    def to_csv(self, path):
        """Dump rows to CSV, row-major, at full (round-trip) precision."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            for row in self.rows:
                writer.writerow([repr(float(v)) for v in row])


def _check_size(size):
    if isinstance(size, bool) or int(size) != size or size < 1:
        raise InvalidArgument(f"basis size must be a positive integer, got {size!r}")
    return int(size)


def _check_p(p):
    if not (isinstance(p, (int, float)) and math.isfinite(p) and 0.0 < p < 1.0):
        raise InvalidArgument(f"Krawtchouk parameter p must lie strictly inside (0, 1), got {p!r}")


def _unit_rows(rows):
    return rows / np.linalg.norm(rows, axis=1, keepdims=True)


def tchebichef_basis(size):
    """Orthonormal discrete Tchebichef polynomials.

    Values at ``x = 0`` follow from a recurrence in the order ``n``; each row
    is then extended over ``x`` with the three-term recurrence in ``x`` up to
    the midpoint and mirrored using ``t_n(N-1-x) = (-1)^n t_n(x)``. This
    avoids the growth that the pure order recurrence suffers for large N.
    """
    N = _check_size(size)
    T = np.zeros((N, N))
    T[0, :] = 1.0 / math.sqrt(N)
    if N == 1:
        return BasisMatrix(T, BasisKind(TCHEBICHEF))

    t0 = np.empty(N)
    t0[0] = 1.0 / math.sqrt(N)
    for n in range(1, N):
        t0[n] = -math.sqrt((N - n) / (N + n)) * math.sqrt((2 * n + 1) / (2 * n - 1)) * t0[n - 1]

    half = (N + 1) // 2
    for n in range(1, N):
        row = np.empty(N)
        row[0] = t0[n]
        if half > 1:
            row[1] = (1.0 + n * (1.0 + n) / (1.0 - N)) * t0[n]
        for xi in range(2, half):
            g1 = (-n * (n + 1) - (2 * xi - 1) * (xi - N - 1) - xi) / (xi * (N - xi))
            g2 = (xi - 1) * (xi - N - 1) / (xi * (N - xi))
            row[xi] = g1 * row[xi - 1] + g2 * row[xi - 2]
        sign = -1.0 if n % 2 else 1.0
        row[half:] = sign * row[: N - half][::-1]
        T[n] = row

    T = _unit_rows(T)
    # positive at x = N-1, matching t_n with a positive leading coefficient
    T[1:] *= np.where(T[1:, -1] < 0, -1.0, 1.0)[:, None]
    return BasisMatrix(T, BasisKind(TCHEBICHEF))


def _krawtchouk_jacobi(N, p):
    # diagonal and off-diagonal of the Jacobi matrix of the weighted Krawtchouk
    # recurrence x K_n = a_n K_n - b_n K_{n+1} - b_{n-1} K_{n-1}
    n = np.arange(N + 1, dtype=np.float64)
    diag = p * (N - n) + n * (1.0 - p)
    off = -np.sqrt(p * (1.0 - p) * (n[:-1] + 1.0) * (N - n[:-1]))
    return diag, off


def krawtchouk_basis(size, p=0.5):
    """Weighted Krawtchouk functions ``K_n(x; p, size-1) * sqrt(w(x) / rho(n))``.

    The forward recurrence in ``n`` loses all accuracy for ``size`` around 64
    once ``p`` moves off 0.5. Instead, column ``x`` of the matrix is the
    eigenvector of the recurrence's Jacobi matrix for eigenvalue ``x``; the
    eigenvalues are the integers ``0..size-1``, so the eigenvectors are well
    conditioned. The weighted functions satisfy ``K_n(x) = K_x(n)``, which is
    what pins the per-eigenvector signs (``K_0(x) = sqrt(w(x)) > 0``).
    """
    N1 = _check_size(size)
    _check_p(p)
    p = float(p)
    if N1 == 1:
        return BasisMatrix(np.ones((1, 1)), BasisKind(KRAWTCHOUK, p))
    diag, off = _krawtchouk_jacobi(N1 - 1, p)
    _, V = eigh_tridiagonal(diag, off)
    return BasisMatrix(_unit_rows(_fix_symmetric_signs(V)), BasisKind(KRAWTCHOUK, p))


def _fix_symmetric_signs(V):
    # V[:, k] = s_k * K[k, :] for unknown signs s_k, and K is symmetric, so
    # s_j = s_k * sign(V[j, k]) * sign(V[k, j]). Propagate from k = 0 along the
    # largest available entries so that no sign is read off a tiny component.
    n = V.shape[0]
    signs = np.zeros(n)
    signs[0] = 1.0 if V[:, 0].sum() > 0 else -1.0
    known = np.zeros(n, dtype=bool)
    known[0] = True
    mag = np.abs(V)
    best = mag[:, 0].copy()
    src = np.zeros(n, dtype=int)
    best[0] = -1.0
    for _ in range(n - 1):
        j = int(np.argmax(np.where(known, -1.0, best)))
        k = src[j]
        signs[j] = signs[k] * np.sign(V[j, k]) * np.sign(V[k, j])
        known[j] = True
        better = (mag[:, j] > best) & ~known
        best[better] = mag[better, j]
        src[better] = j
    return (V * signs[None, :]).T


def dct_basis(size):
    """Orthonormal type-II DCT: ``c(k) cos(pi (2x+1) k / 2N)``."""
    N = _check_size(size)
    k = np.arange(N)[:, None]
    x = np.arange(N)[None, :]
    C = np.cos(np.pi * (2 * x + 1) * k / (2 * N)) * math.sqrt(2.0 / N)
    C[0, :] = 1.0 / math.sqrt(N)
    return BasisMatrix(C, BasisKind(DCT))


def make_basis(kind, size):
    if isinstance(kind, str):
        kind = BasisKind(kind)
    if kind.variant == TCHEBICHEF:
        return tchebichef_basis(size)
    if kind.variant == KRAWTCHOUK:
        return krawtchouk_basis(size, kind.krawtchouk_p)
    return dct_basis(size)
