"""Separable 2D patch dictionaries built from a pair of 1D bases."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from momentcs.basis import KRAWTCHOUK, BasisKind, dct_basis, krawtchouk_basis, tchebichef_basis
from momentcs.errors import InvalidArgument


@dataclass(frozen=True, eq=False)
class Dictionary:
    """Square dictionary whose column ``n * s + m`` is the atom built from 1D rows n and m.

    ``atoms`` has shape ``(s*s, s*s)``; each atom is the row-major vectorization of
    the outer product of the two 1D basis rows. ``excluded`` lists atom indices
    OMP may never select (the DC atom by default).
    """

    patch_size: int
    atoms: np.ndarray = field(repr=False)
    kind: BasisKind
    excluded: frozenset = frozenset({0})
    column_kind: BasisKind = None

    def __post_init__(self):
        atoms = np.array(self.atoms, dtype=np.float64)
        atoms.setflags(write=False)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "excluded", frozenset(int(i) for i in self.excluded))
        if self.column_kind is None:
            object.__setattr__(self, "column_kind", self.kind)

    @property
    def atom_dim(self):
        return self.atoms.shape[0]

    @property
    def n_atoms(self):
        return self.atoms.shape[1]

    def atom(self, index):
        return self.atoms[:, index]

    def allowed_mask(self):
        mask = np.ones(self.n_atoms, dtype=bool)
        for i in self.excluded:
            if 0 <= i < self.n_atoms:
                mask[i] = False
        return mask

    def with_excluded(self, excluded):
        return Dictionary(self.patch_size, self.atoms, self.kind, frozenset(excluded), self.column_kind)

    def to_csv(self, path):
        """One atom per line, at full precision."""
        with open(path, "w") as fh:
            for col in self.atoms.T:
                fh.write(",".join(repr(float(v)) for v in col))
                fh.write("\n")


def _basis_1d(kind, size, p):
    if kind.variant == KRAWTCHOUK:
        return krawtchouk_basis(size, p)
    if kind.variant == "tchebichef":
        return tchebichef_basis(size)
    return dct_basis(size)


def build_dictionary(kind, patch_size=12, p1=0.5, p2=0.5, excluded=(0,)):
    """Build the separable dictionary for a basis family.

    For Krawtchouk, ``p1`` drives the patch-row direction (order n) and ``p2``
    the column direction (order m). ``p1``/``p2`` are ignored otherwise.
    """
    if isinstance(kind, str):
        kind = BasisKind(kind)
    if isinstance(patch_size, bool) or int(patch_size) != patch_size or patch_size < 2:
        raise InvalidArgument(f"patch_size must be an integer >= 2, got {patch_size!r}")
    s = int(patch_size)
    if kind.variant == KRAWTCHOUK:
        row_basis = _basis_1d(kind, s, p1)
        col_basis = _basis_1d(kind, s, p2)
        kind, col_kind = row_basis.kind, col_basis.kind
    else:
        row_basis = col_basis = _basis_1d(kind, s, None)
        col_kind = kind
    # kron(R, C)[n*s + m, x*s + y] = R[n, x] * C[m, y]
    atoms = np.kron(row_basis.rows, col_basis.rows).T
    return Dictionary(s, atoms, kind, frozenset(excluded), col_kind)


def mutual_coherence(dictionary):
    """Largest absolute inner product between two distinct (normalized) atoms."""
    A = dictionary.atoms if isinstance(dictionary, Dictionary) else np.asarray(dictionary, dtype=float)
    if A.ndim != 2 or A.shape[1] < 2:
        raise InvalidArgument("mutual coherence needs at least two atoms")
    A = A / np.linalg.norm(A, axis=0, keepdims=True)
    G = np.abs(A.T @ A)
    np.fill_diagonal(G, 0.0)
    return float(min(G.max(), 1.0))


def render_atlas(dictionary, gap=1):
    """Tile all atoms into one grayscale image, each tile stretched to [0, 255].

    Tile (n, m) shows atom ``n * s + m``. Constant tiles render as 128 and
    tiles are separated by ``gap`` white pixels.
    """
    s = dictionary.patch_size
    if gap < 0:
        raise InvalidArgument("gap must be non-negative")
    side = s * s + (s - 1) * gap
    out = np.full((side, side), 255.0)
    for n in range(s):
        for m in range(s):
            tile = dictionary.atoms[:, n * s + m].reshape(s, s)
            lo, hi = tile.min(), tile.max()
            if hi - lo <= 1e-12 * max(1.0, abs(hi)):
                tile = np.full((s, s), 128.0)
            else:
                tile = (tile - lo) / (hi - lo) * 255.0
            r0 = n * (s + gap)
            c0 = m * (s + gap)
            out[r0 : r0 + s, c0 : c0 + s] = tile
    return out
