"""Orthogonal Matching Pursuit.

The selected-atom subspace is tracked with an incrementally grown QR
factorization (modified Gram-Schmidt with one reorthogonalization pass), so
each iteration costs O(d k) instead of a fresh least-squares solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular

from momentcs.errors import InvalidArgument

CORRELATION_FLOOR = 1e-12


@dataclass(frozen=True)
class StoppingRule:
    residual_threshold: float = 0.0
    max_atoms: int = 36

    def __post_init__(self):
        if not (math.isfinite(self.residual_threshold) and self.residual_threshold >= 0):
            raise InvalidArgument(f"residual_threshold must be a finite non-negative number, got {self.residual_threshold!r}")
        if isinstance(self.max_atoms, bool) or int(self.max_atoms) != self.max_atoms or self.max_atoms < 1:
            raise InvalidArgument(f"max_atoms must be a positive integer, got {self.max_atoms!r}")
        object.__setattr__(self, "max_atoms", int(self.max_atoms))


@dataclass(frozen=True)
class SparseCode:
    entries: tuple
    residual_norm: float
    residual_history: tuple = field(default=(), repr=False, compare=False)

    @property
    def iterations(self):
        return len(self.entries)

    @property
    def indices(self):
        return [i for i, _ in self.entries]

    @property
    def coefficients(self):
        return np.array([c for _, c in self.entries], dtype=np.float64)


def _atoms_and_mask(dictionary):
    atoms = getattr(dictionary, "atoms", None)
    if atoms is None:
        atoms = np.asarray(dictionary, dtype=np.float64)
        return atoms, np.ones(atoms.shape[1], dtype=bool)
    return atoms, dictionary.allowed_mask()


def omp_encode(dictionary, target, rule=None):
    """Greedy sparse code of ``target`` over the dictionary atoms.

    ``dictionary`` is a :class:`~momentcs.dictionary.Dictionary` or a plain
    ``(d, K)`` array of unit-norm atoms. Stops when the residual norm drops to
    ``rule.residual_threshold``, after ``rule.max_atoms`` selections, or when
    no remaining atom correlates with the residual above 1e-12. Exact ties in
    the correlation go to the lowest atom index.
    """
    rule = rule or StoppingRule()
    A, allowed = _atoms_and_mask(dictionary)
    d, n_atoms = A.shape
    y = np.asarray(target, dtype=np.float64).ravel()
    if y.shape[0] != d:
        raise InvalidArgument(f"target has dimension {y.shape[0]}, dictionary atoms have {d}")
    if not np.all(np.isfinite(y)):
        raise InvalidArgument("target contains non-finite values")
    n_allowed = int(allowed.sum())
    if rule.max_atoms > min(d, n_allowed):
        raise InvalidArgument(f"max_atoms={rule.max_atoms} exceeds the {min(d, n_allowed)} selectable atoms")

    available = allowed.copy()
    selected = []
    Q = np.empty((d, rule.max_atoms))
    R = np.zeros((rule.max_atoms, rule.max_atoms))
    coef = np.empty(0)
    r = y.copy()
    rnorm = float(np.linalg.norm(r))
    history = [rnorm]

    while len(selected) < rule.max_atoms and rnorm > rule.residual_threshold:
        corr = np.abs(A.T @ r)
        corr[~available] = -1.0
        j = int(np.argmax(corr))
        if corr[j] < CORRELATION_FLOOR:
            break
        k = len(selected)
        v = A[:, j].copy()
        for _ in range(2):
            h = Q[:, :k].T @ v
            v -= Q[:, :k] @ h
            R[:k, k] += h
        vnorm = float(np.linalg.norm(v))
        if vnorm <= 1e-12 * max(1.0, float(np.linalg.norm(A[:, j]))):
            # atom lies in the span of the current selection; nothing left to gain
            R[:k, k] = 0.0
            break
        Q[:, k] = v / vnorm
        R[k, k] = vnorm
        selected.append(j)
        available[j] = False

        kk = k + 1
        coef = solve_triangular(R[:kk, :kk], Q[:, :kk].T @ y)
        r = y - A[:, selected] @ coef
        rnorm = float(np.linalg.norm(r))
        history.append(rnorm)

    entries = tuple((idx, float(c)) for idx, c in zip(selected, coef))
    return SparseCode(entries, rnorm, tuple(history))


def reconstruct(dictionary, code):
    A, _ = _atoms_and_mask(dictionary)
    out = np.zeros(A.shape[0])
    for idx, c in code.entries:
        if not 0 <= idx < A.shape[1]:
            raise InvalidArgument(f"atom index {idx} out of range for {A.shape[1]} atoms")
        out += c * A[:, idx]
    return out


def is_orthonormal(dictionary, tol=1e-9):
    A, _ = _atoms_and_mask(dictionary)
    if A.shape[0] != A.shape[1]:
        return False
    return bool(np.abs(A.T @ A - np.eye(A.shape[1])).max() < tol)


def omp_encode_orthonormal(dictionary, targets, thresholds, max_atoms):
    """Vectorized OMP for a square orthonormal dictionary.

    With orthonormal atoms the least-squares coefficients on any support are
    the plain inner products and every unselected atom keeps its original
    correlation with the residual, so OMP reduces to taking coefficients in
    order of decreasing magnitude until the stopping rule fires. Same rule and
    tie-breaking as :func:`omp_encode`.

    ``targets`` is ``(P, d)``, ``thresholds`` a scalar or ``(P,)`` array.
    Returns ``(coefs, counts, residual_norms)`` where ``coefs`` is ``(P, K)``
    holding only the selected coefficients (zeros elsewhere).
    """
    A, allowed = _atoms_and_mask(dictionary)
    Y = np.atleast_2d(np.asarray(targets, dtype=np.float64))
    P = Y.shape[0]
    n_allowed = int(allowed.sum())
    if max_atoms > n_allowed:
        raise InvalidArgument(f"max_atoms={max_atoms} exceeds the {n_allowed} selectable atoms")
    thr = np.broadcast_to(np.asarray(thresholds, dtype=np.float64), (P,))

    C = Y @ A
    mag = np.abs(C)
    mag[:, ~allowed] = -1.0
    # excluded atoms sort last, so every prefix of ``order`` is a valid support
    order = np.argsort(-mag, axis=1, kind="stable")
    ranked = np.take_along_axis(C, order, axis=1)
    # residual energy after k picks = energy of the atoms not picked; summing
    # the tail avoids the cancellation of ||y||^2 - sum(picked^2)
    sq = ranked * ranked
    tail = np.cumsum(sq[:, ::-1], axis=1)[:, ::-1]
    res = np.sqrt(np.concatenate([tail, np.zeros((P, 1))], axis=1))[:, : max_atoms + 1]
    top = ranked[:, :max_atoms]
    top_mag = np.abs(top)
    order = order[:, :max_atoms]

    # stop before step k+1 if residual after k atoms is small enough or the next
    # correlation is below the floor; the cap is max_atoms
    stop = res[:, :max_atoms] <= thr[:, None]
    stop |= top_mag < CORRELATION_FLOOR
    counts = np.where(stop.any(axis=1), stop.argmax(axis=1), max_atoms)

    keep = np.arange(max_atoms)[None, :] < counts[:, None]
    coefs = np.zeros_like(C)
    np.put_along_axis(coefs, order, np.where(keep, top, 0.0), axis=1)
    residual = res[np.arange(P), counts]
    return coefs, counts, residual
