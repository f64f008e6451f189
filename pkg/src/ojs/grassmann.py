"""Subspace geometry on complex Grassmann manifolds.

A subspace is carried around as a generator matrix (orthonormal columns).
Generators are not unique; only the projector ``U U^H`` is, so every
quantity here is computed from projector traces.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, FullSpace, RankDeficient

RANK_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Generator matrix of a subspace, shape (ambient_dim, subspace_dim)."""

    basis: np.ndarray

    def __post_init__(self):
        b = np.array(self.basis, dtype=complex)
        if b.ndim != 2 or not 1 <= b.shape[1] <= b.shape[0]:
            raise DimensionMismatch(f"generator must be tall 2-D, got shape {b.shape}")
        b.flags.writeable = False
        object.__setattr__(self, "basis", b)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def subspace_dim(self) -> int:
        return self.basis.shape[1]

    @property
    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def orthonormality_residual(self) -> float:
        u = self.basis
        return float(np.linalg.norm(u.conj().T @ u - np.eye(self.subspace_dim)))


@dataclass(frozen=True, eq=False)
class SubspaceCodebook:
    """M codewords of identical dimensions."""

    codewords: tuple

    def __post_init__(self):
        cw = tuple(self.codewords)
        if not cw:
            raise ValueError("codebook needs at least one codeword")
        shape = cw[0].basis.shape
        if any(c.basis.shape != shape for c in cw):
            raise DimensionMismatch("codewords must share (ambient_dim, subspace_dim)")
        object.__setattr__(self, "codewords", cw)

    def __len__(self):
        return len(self.codewords)

    def stacked(self) -> np.ndarray:
        return np.stack([c.basis for c in self.codewords])


def orthonormal_basis(m) -> SubspaceBasis:
    """Orthonormal generator of the column space of a full-column-rank matrix."""
    m = np.asarray(m, dtype=complex)
    if m.ndim == 1:
        m = m[:, None]
    u, sv, _ = np.linalg.svd(m, full_matrices=False)
    if sv.size == 0 or sv[-1] <= RANK_TOL:
        raise RankDeficient(f"smallest singular value {sv[-1] if sv.size else 0:.3e}")
    return SubspaceBasis(u)


def _check_ambient(a: SubspaceBasis, b: SubspaceBasis):
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch(f"ambient dims differ: {a.ambient_dim} vs {b.ambient_dim}")


def projector_overlap(a: SubspaceBasis, b: SubspaceBasis) -> float:
    """tr(P_a P_b) = ||A^H B||_F^2."""
    _check_ambient(a, b)
    return float(np.sum(np.abs(a.basis.conj().T @ b.basis) ** 2))


def chordal_distance_sq(h: SubspaceBasis, q: SubspaceBasis) -> float:
    """min(dim h, dim q) - tr(P_h P_q)."""
    d = min(h.subspace_dim, q.subspace_dim) - projector_overlap(h, q)
    return max(d, 0.0)


def chordal_distance_sq_complement(h: SubspaceBasis, q_perp: SubspaceBasis) -> float:
    """tr(Q_perp^H P_h Q_perp), the squared distance of ``h`` to the
    complement of ``q_perp``."""
    return max(projector_overlap(h, q_perp), 0.0)


def chordal_distance(h: SubspaceBasis, q: SubspaceBasis) -> float:
    return float(np.sqrt(chordal_distance_sq(h, q)))


def orthogonal_complement(q: SubspaceBasis) -> SubspaceBasis:
    n, d = q.basis.shape
    if d >= n:
        raise FullSpace("subspace already fills the ambient space")
    # trailing left singular vectors of Q span its complement
    u, _, _ = np.linalg.svd(q.basis, full_matrices=True)
    return SubspaceBasis(u[:, d:])


def _smallest_eigvecs(b: np.ndarray, count: int):
    w, v = np.linalg.eigh(b)  # ascending
    return w[:count], v[:, :count]


def aligned_subspace_residual(bases: Sequence[SubspaceBasis], nt: int):
    """Best common (N_r - nt)-dimensional subspace for a set of jamming subspaces.

    Returns ``(residual, q_perp)`` where ``q_perp`` spans the eigenvectors of
    the ``nt`` smallest eigenvalues of ``sum_k P_k`` and ``residual`` is the sum
    of those eigenvalues, i.e. min over Q of sum_k d_c^2(H_k, Q).
    """
    if not bases:
        raise ValueError("need at least one basis")
    n = bases[0].ambient_dim
    if any(b.ambient_dim != n for b in bases):
        raise DimensionMismatch("bases must share an ambient dimension")
    if not 1 <= nt <= n - 1:
        raise DimensionMismatch(f"nt must lie in [1, {n - 1}], got {nt}")
    total = sum(b.projector for b in bases)
    w, v = _smallest_eigvecs(total, nt)
    residual = float(np.clip(w, 0.0, None).sum())
    return residual, SubspaceBasis(v)


def alignment_measure_bounds(bases: Sequence[SubspaceBasis], nt: int):
    """Bracket the minimax alignment measure between sqrt(residual/K) and sqrt(residual)."""
    residual, _ = aligned_subspace_residual(bases, nt)
    return float(np.sqrt(residual / len(bases))), float(np.sqrt(residual))


def random_subspaces(ambient: int, dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` isotropic generators stacked as (count, ambient, dim).

    Draws are consumed subspace by subspace, so a batch of ``n`` is the prefix
    of any larger batch from the same generator state.
    """
    if not 1 <= dim <= ambient:
        raise DimensionMismatch(f"need 1 <= dim <= ambient, got dim={dim}, ambient={ambient}")
    z = rng.standard_normal((count, 2, ambient, dim))
    g = z[:, 0] + 1j * z[:, 1]
    q, r = np.linalg.qr(g)
    diag = np.abs(np.diagonal(r, axis1=1, axis2=2))
    bad = np.nonzero(diag.min(axis=1) <= RANK_TOL)[0]
    for i in bad:  # probability zero; redraw from a derived stream
        q[i] = random_subspace(ambient, dim, np.random.default_rng(rng.integers(2**63))).basis
    return q


def random_subspace(ambient: int, dim: int, rng: np.random.Generator) -> SubspaceBasis:
    return SubspaceBasis(random_subspaces(ambient, dim, 1, rng)[0])


def random_codebook(ambient: int, dim: int, size: int, rng: np.random.Generator) -> SubspaceCodebook:
    return SubspaceCodebook(tuple(SubspaceBasis(q) for q in random_subspaces(ambient, dim, size, rng)))


def covering_distances(codebook: SubspaceCodebook, samples: np.ndarray) -> np.ndarray:
    """Chordal distance from each sample to its nearest codeword.

    ``samples`` is a stack of generators, shape (n, ambient, sample_dim).
    """
    cb = codebook.stacked()
    samples = np.asarray(samples)
    if samples.shape[1] != cb.shape[1]:
        raise DimensionMismatch("samples and codewords live in different ambient spaces")
    overlap = np.abs(np.einsum("nad,mae->nmde", samples.conj(), cb)) ** 2
    d2 = min(samples.shape[2], cb.shape[2]) - overlap.sum(axis=(2, 3))
    return np.sqrt(np.clip(d2, 0.0, None)).min(axis=1)


def estimate_covering_radius(codebook: SubspaceCodebook, sample_dim: int, num_samples: int = 2000,
                             rng: np.random.Generator | None = None, samples=None) -> float:
    """Monte Carlo lower estimate of the covering radius.

    Maximum over sampled ``sample_dim``-dimensional subspaces of the distance
    to the nearest codeword. Pass ``samples`` (stack of generators) to use a
    fixed sample set instead of drawing isotropic ones.
    """
    if samples is None:
        if num_samples < 1:
            raise ValueError("num_samples must be >= 1")
        if rng is None:
            rng = np.random.default_rng()
        ambient = codebook.codewords[0].ambient_dim
        samples = random_subspaces(ambient, sample_dim, num_samples, rng)
    return float(covering_distances(codebook, samples).max())
