import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ojs.errors import DimensionMismatch, FullSpace, RankDeficient
from ojs.grassmann import (SubspaceBasis, SubspaceCodebook, aligned_subspace_residual,
                           alignment_measure_bounds, chordal_distance, chordal_distance_sq,
                           chordal_distance_sq_complement, estimate_covering_radius,
                           orthogonal_complement, orthonormal_basis, random_codebook,
                           random_subspace, random_subspaces)

from conftest import crandn

seeds = st.integers(0, 2**32 - 1)


def gram_schmidt(m):
    """Classical Gram-Schmidt, kept independent of the library's SVD route."""
    cols = []
    for j in range(m.shape[1]):
        v = m[:, j].astype(complex)
        for q in cols:
            v = v - (q.conj() @ v) * q
        for q in cols:  # second pass for stability
            v = v - (q.conj() @ v) * q
        cols.append(v / np.linalg.norm(v))
    return np.stack(cols, axis=1)


def span(*cols, n=3):
    e = np.eye(n)
    return SubspaceBasis(np.stack([e[:, c] for c in cols], axis=1))


# --- orthonormal_basis ------------------------------------------------------

def test_orthonormal_input_keeps_projector(rng):
    q = np.linalg.qr(crandn(rng, 5, 2))[0]
    b = orthonormal_basis(q)
    assert np.abs(b.projector - q @ q.conj().T).max() < 1e-12


def test_single_column():
    b = orthonormal_basis(np.array([[2.0], [0.0]]))
    assert np.allclose(b.projector, np.diag([1.0, 0.0]), atol=1e-15)


def test_two_method_oracle(rng):
    for _ in range(50):
        m = crandn(rng, 4, 2)
        g = gram_schmidt(m)
        b = orthonormal_basis(m)
        assert np.abs(b.projector - g @ g.conj().T).max() < 1e-9
        assert b.orthonormality_residual() < 1e-10


def test_rank_deficient():
    with pytest.raises(RankDeficient):
        orthonormal_basis(np.array([[1.0, 2.0], [2.0, 4.0], [0.0, 0.0]]))


def test_basis_shape_checks():
    with pytest.raises(DimensionMismatch):
        SubspaceBasis(np.ones((2, 3)))


# --- chordal distances ------------------------------------------------------

def test_contained_subspace_has_zero_distance(rng):
    q = random_subspace(5, 3, rng)
    h = orthonormal_basis(q.basis @ crandn(rng, 3, 2))
    assert chordal_distance_sq(h, q) < 1e-12


def test_analytic_example():
    h, q = span(0, 1), span(1, 2)
    assert chordal_distance_sq(h, q) == pytest.approx(1.0, abs=1e-15)
    assert chordal_distance_sq_complement(h, span(0)) == pytest.approx(1.0, abs=1e-15)


def test_complement_form_zero_when_orthogonal():
    assert chordal_distance_sq_complement(span(0, 1), span(2)) == pytest.approx(0.0, abs=1e-15)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        chordal_distance_sq(span(0, n=3), span(0, n=4))


@settings(max_examples=200, deadline=None)
@given(seed=seeds, nr=st.integers(3, 6), data=st.data())
def test_chordal_forms_agree(seed, nr, data):
    nt = data.draw(st.integers(1, nr - 1))
    nj = data.draw(st.integers(1, nr - nt))
    rng = np.random.default_rng(seed)
    h = random_subspace(nr, nj, rng)
    q = random_subspace(nr, nr - nt, rng)
    q_perp = orthogonal_complement(q)
    d1 = chordal_distance_sq(h, q)
    d2 = chordal_distance_sq_complement(h, q_perp)
    assert abs(d1 - d2) < 1e-9
    assert -1e-12 <= d1 <= min(nj, nr - nt) + 1e-12


def test_chordal_forms_agree_bulk():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        h = random_subspace(4, 2, rng)
        q = random_subspace(4, 3, rng)
        assert abs(chordal_distance_sq(h, q)
                   - chordal_distance_sq_complement(h, orthogonal_complement(q))) < 1e-9


@settings(max_examples=100, deadline=None)
@given(seed=seeds)
def test_projector_precoding_invariance(seed):
    rng = np.random.default_rng(seed)
    h = crandn(rng, 4, 2)
    u = crandn(rng, 2, 2)
    a, b = orthonormal_basis(h), orthonormal_basis(h @ u)
    assert chordal_distance_sq(a, b) < 1e-9
    assert np.abs(a.projector - b.projector).max() < 1e-9


def test_chordal_distance_is_sqrt():
    assert chordal_distance(span(0, 1), span(1, 2)) == pytest.approx(1.0)


# --- orthogonal complement ---------------------------------------------------

def test_complement_of_e1():
    c = orthogonal_complement(span(0, n=2))
    assert np.allclose(c.projector, np.diag([0.0, 1.0]), atol=1e-15)


def test_complement_unitary_and_involution():
    rng = np.random.default_rng(1)
    for _ in range(1000):
        n = int(rng.integers(2, 7))
        d = int(rng.integers(1, n))
        q = random_subspace(n, d, rng)
        c = orthogonal_complement(q)
        u = np.hstack([q.basis, c.basis])
        assert np.linalg.norm(u.conj().T @ u - np.eye(n)) < 1e-10
        assert np.abs(orthogonal_complement(c).projector - q.projector).max() < 1e-9


def test_complement_of_full_space():
    with pytest.raises(FullSpace):
        orthogonal_complement(SubspaceBasis(np.eye(3)))


# --- alignment residual and bounds -------------------------------------------

def test_identical_bases_align_perfectly(rng):
    h = random_subspace(4, 2, rng)
    res, q_perp = aligned_subspace_residual([h, h, h], nt=2)
    assert res < 1e-12
    assert q_perp.subspace_dim == 2
    assert alignment_measure_bounds([h, h], 2) == pytest.approx((0.0, 0.0), abs=1e-6)


def test_residual_analytic():
    res, q_perp = aligned_subspace_residual([span(0, 1), span(0, 2)], nt=1)
    assert res == pytest.approx(1.0, abs=1e-12)
    # B = diag(2, 1, 1): the smallest eigenspace is degenerate, only containment in span(e2, e3) is contractual
    assert abs(q_perp.basis[0, 0]) < 1e-12


def test_bounds_formula():
    lower, upper = alignment_measure_bounds([span(0, 1), span(0, 2)], nt=1)
    assert lower == pytest.approx(np.sqrt(0.5))
    assert upper == pytest.approx(1.0)


def test_residual_minimizes_over_sampled_q():
    rng = np.random.default_rng(2)
    for _ in range(10):
        bases = [random_subspace(4, 2, rng) for _ in range(2)]
        res, _ = aligned_subspace_residual(bases, nt=2)
        for q in random_subspaces(4, 2, 1000, rng):
            qb = SubspaceBasis(q)
            assert sum(chordal_distance_sq(h, qb) for h in bases) >= res - 1e-9


def test_bounds_bracket_max_distance_at_optimum():
    rng = np.random.default_rng(3)
    for _ in range(200):
        k = int(rng.integers(1, 5))
        bases = [random_subspace(4, 2, rng) for _ in range(k)]
        res, q_perp = aligned_subspace_residual(bases, nt=2)
        lower, upper = alignment_measure_bounds(bases, nt=2)
        q = orthogonal_complement(q_perp)
        worst = max(chordal_distance_sq(h, q) for h in bases)
        # squared domain: sqrt amplifies round-off near zero residual
        assert lower**2 - 1e-9 <= worst <= upper**2 + 1e-9
        assert res <= k * 2 + 1e-9
        if k == 1:
            assert lower == pytest.approx(upper)
        elif res > 1e-9:
            assert lower < upper


def test_residual_rejects_bad_nt(rng):
    h = random_subspace(3, 1, rng)
    with pytest.raises(DimensionMismatch):
        aligned_subspace_residual([h], nt=3)
    with pytest.raises(DimensionMismatch):
        aligned_subspace_residual([h, random_subspace(4, 1, rng)], nt=1)


# --- random subspaces --------------------------------------------------------

@pytest.mark.parametrize("ambient, dim", [(2, 1), (4, 2)])
def test_isotropy(ambient, dim):
    rng = np.random.default_rng(4)
    q = random_subspaces(ambient, dim, 10_000, rng)
    mean_proj = np.einsum("nad,nbd->ab", q, q.conj()) / len(q)
    assert np.abs(mean_proj - (dim / ambient) * np.eye(ambient)).max() < 0.02


def test_random_subspace_deterministic_and_prefix():
    a = random_subspaces(4, 2, 10, np.random.default_rng(5))
    b = random_subspaces(4, 2, 4, np.random.default_rng(5))
    assert np.array_equal(a[:4], b)
    g = np.random.default_rng(5)
    one_by_one = [random_subspace(4, 2, g).basis for _ in range(3)]
    assert np.array_equal(np.stack(one_by_one), a[:3])


# --- covering radius ---------------------------------------------------------

def test_covering_zero_when_samples_inside_codeword(rng):
    q = random_subspace(3, 2, rng)
    inside = np.stack([q.basis @ np.linalg.qr(crandn(rng, 2, 2))[0] for _ in range(50)])
    cb = SubspaceCodebook((q,))
    assert estimate_covering_radius(cb, 2, samples=inside) < 1e-6


def test_adding_codeword_never_increases_estimate():
    rng = np.random.default_rng(6)
    samples = random_subspaces(3, 2, 500, rng)
    book = random_codebook(3, 2, 20, rng)
    prev = np.inf
    for m in range(1, 21):
        est = estimate_covering_radius(SubspaceCodebook(book.codewords[:m]), 2, samples=samples)
        assert est <= prev
        prev = est


def test_estimate_non_decreasing_in_samples():
    book = random_codebook(3, 2, 8, np.random.default_rng(7))
    ests = [estimate_covering_radius(book, 2, n, np.random.default_rng(8)) for n in (10, 100, 1000)]
    assert ests == sorted(ests)


def test_covering_trend_decreasing():
    rng = np.random.default_rng(9)
    samples = random_subspaces(3, 2, 2000, rng)
    ms = [2, 8, 32, 128]
    means = []
    for m in ms:
        ests = [estimate_covering_radius(random_codebook(3, 2, m, rng), 2, samples=samples)
                for _ in range(3)]
        means.append(np.mean(ests))
    assert all(b < a for a, b in zip(means, means[1:]))
    assert np.polyfit(np.log(ms), np.log(means), 1)[0] < 0


def test_codebook_homogeneous():
    with pytest.raises(DimensionMismatch):
        SubspaceCodebook((span(0, 1), span(0)))
    with pytest.raises(ValueError):
        SubspaceCodebook(())
