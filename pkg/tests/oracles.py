"""Straightforward per-subset reimplementations used as test oracles.

Each scheme is scored one subset at a time with routines that differ from
the batched library path (general eigvals, Gram-Schmidt generators, the
single-instance rate functions).
"""
import itertools

import numpy as np

from ojs.rates import bob_capacity, bob_rate, eve_capacity, secrecy_rate
from ojs.selection import SchemeTag

TIE_TOL = 1e-9


def gram_schmidt(m):
    cols = []
    for j in range(m.shape[1]):
        v = m[:, j].astype(complex)
        for _ in range(2):
            for q in cols:
                v = v - (q.conj() @ v) * q
        cols.append(v / np.linalg.norm(v))
    return np.stack(cols, axis=1)


def smallest_eigs(a, count):
    lam = np.sort(np.linalg.eigvals(a).real)[::-1]  # descending
    return lam[len(lam) - count:]


def dof_loss_product(mats, count, coef):
    a = sum(mats)
    return float(np.prod([1 + coef * max(x, 0.0) for x in smallest_eigs(a, count)]))


def eigen_postprocessor(a, nt):
    w, v = np.linalg.eig(a)
    order = np.argsort(w.real)
    q, _ = np.linalg.qr(v[:, order[:nt]])
    return q


def score(scheme, real, cfg, power, idx):
    hj = [real.h_jam[i] for i in idx]
    gj = [real.g_jam[i] for i in idx]
    if scheme == SchemeTag.OJS1:
        return dof_loss_product([h @ h.conj().T for h in hj], cfg.nt, power / cfg.nj)
    if scheme == SchemeTag.OJS2:
        gens = [gram_schmidt(h) for h in hj]
        return dof_loss_product([g @ g.conj().T for g in gens], cfg.nt, power)
    if scheme == SchemeTag.CAPMAX_BOB:
        return bob_capacity(real.h0, np.stack(hj), power, cfg)
    if scheme == SchemeTag.SECRECY_MAX:
        v = eigen_postprocessor(sum(h @ h.conj().T for h in hj), cfg.nt)
        r_bob = bob_rate(real.h0, np.stack(hj), v, power, cfg)
        return secrecy_rate(r_bob, eve_capacity(real.g0, np.stack(gj), power, cfg))
    raise ValueError(scheme)


def exhaustive(scheme, real, cfg, power):
    """(best subset, best value, all values) with lexicographic tie-break."""
    subsets = list(itertools.combinations(range(real.pool_size), cfg.k))
    vals = np.array([score(scheme, real, cfg, power, s) for s in subsets])
    maximize = scheme in (SchemeTag.CAPMAX_BOB, SchemeTag.SECRECY_MAX)
    best = vals.max() if maximize else vals.min()
    tol = TIE_TOL * max(1.0, abs(best))
    near = np.nonzero(vals >= best - tol if maximize else vals <= best + tol)[0]
    i = int(near[0])
    return subsets[i], float(vals[i]), dict(zip(subsets, vals))
