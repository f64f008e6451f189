"""Jammer subset selection.

Every scheme scores all K-subsets of the pool in lexicographic order and
keeps the first extremal one, so ties resolve to the lexicographically
smallest subset. Scores are evaluated in vectorised blocks of subsets.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .channel import SELECTION_STREAM, ChannelRealization, SeededRng, SystemConfig
from .errors import KTooLarge, NotHermitian, PoolTooLarge
from .grassmann import SubspaceBasis

BLOCK = 20_000
DEFAULT_EXHAUSTIVE_CAP = 10**6
LN2 = math.log(2.0)


class SchemeTag(str, enum.Enum):
    OJS1 = "OJS1"
    OJS2 = "OJS2"
    RANDOM = "RANDOM"
    CAPMAX_BOB = "CAPMAX_BOB"
    SECRECY_MAX = "SECRECY_MAX"

    def __str__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class SelectionResult:
    indices: tuple
    objective: float
    postprocessor: SubspaceBasis
    scheme: SchemeTag


def enumerate_subsets(s: int, k: int) -> list[tuple[int, ...]]:
    """All sorted k-subsets of range(s) in lexicographic order."""
    if k > s:
        raise KTooLarge(f"k={k} exceeds s={s}")
    return list(itertools.combinations(range(s), k))


def subset_blocks(s: int, k: int, block: int = BLOCK):
    """Lexicographic k-subsets of range(s) as int arrays of at most ``block`` rows."""
    if k > s:
        raise KTooLarge(f"k={k} exceeds s={s}")
    it = itertools.combinations(range(s), k)
    while True:
        flat = np.fromiter(itertools.chain.from_iterable(itertools.islice(it, block)),
                           dtype=np.intp)
        if flat.size == 0:
            return
        yield flat.reshape(-1, k)


def check_feasible(s: int, k: int, cap: int = DEFAULT_EXHAUSTIVE_CAP):
    n = math.comb(s, k)
    if n > cap:
        raise PoolTooLarge(
            f"C({s},{k}) = {n} subsets exceeds the exhaustive-search cap {cap}; use greedy mode")


def build_postprocessor(b, nt: int) -> SubspaceBasis:
    """Orthonormal eigenbasis of the ``nt`` smallest eigenvalues of Hermitian ``b``."""
    b = np.asarray(b, dtype=complex)
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {b.shape}")
    if np.abs(b - b.conj().T).max() > 1e-9:
        raise NotHermitian("matrix is not Hermitian within 1e-9")
    _, v = np.linalg.eigh(b)
    return SubspaceBasis(v[:, :nt])


# --- batched scores -------------------------------------------------------

def _herm(a):
    return a.conj().swapaxes(-1, -2)


def _log2det_pd(m):
    sign, logdet = np.linalg.slogdet(m)
    return logdet / LN2


def _dof_loss_product(grams: np.ndarray, nt: int, coef: float) -> Callable:
    """prod over the nt smallest eigenvalues of (1 + coef * lambda)."""
    def score(combos):
        total = grams[combos].sum(axis=1)
        lam = np.linalg.eigvalsh(total)[:, :nt]
        return np.prod(1.0 + coef * np.clip(lam, 0.0, None), axis=1)
    return score


def _bob_capacity_scores(real: ChannelRealization, config: SystemConfig, power: float) -> Callable:
    # C+ - C- form: log2|I + P/nt H0H0^H + P/nj A| - log2|I + P/nj A|
    eye = np.eye(config.nr)
    sig = (power / config.nt) * (real.h0 @ real.h0.conj().T)
    grams = real.bob_grams()

    def score(combos):
        jam = eye + (power / config.nj) * grams[combos].sum(axis=1)
        return _log2det_pd(jam + sig) - _log2det_pd(jam)
    return score


def _secrecy_scores(real: ChannelRealization, config: SystemConfig, power: float) -> Callable:
    nt, nj = config.nt, config.nj
    bob_sig = (power / nt) * (real.h0 @ real.h0.conj().T)
    eve_sig = (power / nt) * (real.g0 @ real.g0.conj().T)
    eye_t, eye_e = np.eye(nt), np.eye(config.ne)
    hg, gg = real.bob_grams(), real.eve_grams()

    def score(combos):
        a = hg[combos].sum(axis=1)
        _, vecs = np.linalg.eigh(a)
        v = vecs[:, :, :nt]
        vh = _herm(v)
        jam = (power / nj) * (vh @ a @ v)
        r_bob = _log2det_pd(eye_t + vh @ bob_sig @ v + jam) - _log2det_pd(eye_t + jam)
        e = eye_e + (power / nj) * gg[combos].sum(axis=1)
        c_eve = _log2det_pd(e + eve_sig) - _log2det_pd(e)
        return np.maximum(r_bob - c_eve, 0.0)
    return score


def _scan(score: Callable, s: int, k: int, maximize: bool, block: int = BLOCK):
    best_val, best = None, None
    for combos in subset_blocks(s, k, block):
        vals = score(combos)
        i = int(np.argmax(vals) if maximize else np.argmin(vals))
        v = float(vals[i])
        if best is None or (v > best_val if maximize else v < best_val):
            best_val, best = v, tuple(int(x) for x in combos[i])
    return best, best_val


def _greedy(score: Callable, s: int, k: int, maximize: bool, block: int = BLOCK):
    """Approximate search: best pair exhaustively, then grow one jammer at a time."""
    chosen, val = _scan(score, s, 2, maximize, block)
    while len(chosen) < k:
        rest = [j for j in range(s) if j not in chosen]
        cands = np.array(sorted(tuple(sorted(chosen + (j,))) for j in rest), dtype=np.intp)
        vals = score(cands)
        i = int(np.argmax(vals) if maximize else np.argmin(vals))
        chosen, val = tuple(int(x) for x in cands[i]), float(vals[i])
    return chosen, val


def _search(score, s, k, maximize, greedy, cap):
    if greedy and k > 2:
        return _greedy(score, s, k, maximize)
    if not greedy:
        check_feasible(s, k, cap)
    return _scan(score, s, k, maximize)


def _sum_over(grams: np.ndarray, idx) -> np.ndarray:
    return grams[list(idx)].sum(axis=0)


def _ojs1_postprocessor(real: ChannelRealization, idx, nt: int) -> SubspaceBasis:
    return build_postprocessor(_sum_over(real.bob_grams(), idx), nt)


def generator_projectors(h_jam: np.ndarray) -> np.ndarray:
    """Projectors onto each jammer's column space, shape (s, nr, nr)."""
    u, _, _ = np.linalg.svd(h_jam, full_matrices=False)
    return u @ _herm(u)


def select_ojs1(realization: ChannelRealization, config: SystemConfig, power: float, *,
                greedy: bool = False, cap: int = DEFAULT_EXHAUSTIVE_CAP) -> SelectionResult:
    """Minimum DoF-loss selection on the raw jamming Gram matrices."""
    score = _dof_loss_product(realization.bob_grams(), config.nt, power / config.nj)
    idx, obj = _search(score, realization.pool_size, config.k, False, greedy, cap)
    return SelectionResult(idx, obj, _ojs1_postprocessor(realization, idx, config.nt), SchemeTag.OJS1)


def select_ojs2(realization: ChannelRealization, config: SystemConfig, power: float, *,
                greedy: bool = False, cap: int = DEFAULT_EXHAUSTIVE_CAP) -> SelectionResult:
    """Subspace-based selection: projectors replace Gram matrices, coefficient P."""
    proj = generator_projectors(realization.h_jam)
    score = _dof_loss_product(proj, config.nt, power)
    idx, obj = _search(score, realization.pool_size, config.k, False, greedy, cap)
    v = build_postprocessor(_sum_over(proj, idx), config.nt)
    return SelectionResult(idx, obj, v, SchemeTag.OJS2)


def select_random(realization: ChannelRealization, config: SystemConfig,
                  rng: SeededRng | np.random.Generator) -> SelectionResult:
    """Uniform K-subset; Bob still uses the eigen-postprocessor of that subset."""
    if isinstance(rng, SeededRng):
        rng = rng.generator(SELECTION_STREAM)
    idx = tuple(sorted(int(i) for i in rng.choice(realization.pool_size, config.k, replace=False)))
    return SelectionResult(idx, math.nan, _ojs1_postprocessor(realization, idx, config.nt),
                           SchemeTag.RANDOM)


def select_capacity_max(realization: ChannelRealization, config: SystemConfig, power: float, *,
                        greedy: bool = False, cap: int = DEFAULT_EXHAUSTIVE_CAP) -> SelectionResult:
    """Subset maximising Bob's full MIMO capacity."""
    score = _bob_capacity_scores(realization, config, power)
    idx, obj = _search(score, realization.pool_size, config.k, True, greedy, cap)
    return SelectionResult(idx, obj, _ojs1_postprocessor(realization, idx, config.nt),
                           SchemeTag.CAPMAX_BOB)


def select_secrecy_max(realization: ChannelRealization, config: SystemConfig, power: float, *,
                       greedy: bool = False, cap: int = DEFAULT_EXHAUSTIVE_CAP) -> SelectionResult:
    """Genie baseline: maximise [R_Bob - C_Eve]^+ knowing every channel."""
    score = _secrecy_scores(realization, config, power)
    idx, obj = _search(score, realization.pool_size, config.k, True, greedy, cap)
    return SelectionResult(idx, obj, _ojs1_postprocessor(realization, idx, config.nt),
                           SchemeTag.SECRECY_MAX)


def select(scheme, realization: ChannelRealization, config: SystemConfig, power: float, *,
           rng: SeededRng | np.random.Generator | None = None, greedy: bool = False,
           cap: int = DEFAULT_EXHAUSTIVE_CAP) -> SelectionResult:
    scheme = SchemeTag(scheme)
    if scheme is SchemeTag.RANDOM:
        if rng is None:
            raise ValueError("RANDOM selection needs an rng")
        return select_random(realization, config, rng)
    fn = {
        SchemeTag.OJS1: select_ojs1,
        SchemeTag.OJS2: select_ojs2,
        SchemeTag.CAPMAX_BOB: select_capacity_max,
        SchemeTag.SECRECY_MAX: select_secrecy_max,
    }[scheme]
    return fn(realization, config, power, greedy=greedy, cap=cap)
