"""System configuration and quasi-static Rayleigh channel draws.

All channel entries are i.i.d. CN(0, 1). Receiver noise is CN(0, I), so the
transmit power ``P`` is also the SNR.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AntennaRegimeViolation, DefensibleDimensionViolation

# sub-stream tags under one (seed, stream) pair
ALICE_STREAM = 0
JAMMER_STREAM = 1
SELECTION_STREAM = 2
OUTAGE_STREAM = 3


@dataclass(frozen=True)
class SystemConfig:
    """Antenna counts and jammer pool of one wiretap setup.

    nt, nj, nr, ne are the antenna counts at Alice, each jammer, Bob and Eve.
    Bob picks ``k`` jammers out of a pool of ``s``.
    """

    nt: int
    nj: int
    nr: int
    ne: int
    k: int
    s: int
    allow_nonstandard: bool = False

    def __post_init__(self):
        validate(self, self.allow_nonstandard)

    def with_pool(self, s: int) -> "SystemConfig":
        return SystemConfig(self.nt, self.nj, self.nr, self.ne, self.k, s, self.allow_nonstandard)

    @property
    def defensible_dimensions(self) -> int:
        return self.k * self.nj


def validate(config: SystemConfig, allow_nonstandard: bool = False) -> SystemConfig:
    """Check the antenna regime ``nt + nj <= nr < nt + k*nj`` and ``k*nj >= ne``.

    With ``allow_nonstandard`` only positivity and ``s >= k`` are enforced.
    """
    c = config
    for name in ("nt", "nj", "nr", "ne"):
        if getattr(c, name) < 1:
            raise AntennaRegimeViolation(f"{name} must be >= 1, got {getattr(c, name)}")
    if c.k < 2:
        raise AntennaRegimeViolation(f"k must be >= 2, got {c.k}")
    if c.s < c.k:
        raise AntennaRegimeViolation(f"pool size s={c.s} is smaller than k={c.k}")
    if allow_nonstandard:
        return config
    if c.nr < c.nt + c.nj:
        raise AntennaRegimeViolation(
            f"nt + nj <= nr violated: {c.nt} + {c.nj} > {c.nr}")
    if c.nr >= c.nt + c.k * c.nj:
        raise AntennaRegimeViolation(
            f"nr < nt + k*nj violated: {c.nr} >= {c.nt} + {c.k}*{c.nj}")
    if c.k * c.nj < c.ne:
        raise DefensibleDimensionViolation(
            f"k*nj >= ne violated: {c.k}*{c.nj} < {c.ne}")
    return config


@dataclass(frozen=True)
class SeededRng:
    """Splittable random source keyed by (master seed, stream id).

    ``generator(*path)`` derives an independent ``numpy`` generator for a
    sub-stream; the same key always yields the same draws, regardless of the
    order in which streams are consumed.
    """

    seed: int
    stream: int = 0

    def generator(self, *path: int) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream, *path))
        return np.random.default_rng(ss)


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """CN(0, 1) entries: real and imaginary parts each N(0, 1/2)."""
    z = rng.standard_normal((2, *shape))
    return (z[0] + 1j * z[1]) / np.sqrt(2.0)


def _lock(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """One quasi-static draw of every channel in the system.

    h0: (nr, nt) Alice to Bob; h_jam: (s, nr, nj) jammers to Bob;
    g0: (ne, nt) Alice to Eve; g_jam: (s, ne, nj) jammers to Eve.
    """

    h0: np.ndarray
    h_jam: np.ndarray
    g0: np.ndarray
    g_jam: np.ndarray
    _grams: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        for name in ("h0", "h_jam", "g0", "g_jam"):
            object.__setattr__(self, name, _lock(np.array(getattr(self, name), dtype=complex)))
        if self.h_jam.ndim != 3 or self.g_jam.ndim != 3 or len(self.h_jam) != len(self.g_jam):
            raise ValueError("h_jam and g_jam must be stacks with one matrix per jammer")

    @property
    def pool_size(self) -> int:
        return self.h_jam.shape[0]

    def prefix(self, s: int) -> "ChannelRealization":
        """Realization restricted to jammers ``0..s-1``."""
        return ChannelRealization(self.h0, self.h_jam[:s], self.g0, self.g_jam[:s])

    def bob_grams(self) -> np.ndarray:
        """Stack of ``H_i H_i^H``, shape (s, nr, nr); cached."""
        if "bob" not in self._grams:
            h = self.h_jam
            self._grams["bob"] = _lock(h @ h.conj().transpose(0, 2, 1))
        return self._grams["bob"]

    def eve_grams(self) -> np.ndarray:
        if "eve" not in self._grams:
            g = self.g_jam
            self._grams["eve"] = _lock(g @ g.conj().transpose(0, 2, 1))
        return self._grams["eve"]


def sample_realization(config: SystemConfig, rng: SeededRng) -> ChannelRealization:
    """Draw all channels for one trial.

    Jammer channels come from their own sub-stream, jammer by jammer, so the
    realization for pool ``s`` is a prefix of the one for any larger pool.
    """
    c = config
    alice = rng.generator(ALICE_STREAM)
    h0 = complex_gaussian(alice, (c.nr, c.nt))
    g0 = complex_gaussian(alice, (c.ne, c.nt))

    jam = rng.generator(JAMMER_STREAM)
    z = jam.standard_normal((c.s, 2, c.nr + c.ne, c.nj))
    both = (z[:, 0] + 1j * z[:, 1]) / np.sqrt(2.0)
    return ChannelRealization(
        h0=h0,
        h_jam=both[:, :c.nr],
        g0=g0,
        g_jam=both[:, c.nr:],
    )


def snr_db_to_power(snr_db: float) -> float:
    return 10.0 ** (snr_db / 10.0)
