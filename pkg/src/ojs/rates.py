"""Achievable rates, capacities and DoF estimates, all in bits.

Capacities with jamming are evaluated through the Sylvester form
``log2 det(I + c X^H B^{-1} X)`` with ``B = I + jamming Gram``, which keeps the
determinant argument Hermitian positive definite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channel import ChannelRealization, SystemConfig
from .errors import DegenerateWindow, NonpositiveDelta, SingularJammingGram
from .grassmann import SubspaceBasis
from .selection import SelectionResult

SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class RateReport:
    c_bob: float
    r_bob: float
    r_bob_loss: float
    c_eve: float
    secrecy: float


@dataclass(frozen=True)
class DofEstimate:
    slope: float
    window: tuple


def log2det(m) -> float:
    """log2 det of a Hermitian positive definite matrix via Cholesky."""
    m = np.asarray(m)
    m = 0.5 * (m + m.conj().T)
    chol = np.linalg.cholesky(m)
    return float(2.0 * np.sum(np.log(np.abs(np.diagonal(chol))))) / math.log(2.0)


def _gram_sum(channels) -> np.ndarray:
    ch = np.asarray(channels)
    if ch.ndim == 2:
        ch = ch[None]
    return np.einsum("kij,klj->il", ch, ch.conj())


def _as_matrix(v) -> np.ndarray:
    return v.basis if isinstance(v, SubspaceBasis) else np.asarray(v)


def _capacity(x0, jam, power, nt, nj, jam_power=None) -> float:
    if power == 0:
        return 0.0
    jp = power if jam_power is None else jam_power
    x0 = np.asarray(x0)
    b = np.eye(x0.shape[0]) + (jp / nj) * _gram_sum(jam)
    inner = x0.conj().T @ np.linalg.solve(b, x0)
    return max(log2det(np.eye(x0.shape[1]) + (power / nt) * inner), 0.0)


def bob_capacity(h0, jam_channels, power: float, config: SystemConfig,
                 jam_power: float | None = None) -> float:
    """log2|I + P/nt H0 H0^H (I + P/nj sum_k H_k H_k^H)^{-1}|.

    ``jam_power`` overrides the jammers' power (0 gives the jamming-free MIMO capacity).
    """
    return _capacity(h0, jam_channels, power, config.nt, config.nj, jam_power)


def bob_rate(h0, jam_channels, v, power: float, config: SystemConfig) -> float:
    """Rate after Bob projects onto the columns of the postprocessor ``v``."""
    if power == 0:
        return 0.0
    v = _as_matrix(v)
    vh = v.conj().T
    jam = (power / config.nj) * (vh @ _gram_sum(jam_channels) @ v)
    sig = (power / config.nt) * (vh @ np.asarray(h0) @ np.asarray(h0).conj().T @ v)
    eye = np.eye(v.shape[1])
    return max(log2det(eye + sig + jam) - log2det(eye + jam), 0.0)


def bob_jamming_loss(jam_channels, v, power: float, config: SystemConfig) -> float:
    """log2|I + P/nj sum_k V^H H_k H_k^H V|, the rate lost to residual jamming."""
    if power == 0:
        return 0.0
    v = _as_matrix(v)
    jam = (power / config.nj) * (v.conj().T @ _gram_sum(jam_channels) @ v)
    return max(log2det(np.eye(v.shape[1]) + jam), 0.0)


def eve_capacity(g0, jam_channels, power: float, config: SystemConfig) -> float:
    return _capacity(g0, jam_channels, power, config.nt, config.nj)


def eve_saturated_rate(g0, jam_channels, config: SystemConfig) -> float:
    """High-power limit of Eve's capacity when the jamming Gram is invertible."""
    g0 = np.asarray(g0)
    gram = _gram_sum(jam_channels)
    lam = np.linalg.eigvalsh(gram)
    if lam[0] <= SINGULAR_TOL * max(lam[-1], 1.0):
        raise SingularJammingGram(
            f"jamming Gram at Eve is singular (smallest eigenvalue {lam[0]:.3e})")
    inner = g0.conj().T @ np.linalg.solve(gram, g0)
    return max(log2det(np.eye(g0.shape[1]) + (config.nj / config.nt) * inner), 0.0)


def secrecy_rate(r_bob: float, c_eve: float) -> float:
    return max(r_bob - c_eve, 0.0)


def rate_report(realization: ChannelRealization, selection: SelectionResult,
                config: SystemConfig, power: float) -> RateReport:
    idx = list(selection.indices)
    hj, gj = realization.h_jam[idx], realization.g_jam[idx]
    v = selection.postprocessor
    r_bob = bob_rate(realization.h0, hj, v, power, config)
    c_eve = eve_capacity(realization.g0, gj, power, config)
    return RateReport(
        c_bob=bob_capacity(realization.h0, hj, power, config),
        r_bob=r_bob,
        r_bob_loss=bob_jamming_loss(hj, v, power, config),
        c_eve=c_eve,
        secrecy=secrecy_rate(r_bob, c_eve),
    )


def sufficient_jammer_count(delta: float, power: float, config: SystemConfig,
                            kappa2: float = 1.0) -> int:
    """Pool size that keeps Bob's rate loss under ``delta`` bits.

    (K-1) * [4 kappa2^2 K P / (nt (2^(delta/nt) - 1))]^(nt nj / 2) + 1, rounded up.
    """
    if delta <= 0:
        raise NonpositiveDelta(f"delta must be > 0, got {delta}")
    if kappa2 <= 0:
        raise ValueError(f"kappa2 must be > 0, got {kappa2}")
    nt, nj, k = config.nt, config.nj, config.k
    bracket = 4.0 * kappa2**2 * k * power / (nt * math.expm1(delta / nt * math.log(2.0)))
    s = (k - 1) * bracket ** (nt * nj / 2.0) + 1.0
    nearest = round(s)
    if abs(s - nearest) <= 1e-9 * max(1.0, s):
        return int(nearest)
    return int(math.ceil(s))


def dof_slope(points: Sequence[tuple[float, float]]) -> DofEstimate:
    """Least-squares slope of rate against log2(power)."""
    pts = tuple((float(p), float(r)) for p, r in points)
    powers = {p for p, _ in pts}
    if len(pts) < 2 or len(powers) < 2:
        raise DegenerateWindow("need at least two distinct powers")
    if min(powers) <= 0:
        raise DegenerateWindow("powers must be positive")
    x = np.log2([p for p, _ in pts])
    y = np.array([r for _, r in pts])
    slope = np.polyfit(x, y, 1)[0]
    return DofEstimate(float(slope), pts)


def top_window(points: Sequence[tuple[float, float]], size: int = 4):
    """The ``size`` highest-power points."""
    return sorted(points)[-size:]
