"""Eve's power-independent saturated rate and secrecy outage.

Without Eve's CSI, Alice codes against a constant Eve rate ``r``. The secrecy
outage probability is the chance that the saturated rate R reaches ``r``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import OUTAGE_STREAM, SeededRng, SystemConfig, complex_gaussian
from .errors import EmptySamples
from .rates import eve_saturated_rate


@dataclass(frozen=True, eq=False)
class OutageSamples:
    values: np.ndarray
    config: SystemConfig
    trials: int

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def sorted(self) -> np.ndarray:
        return np.sort(self.values)


def draw_saturated_rate(config: SystemConfig, rng: np.random.Generator) -> float:
    g0 = complex_gaussian(rng, (config.ne, config.nt))
    gk = complex_gaussian(rng, (config.k, config.ne, config.nj))
    return eve_saturated_rate(g0, gk, config)


def sample_eve_rate_distribution(config: SystemConfig, trials: int, rng: SeededRng) -> OutageSamples:
    """``trials`` i.i.d. draws of R with K jammers that are random from Eve's side.

    Draw ``t`` uses its own stream, so the sample set does not depend on how
    the trials are scheduled.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    values = [draw_saturated_rate(config, rng.generator(OUTAGE_STREAM, t)) for t in range(trials)]
    return OutageSamples(np.array(values), config, trials)


def outage_probability(samples: OutageSamples, r: float) -> float:
    """Empirical Pr{R >= r}."""
    v = samples.values
    if v.size == 0:
        raise EmptySamples("no samples")
    return float(np.count_nonzero(v >= r)) / v.size


def rate_for_outage(samples: OutageSamples, epsilon: float) -> float:
    """Smallest sample value r with empirical Pr{R >= r} <= epsilon.

    When no sample qualifies (epsilon below 1/n) the next float above the
    largest sample is returned, which has empirical outage 0.
    """
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")
    v = samples.sorted()
    n = v.size
    if n == 0:
        raise EmptySamples("no samples")
    allowed = math.floor(epsilon * n + 1e-9)
    if allowed == 0:
        return float(np.nextafter(v[-1], np.inf))
    r = v[n - allowed]
    # ties below position n - allowed push the count over budget
    if n - np.searchsorted(v, r, side="left") > allowed:
        j = np.searchsorted(v, r, side="right")
        return float(v[j]) if j < n else float(np.nextafter(v[-1], np.inf))
    return float(r)


def outage_curve(samples: OutageSamples, r_grid) -> list[tuple[float, float]]:
    return [(float(r), outage_probability(samples, r)) for r in r_grid]
