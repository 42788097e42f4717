"""Polygonal alternative family on the unit scale.

The family is specified after the probability integral transform, where the
null CDF is the identity on [0, 1]: the alternative runs linearly from (0, 0)
through (tau, delta*tau) to (1, 1). Distribution-freeness makes this lossless;
alternatives under a non-uniform null compose `alt_quantile` with the model's
quantile.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distfn import UnitSample
from .errors import DomainError


@dataclass(frozen=True)
class AlternativeSpec:
    """Kink location tau_prob (on the unit scale) and initial slope delta >= 1
    with delta * tau_prob < 1."""

    tau_prob: float
    delta: float

    def __post_init__(self):
        if not 0.0 < self.tau_prob < 1.0:
            raise DomainError(f"tau_prob must be in (0,1), got {self.tau_prob}")
        if self.delta < 1.0:
            raise DomainError(f"delta must be >= 1, got {self.delta}")
        if not self.delta * self.tau_prob < 1.0:
            raise DomainError(
                f"need delta * tau_prob < 1, got {self.delta * self.tau_prob}")


def beta_coeff(spec: AlternativeSpec) -> float:
    """Slope beta after the kink, fixed by total mass one:
    delta*tau + beta*(1 - tau) = 1."""
    return (1.0 - spec.delta * spec.tau_prob) / (1.0 - spec.tau_prob)


def alt_cdf(spec: AlternativeSpec, t: float) -> float:
    """F(t) = delta*t below the kink, beta*(t - tau) + delta*tau above."""
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"t must be in [0,1], got {t}")
    if t <= spec.tau_prob:
        return spec.delta * t
    return beta_coeff(spec) * (t - spec.tau_prob) + spec.delta * spec.tau_prob


def alt_quantile(spec: AlternativeSpec, p: float) -> float:
    """Piecewise-linear inverse of alt_cdf on [0, 1]."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must be in [0,1], got {p}")
    kink = spec.delta * spec.tau_prob
    if p <= kink:
        return p / spec.delta
    return spec.tau_prob + (p - kink) / beta_coeff(spec)


def alt_quantile_vec(spec: AlternativeSpec, p: np.ndarray) -> np.ndarray:
    kink = spec.delta * spec.tau_prob
    return np.where(p <= kink,
                    p / spec.delta,
                    spec.tau_prob + (p - kink) / beta_coeff(spec))


def analytic_summaries(spec: AlternativeSpec) -> tuple[float, float]:
    """(M, S): the maximum of F - F0 and the supremum of the weighted
    difference (F - F0)/sqrt(F0 (1 - F0)); S/M = 1/sqrt(tau (1 - tau))."""
    tp = spec.tau_prob
    gap = spec.delta - beta_coeff(spec)
    m = gap * tp * (1.0 - tp)
    s = gap * math.sqrt(tp * (1.0 - tp))
    return m, s


def sample_alt(spec: AlternativeSpec, n: int, seed: int) -> UnitSample:
    """n i.i.d. draws from the alternative via its quantile, sorted.

    Uses a counter-based generator keyed by the seed, so fixed (spec, n, seed)
    always reproduces the same sample.
    """
    if n < 1:
        raise DomainError(f"sample size must be >= 1, got {n}")
    rng = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
    u = rng.random(n)
    return UnitSample(np.sort(alt_quantile_vec(spec, u)))
