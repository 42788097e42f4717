"""Test statistics evaluated from a unit sample.

All suprema over the real line reduce to maxima over the n order statistics
once the data are probability-integral transformed; argmax ties are broken
to the smallest index throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .distfn import UnitSample
from .errors import DegenerateSampleError, DomainError


class StatKind(str, Enum):
    SMIRNOV = "smirnov"                  # one-sided sup of F_n - F0
    KS = "ks"                            # two-sided sup of |F_n - F0|
    SMIRNOV_ARGMAX = "smirnov_argmax"    # one-sided sup rescaled at its argmax
    KS_ARGMAX = "ks_argmax"              # two-sided sup rescaled at its argmax
    CDF_RATIO = "cdf_ratio"              # sup F_n / F0
    SURVIVAL_RATIO = "survival_ratio"    # sup (1 - F_n) / (1 - F0)
    MS_ONESIDED = "ms_onesided"          # max{w*ratio, sqrt(n)*smirnov, w*survival}
    MS_TWOSIDED = "ms_twosided"          # max{w*ratio, sqrt(n)*ks, w*survival}
    WEIGHTED_SMIRNOV = "weighted_smirnov"  # sup (F_n - F0)/sqrt(F0(1-F0))
    WEIGHTED_KS = "weighted_ks"            # sup |F_n - F0|/sqrt(F0(1-F0))


_ARGMAX_KINDS = frozenset({StatKind.SMIRNOV_ARGMAX, StatKind.KS_ARGMAX})


@dataclass(frozen=True)
class StatisticValue:
    """A named statistic value with its argmax location where applicable."""

    kind: StatKind
    n: int
    value: float
    argmax_index: int | None = None   # 1-based order-statistic index
    argmax_u: float | None = None     # unit-scale location of the maximum
    weight: float | None = None       # only for the combined MS statistics

    def __post_init__(self):
        if (self.argmax_index is not None) != (self.kind in _ARGMAX_KINDS):
            raise ValueError("argmax_index is carried exactly by the argmax-rescaled kinds")


def _onesided_terms(s: UnitSample) -> np.ndarray:
    i = np.arange(1, s.n + 1)
    return i / s.n - s.values


def _twosided_terms(s: UnitSample) -> np.ndarray:
    i = np.arange(1, s.n + 1)
    return np.maximum(i / s.n - s.values, s.values - (i - 1) / s.n)


def smirnov_stat(s: UnitSample) -> StatisticValue:
    """Max of i/n - u_i; the i = n term makes it nonnegative."""
    return StatisticValue(StatKind.SMIRNOV, s.n, float(_onesided_terms(s).max()))


def ks_stat(s: UnitSample) -> StatisticValue:
    return StatisticValue(StatKind.KS, s.n, float(_twosided_terms(s).max()))


def argmax_one_sided(s: UnitSample) -> int:
    """Smallest 1-based index attaining max(i/n - u_i)."""
    return int(np.argmax(_onesided_terms(s))) + 1


def argmax_two_sided(s: UnitSample) -> int:
    return int(np.argmax(_twosided_terms(s))) + 1


def _rescale_at(u_at: float, numer: float) -> float:
    if not 0.0 < u_at < 1.0:
        raise DegenerateSampleError(
            f"maximizing order statistic is {u_at}; rescaled statistic undefined")
    return numer / math.sqrt(u_at * (1.0 - u_at))


def wstar_stat(s: UnitSample) -> StatisticValue:
    """One-sided supremum divided by sqrt(u_R (1 - u_R)) at its argmax R."""
    d = _onesided_terms(s)
    r = int(np.argmax(d))
    u_r = float(s.values[r])
    return StatisticValue(StatKind.SMIRNOV_ARGMAX, s.n,
                          _rescale_at(u_r, float(d[r])),
                          argmax_index=r + 1, argmax_u=u_r)


def vstar_stat(s: UnitSample) -> StatisticValue:
    d = _twosided_terms(s)
    r = int(np.argmax(d))
    u_r = float(s.values[r])
    return StatisticValue(StatKind.KS_ARGMAX, s.n,
                          _rescale_at(u_r, float(d[r])),
                          argmax_index=r + 1, argmax_u=u_r)


def ln_stat(s: UnitSample) -> StatisticValue:
    """Max of (i/n)/u_i; +inf when u_1 = 0 (rejects at every level)."""
    i = np.arange(1, s.n + 1)
    with np.errstate(divide="ignore"):
        val = float(np.max(i / (s.n * s.values)))
    return StatisticValue(StatKind.CDF_RATIO, s.n, val)


def un_stat(s: UnitSample) -> StatisticValue:
    """Max of (n-i)/(n(1-u_i)); the i = n term contributes 0 by its numerator."""
    i = np.arange(1, s.n)
    if i.size == 0:
        return StatisticValue(StatKind.SURVIVAL_RATIO, s.n, 0.0)
    with np.errstate(divide="ignore"):
        val = float(np.max((s.n - i) / (s.n * (1.0 - s.values[:-1]))))
    return StatisticValue(StatKind.SURVIVAL_RATIO, s.n, max(val, 0.0))


def _combined(kind: StatKind, s: UnitSample, w: float, middle: float) -> StatisticValue:
    if not w > 0:
        raise DomainError(f"weight must be positive, got {w}")
    val = max(w * ln_stat(s).value, math.sqrt(s.n) * middle, w * un_stat(s).value)
    return StatisticValue(kind, s.n, val, weight=w)


def tnplus_stat(s: UnitSample, w: float) -> StatisticValue:
    """One-sided combined statistic max{w L_n, sqrt(n) M_n, w U_n}."""
    return _combined(StatKind.MS_ONESIDED, s, w, smirnov_stat(s).value)


def tn_stat(s: UnitSample, w: float) -> StatisticValue:
    """Two-sided combined statistic max{w L_n, sqrt(n) K_n, w U_n}."""
    return _combined(StatKind.MS_TWOSIDED, s, w, ks_stat(s).value)
