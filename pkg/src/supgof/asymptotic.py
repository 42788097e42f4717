"""Asymptotic null distributions and extreme-value critical values."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .distfn import norm_cdf
from .errors import ConvergenceError, DomainError

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for the series-based CDFs."""

    abs_tol: float = 1e-12
    max_terms: int = 200

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError("abs_tol must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be >= 1")


_DEFAULT_CTRL = SeriesControl()


def maxwell_cdf(x: float) -> float:
    """CDF 2 Phi(x) - sqrt(2/pi) x exp(-x^2/2) - 1 of the Maxwell-Boltzmann
    law (equivalently the chi distribution with 3 degrees of freedom)."""
    if x <= 0.0:
        return 0.0
    val = 2.0 * norm_cdf(x) - math.sqrt(2.0 / math.pi) * x * math.exp(-0.5 * x * x) - 1.0
    return min(1.0, max(0.0, val))


def smirnov_limit_cdf(b: float) -> float:
    """Limit CDF 1 - exp(-2 b^2) of the sqrt(n)-scaled one-sided sup."""
    return -math.expm1(-2.0 * b * b) if b > 0.0 else 0.0


def kolmogorov_cdf(b: float, ctrl: SeriesControl = _DEFAULT_CTRL) -> float:
    """Two-sided limit CDF 1 - 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 b^2)."""
    if b <= 0.0:
        return 0.0
    total = 0.0
    sign = 1.0
    for k in range(1, ctrl.max_terms + 1):
        term = math.exp(-2.0 * k * k * b * b)
        total += sign * term
        if term < ctrl.abs_tol:
            return min(1.0, max(0.0, 1.0 - 2.0 * total))
        sign = -sign
    raise ConvergenceError(
        f"two-sided limit series not below {ctrl.abs_tol} after {ctrl.max_terms} terms at b={b}",
        terms=ctrl.max_terms, residual=term)


def vstar_limit_cdf(x: float, ctrl: SeriesControl = _DEFAULT_CTRL) -> float:
    """Limit CDF of the sqrt(n)-scaled argmax-rescaled two-sided statistic.

    The defining double series over odd reciprocals a_j = 2j+1 is only
    conditionally convergent when its two parts are truncated separately, so
    it is evaluated here in a resummed, absolutely convergent form: with
    h_j = -(1 - Phi(a_j x))/a_j and P_j = sum_{l<j} (-1)^l a_l/(a_l^2 - a_j^2),

        G(x) = 1 - 4x sum_j phi(a_j x)
                 - 16 sum_j (-1)^j a_j [ h_j P_j
                       + sum_{l>j} (-1)^l a_l h_l / (a_l^2 - a_j^2) ],

    using the closed form sum_{l != j} (-1)^l a_l/(a_l^2 - a_j^2) = -(-1)^j/(4 a_j)
    and the fact that the x-independent remainder telescopes to exactly 1.
    All surviving terms decay like Gaussian tails in a_j x.
    """
    if x < 0.0:
        return 0.0
    if x == 0.0:
        return 0.0
    # shells beyond a_j x ~ 9 are below double-precision resolution
    jmax = int(math.ceil((9.0 / x - 1.0) / 2.0)) + 4
    if jmax > ctrl.max_terms:
        raise ConvergenceError(
            f"{jmax} shells needed at x={x}, exceeding max_terms={ctrl.max_terms}",
            terms=ctrl.max_terms)
    a = 2.0 * np.arange(jmax + 1) + 1.0
    sgn = np.where(np.arange(jmax + 1) % 2 == 0, 1.0, -1.0)
    h = -(1.0 - ndtr(a * x)) / a
    dens = np.exp(-0.5 * (a * x) ** 2) / _SQRT_2PI
    total = 1.0 - 4.0 * x * float(dens.sum())

    corr = 0.0
    shell_floor = ctrl.abs_tol / max(jmax, 1)
    for j in range(jmax + 1):
        aj = a[j]
        pj = float(np.sum(sgn[:j] * a[:j] / (a[:j] ** 2 - aj * aj)))
        sj = float(np.sum(sgn[j + 1:] * a[j + 1:] * h[j + 1:] / (a[j + 1:] ** 2 - aj * aj)))
        shell = sgn[j] * aj * (h[j] * pj + sj)
        corr += shell
        if j > 2 and abs(h[j]) * aj * aj < shell_floor and abs(shell) < shell_floor:
            break
    return min(1.0, max(0.0, total - 16.0 * corr))


def gumbel_critical(alpha: float, n: int, two_sided: bool = False) -> float:
    """Extreme-value critical value (a_n, b_n normalization) for the
    weighted sup statistics on the sqrt(n) scale.

    One-sided limit exp(-exp(-t)); two-sided exp(-2 exp(-t)).
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must be in (0,1), got {alpha}")
    if n < 16:
        raise DomainError(f"need n >= 16 for the triple-log normalization, got {n}")
    a_n, b_n = gumbel_norming(n)
    if two_sided:
        q = -math.log(-math.log(1.0 - alpha) / 2.0)
    else:
        q = -math.log(-math.log(1.0 - alpha))
    return (q + b_n) / a_n


def gumbel_norming(n: int) -> tuple[float, float]:
    """Norming constants a_n = sqrt(2 log log n),
    b_n = 2 log log n + log log log n / 2 - log(pi)/2 (natural logs)."""
    if n < 16:
        raise DomainError(f"need n >= 16, got {n}")
    ll = math.log(math.log(n))
    a_n = math.sqrt(2.0 * ll)
    b_n = 2.0 * ll + 0.5 * math.log(ll) - 0.5 * math.log(math.pi)
    return a_n, b_n


def gumbel_limit_cdf(t: float, n: int, two_sided: bool = False) -> float:
    """Approximate null CDF of the sqrt(n)-scaled weighted sup statistic
    implied by the extreme-value limit; used for its p-values."""
    a_n, b_n = gumbel_norming(n)
    x = a_n * t - b_n
    factor = 2.0 if two_sided else 1.0
    return math.exp(-factor * math.exp(-x))


def ms_limit(a: float, b: float, c: float, one_sided: bool = False,
             ctrl: SeriesControl = _DEFAULT_CTRL) -> float:
    """Asymptotic joint probability (1 - 1/a) G(b) (1 - 1/c) of the ratio
    statistics and the sup statistic; the three are asymptotically
    independent. One-sided replaces G by 1 - exp(-2 b^2)."""
    if a < 1.0 or c < 1.0 or b < 0.0:
        raise DomainError(f"need a, c >= 1 and b >= 0, got {(a, b, c)}")
    mid = smirnov_limit_cdf(b) if one_sided else kolmogorov_cdf(b, ctrl)
    return (1.0 - 1.0 / a) * mid * (1.0 - 1.0 / c)
