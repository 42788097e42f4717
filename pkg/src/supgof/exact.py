"""Exact finite-sample null distributions.

Includes the one-sided sup CDF (Birnbaum-Tingey sum), the joint law of the
one-sided maximum and its argmax index together with the CDF of the
argmax-rescaled statistic built from it, rectangle probabilities for uniform
order statistics via an upper-Hessenberg determinant, and the ratio-statistic
law 1 - 1/x.

Numerics: the sup-CDF and argmax-law sums have nonnegative terms only, so
they are assembled in log space via log-gamma and compensated with math.fsum
or numpy pairwise summation; the test suite certifies n <= 500 and the code
runs without overflow to n ~ 1000. The rectangle-probability determinant is
different: its last-column expansion cancels terms that grow combinatorially
(double precision collapses around n ~ 45), while the probability itself is
perfectly conditioned in the bounds. It is therefore evaluated in exact
integer arithmetic on bounds quantized at 2^-64, which is deterministic and
costs no accuracy at any n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, InputError

try:
    from gmpy2 import mpz as _mpz
except ImportError:  # big-int arithmetic still exact, just slower
    _mpz = int

__all__ = [
    "smirnov_cdf", "threshold_s", "qnk", "wstar_cdf", "RectangleBounds",
    "steck_rectangle", "hessenberg_det", "tnplus_cdf", "daniels_ln_cdf",
]


@lru_cache(maxsize=16)
def _lgam(n: int) -> np.ndarray:
    """Table t with t[m] = log Gamma(m) for m = 0..n+1 (t[0] unused)."""
    return gammaln(np.arange(n + 2, dtype=float))


def _log_binom(t: np.ndarray, n, k):
    return t[n + 1] - t[k + 1] - t[n - k + 1]


def smirnov_cdf(n: int, x: float) -> float:
    """Exact CDF of the one-sided sup statistic at sample size n.

    P(M_n <= x) = 1 - sum_{i=0}^{floor(n(1-x))} x C(n,i) (x+i/n)^{i-1} (1-x-i/n)^{n-i}
    for 0 < x < 1; 0 below, 1 above.
    """
    if n < 1:
        raise DomainError(f"sample size must be >= 1, got {n}")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    t = _lgam(n)
    imax = int(math.floor(n * (1.0 - x)))  # <= n-1 since x > 0
    i = np.arange(imax + 1)
    lo = np.log(x) + _log_binom(t, n, i)
    base_lo = x + i / n
    base_hi = np.maximum(1.0 - x - i / n, 0.0)  # roundoff guard at i = imax
    with np.errstate(divide="ignore"):
        lo += (i - 1) * np.log(base_lo) + (n - i) * np.log(base_hi)
    sf = math.fsum(np.exp(lo))
    return min(1.0, max(0.0, 1.0 - sf))


def threshold_s(c: float, x: float) -> float:
    """Root s in (0, c) of (c - s)/sqrt(s(1-s)) = x.

    Evaluated in the rationalized form 2c^2 / (2c + x^2 + x sqrt(x^2 + 4c(1-c)))
    which is free of subtractive cancellation.
    """
    if not 0.0 < c <= 1.0:
        raise DomainError(f"c must be in (0, 1], got {c}")
    if not x > 0.0:
        raise DomainError(f"x must be positive, got {x}")
    return 2.0 * c * c / (2.0 * c + x * x + x * math.sqrt(x * x + 4.0 * c * (1.0 - c)))


def _qnk_core(n: int, z: float, k: int, t: np.ndarray) -> float:
    """P(U_{R:n} <= z, R = k) for the smallest one-sided argmax index R."""
    if z <= 0.0:
        return 0.0
    zc = min(z, k / n)
    first = math.exp(_log_binom(t, n - 1, k - 1)
                     + k * math.log(zc) + (n - k) * math.log1p(-zc))
    m = min(n * z, k)
    imax = min(k, int(math.floor(n * z)))
    if imax <= 0:
        return min(1.0, max(0.0, first))

    i = np.arange(imax)
    i = i[m - i - 1.0 > 0.0]  # zero-base terms vanish (their exponent j-i >= 1)
    if i.size == 0:
        return min(1.0, max(0.0, first))
    j = np.arange(k, n + 1)

    log_nm = math.log(n - m)  # m <= nz < n, so n - m > 0
    a_j = _log_binom(t, n, j) + t[j + 1] - n * math.log(n)
    inner = j < n  # at j = n the factor (n-m)^{n-j-1} (j-m) equals 1 exactly
    with np.errstate(divide="ignore"):
        a_j[inner] += (n - j[inner] - 1) * log_nm + np.log(j[inner] - m)
        lnm_i = np.log(m - i - 1.0)
    b_i = -t[i + 1] + (i - 1) * np.log(i + 1.0) - i * lnm_i

    lo = (a_j[:, None] + b_i[None, :]
          + j[:, None] * lnm_i[None, :]
          - t[j[:, None] - i[None, :] + 1])
    with np.errstate(under="ignore"):
        second = float(np.exp(lo).sum())
    return min(1.0, max(0.0, first - second))


def qnk(n: int, z: float, k: int) -> float:
    """Joint probability that the one-sided maximum occurs at index k with
    maximizing order statistic at most z; nondecreasing in z on [0, 1)."""
    if n < 1:
        raise DomainError(f"sample size must be >= 1, got {n}")
    if not 1 <= k <= n:
        raise DomainError(f"k must be in 1..{n}, got {k}")
    if not 0.0 <= z < 1.0:
        raise DomainError(f"z must lie in [0, 1), got {z}")
    return _qnk_core(n, z, int(k), _lgam(n))


@lru_cache(maxsize=None)
def wstar_cdf(n: int, x: float) -> float:
    """Exact CDF of the argmax-rescaled one-sided sup statistic (unit scale).

    1 - sum_k P(U_{R:n} <= s(k/n, x), R = k); zero for x <= 0. Memoized per
    (n, x) because quantile searches revisit nearby arguments. O(n^3) per call.
    """
    if n < 1:
        raise DomainError(f"sample size must be >= 1, got {n}")
    if x <= 0.0:
        return 0.0
    t = _lgam(n)
    total = math.fsum(_qnk_core(n, threshold_s(k / n, x), k, t)
                      for k in range(1, n + 1))
    return min(1.0, max(0.0, 1.0 - total))


@dataclass(frozen=True)
class RectangleBounds:
    """Per-index bounds a_i <= U_{i:n} <= b_i for uniform order statistics."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.a, dtype=float))
        b = np.atleast_1d(np.asarray(self.b, dtype=float))
        if a.ndim != 1 or a.shape != b.shape or a.size == 0:
            raise InputError("bounds must be equal-length nonempty vectors")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return self.a.size


def hessenberg_det(m) -> float:
    """Determinant of an upper Hessenberg matrix by last-column expansion:

    det(H_c) = m[c,c] det(H_{c-1})
               + sum_{r<c} (-1)^{c-r} m[r,c] det(H_{r-1}) prod_{j=r}^{c-1} m[j+1,j]

    over leading principal minors H_r, with det(H_0) = 1.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError("matrix must be square")
    n = m.shape[0]
    if n > 2 and np.any(np.tril(m, -2) != 0.0):
        raise InputError("matrix is not upper Hessenberg")
    dets = np.empty(n + 1)
    dets[0] = 1.0
    sub = np.diagonal(m, -1)
    for c in range(1, n + 1):
        val = m[c - 1, c - 1] * dets[c - 1]
        if c >= 2:
            # sp[t] = prod of subdiagonal entries m[j+1, j] for j = t+1 .. c-1
            sp = np.cumprod(sub[c - 2 :: -1])[::-1]
            signs = np.where((c - 1 - np.arange(c - 1)) % 2 == 0, 1.0, -1.0)
            val += np.sum(signs * m[: c - 1, c - 1] * dets[: c - 1] * sp)
        dets[c] = val
    return float(dets[n])


_QUANT_BITS = 64  # bound quantization for the exact integer determinant


def _steck_det_exact(a: np.ndarray, b: np.ndarray) -> float:
    """det(H_n) for the Steck matrix H_ij = C(j, j-i+1) (b_i - a_j)_+^{j-i+1},
    by the last-column Hessenberg recursion in exact integer arithmetic.

    With bounds quantized to d_ij = round((b_i - a_j)_+ 2^64), the scaled
    leading minors N_c = 2^{64 c} det(H_c) are integers satisfying

        N_c = c d_cc N_{c-1} + sum_{r<c} (-1)^{c-r} C(c, c-r+1) d_rc^{c-r+1} N_{r-1},

    because the subdiagonal entries of H are all 1. Terms whose relative size
    is provably below 1e-30 are skipped (their total is < n^2 1e-30).
    """
    n = a.size
    t = _lgam(n)
    scale = math.ldexp(1.0, _QUANT_BITS)
    log_cut = -30.0 * math.log(10.0)

    minors = [_mpz(1)]
    r_all = np.arange(1, n + 1)
    for c in range(1, n + 1):
        col = np.maximum(b[:c] - a[c - 1], 0.0)  # (b_r - a_c)_+ for r = 1..c
        r = r_all[:c]
        e = c - r + 1
        # relative term bound: C(c, e) diff^e, since every minor is in [0, 1]
        with np.errstate(divide="ignore"):
            logmag = (t[c + 1] - t[c - r + 2] - t[r]) + e * np.log(col)
        total = _mpz(0)
        for ridx in np.nonzero(logmag >= log_cut)[0]:
            ee = int(c - ridx)  # e = c - r + 1 with r = ridx + 1
            d = _mpz(int(col[ridx] * scale))
            term = math.comb(c, ee) * d**ee * minors[ridx]
            total += term if ee % 2 == 1 else -term
        minors.append(total)
    return float(minors[n] / (_mpz(1) << (_QUANT_BITS * n)))


def steck_rectangle(bounds: RectangleBounds) -> float:
    """P(a_i <= U_{i:n} <= b_i for all i) as an upper-Hessenberg determinant
    with entries C(j, j-i+1) (b_i - a_j)_+^{j-i+1}.

    Bounds are clipped to [0, 1] and must be nondecreasing; the subdiagonal
    zero-exponent entries are 1 regardless of the sign of b_i - a_j.
    """
    a = np.clip(bounds.a, 0.0, 1.0)
    b = np.clip(bounds.b, 0.0, 1.0)
    if np.any(np.diff(a) < 0.0) or np.any(np.diff(b) < 0.0):
        raise InputError("clipped bounds must be nondecreasing")
    if np.any(a > b):
        return 0.0
    return min(1.0, max(0.0, _steck_det_exact(a, b)))


def tnplus_cdf(n: int, y: float, w: float) -> float:
    """Exact CDF of the one-sided combined statistic with weight w,
    as a rectangle probability with a_i = max{(w/y) i/n, i/n - y/sqrt(n)}
    and b_i = 1 - (w/y)(1 - i/n)."""
    if n < 1:
        raise DomainError(f"sample size must be >= 1, got {n}")
    if not y > 0.0 or not w > 0.0:
        raise DomainError(f"y and w must be positive, got y={y}, w={w}")
    i = np.arange(1, n + 1) / n
    a = np.maximum((w / y) * i, i - y / math.sqrt(n))
    b = 1.0 - (w / y) * (1.0 - i)
    return steck_rectangle(RectangleBounds(a, b))


def daniels_ln_cdf(x: float) -> float:
    """CDF 1 - 1/x (x >= 1) of the sup of F_n/F0; the same for every n."""
    return 1.0 - 1.0 / x if x >= 1.0 else 0.0
