"""Critical values, p-values, and test execution.

Quantiles are found by bisection on monotone CDFs (no derivatives needed).
Exact critical values are expensive for large n, so they can be cached in a
small CSV file shared across process runs; writes take an exclusive advisory
lock and the file is append-only.
"""

from __future__ import annotations

import fcntl
import math
import os
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, NamedTuple

import numpy as np

from . import asymptotic, exact, statistics as stats
from .distfn import UnitSample
from .errors import CapabilityError, ConvergenceError, DomainError, InputError
from .statistics import StatKind

CACHE_ENV = "GOF_CACHE"
DEFAULT_CACHE_NAME = ".gof_cache.csv"


class Method(str, Enum):
    EXACT = "exact"
    ASYMPTOTIC = "asymptotic"
    MONTE_CARLO = "mc"


EXACT_KINDS = frozenset({StatKind.SMIRNOV_ARGMAX, StatKind.SMIRNOV, StatKind.MS_ONESIDED})

# statistics whose null CDF here lives on the sqrt(n) scale; the combined
# MS statistic is compared on its own scale
_SQRTN_SCALED = frozenset({
    StatKind.SMIRNOV_ARGMAX, StatKind.SMIRNOV, StatKind.KS_ARGMAX, StatKind.KS,
    StatKind.WEIGHTED_SMIRNOV, StatKind.WEIGHTED_KS,
})

_TESTABLE = _SQRTN_SCALED | {StatKind.MS_ONESIDED}


@dataclass(frozen=True)
class TestSpec:
    """What to test: statistic, sample size, level, and calibration method."""

    stat_kind: StatKind
    n: int
    alpha: float
    method: Method
    mc_reps: int = 100_000
    mc_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "stat_kind", StatKind(self.stat_kind))
        object.__setattr__(self, "method", Method(self.method))
        if self.n < 1:
            raise InputError(f"sample size must be >= 1, got {self.n}")
        if not 0.0 < self.alpha < 1.0:
            raise InputError(f"alpha must be in (0,1), got {self.alpha}")
        if self.stat_kind not in _TESTABLE:
            raise CapabilityError(f"no test is defined for statistic {self.stat_kind.value}")
        if self.method is Method.EXACT and self.stat_kind not in EXACT_KINDS:
            raise CapabilityError(
                f"no exact finite-sample distribution for {self.stat_kind.value}; "
                "use asymptotic or mc")
        if self.method is Method.ASYMPTOTIC and self.stat_kind in (
                StatKind.WEIGHTED_SMIRNOV, StatKind.WEIGHTED_KS) and self.n < 16:
            raise DomainError("extreme-value calibration needs n >= 16")
        if self.mc_reps < 1:
            raise InputError("mc_reps must be >= 1")


@dataclass(frozen=True)
class TestReport:
    spec: TestSpec
    statistic: float
    critical_value: float
    p_value: float
    reject: bool
    argmax_location: float | None = None

    def to_dict(self) -> dict:
        return {
            "stat": self.spec.stat_kind.value,
            "n": self.spec.n,
            "value": self.statistic,
            "critical_value": self.critical_value,
            "p_value": self.p_value,
            "reject": self.reject,
            "method": self.spec.method.value,
            "argmax_location": self.argmax_location,
        }


class MSWeight(NamedTuple):
    quantile: float
    w: float


def ms_weight(alpha: float, one_sided: bool = True) -> MSWeight:
    """Asymptotic quantile and tuning weight for the combined statistics.

    With g = (1-alpha)^(1/3): one-sided y = sqrt(-log(1-g)/2); two-sided the
    Kolmogorov quantile at g. In both cases w = quantile * (1 - g).
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must be in (0,1), got {alpha}")
    g = (1.0 - alpha) ** (1.0 / 3.0)
    if one_sided:
        q = math.sqrt(-0.5 * math.log(1.0 - g))
    else:
        q = invert_cdf(asymptotic.kolmogorov_cdf, g, hi0=2.0, cdf_tol=1e-12)
    return MSWeight(q, q * (1.0 - g))


def invert_cdf(cdf: Callable[[float], float], target: float, *,
               lo: float = 0.0, hi0: float = 1.0, cdf_tol: float = 1e-7,
               max_iter: int = 300) -> float:
    """Bisection solve of cdf(value) = target on a doubling-established bracket."""
    hi = hi0
    for _ in range(90):
        if cdf(hi) >= target:
            break
        lo, hi = hi, hi * 2.0
    else:
        raise ConvergenceError(f"could not bracket quantile at target {target}")
    mid = 0.5 * (lo + hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f = cdf(mid)
        if abs(f - target) < cdf_tol:
            return mid
        if f < target:
            lo = mid
        else:
            hi = mid
    raise ConvergenceError(
        f"bisection stalled at width {hi - lo:.3e} without |cdf-target| < {cdf_tol}",
        residual=abs(cdf(mid) - target))


def null_cdf(spec: TestSpec) -> Callable[[float], float]:
    """CDF of the test statistic on its comparison scale under the null."""
    kind, n, alpha = spec.stat_kind, spec.n, spec.alpha
    rootn = math.sqrt(n)
    if spec.method is Method.EXACT:
        if kind is StatKind.SMIRNOV_ARGMAX:
            return lambda t: exact.wstar_cdf(n, t / rootn)
        if kind is StatKind.SMIRNOV:
            return lambda t: exact.smirnov_cdf(n, t / rootn)
        if kind is StatKind.MS_ONESIDED:
            w = ms_weight(alpha).w
            return lambda t: exact.tnplus_cdf(n, t, w) if t > 0.0 else 0.0
        raise CapabilityError(f"no exact CDF for {kind.value}")
    if spec.method is Method.ASYMPTOTIC:
        if kind is StatKind.SMIRNOV_ARGMAX:
            return asymptotic.maxwell_cdf
        if kind is StatKind.SMIRNOV:
            return asymptotic.smirnov_limit_cdf
        if kind is StatKind.KS_ARGMAX:
            return asymptotic.vstar_limit_cdf
        if kind is StatKind.KS:
            return asymptotic.kolmogorov_cdf
        if kind is StatKind.WEIGHTED_SMIRNOV:
            return lambda t: asymptotic.gumbel_limit_cdf(t, n, two_sided=False)
        if kind is StatKind.WEIGHTED_KS:
            return lambda t: asymptotic.gumbel_limit_cdf(t, n, two_sided=True)
        if kind is StatKind.MS_ONESIDED:
            w = ms_weight(alpha).w
            return lambda t: (asymptotic.ms_limit(t / w, t, t / w, one_sided=True)
                              if t > w else 0.0)
    raise CapabilityError(f"no evaluable null CDF for method {spec.method.value}")


def exact_critical(spec: TestSpec, cache: "CriticalValueCache | None" = None,
                   cdf_tol: float = 1e-7) -> float:
    """Exact critical value: CDF(value) = 1 - alpha within cdf_tol."""
    if spec.method is not Method.EXACT:
        raise InputError("exact_critical needs a spec with method=exact")
    if cache is not None:
        hit = cache.get(spec.stat_kind, spec.n, spec.alpha, Method.EXACT)
        if hit is not None:
            return hit
    value = invert_cdf(null_cdf(spec), 1.0 - spec.alpha, hi0=1.0, cdf_tol=cdf_tol)
    if cache is not None:
        cache.put(spec.stat_kind, spec.n, spec.alpha, Method.EXACT, value, cdf_tol)
    return value


def asymptotic_critical(spec: TestSpec) -> float:
    """Quantile of the matching limit law (or the extreme-value formula)."""
    if spec.method is not Method.ASYMPTOTIC:
        raise InputError("asymptotic_critical needs a spec with method=asymptotic")
    kind = spec.stat_kind
    if kind is StatKind.MS_ONESIDED:
        return ms_weight(spec.alpha).quantile
    if kind is StatKind.WEIGHTED_SMIRNOV:
        return asymptotic.gumbel_critical(spec.alpha, spec.n, two_sided=False)
    if kind is StatKind.WEIGHTED_KS:
        return asymptotic.gumbel_critical(spec.alpha, spec.n, two_sided=True)
    return invert_cdf(null_cdf(spec), 1.0 - spec.alpha, hi0=2.0, cdf_tol=1e-9)


def critical_value(spec: TestSpec, cache: "CriticalValueCache | None" = None) -> float:
    if spec.method is Method.EXACT:
        return exact_critical(spec, cache)
    if spec.method is Method.ASYMPTOTIC:
        return asymptotic_critical(spec)
    from . import mc
    sims = _scale(spec) * mc.simulate_null(
        spec.stat_kind, spec.n, mc.MCConfig(spec.mc_reps, spec.mc_seed),
        weight=_mc_weight(spec))
    return float(np.quantile(sims, 1.0 - spec.alpha, method="higher"))


def p_value(spec: TestSpec, observed: float) -> float:
    """1 - CDF(observed) under the spec's null distribution."""
    if not math.isfinite(observed):
        raise InputError(f"observed statistic must be finite, got {observed}")
    if spec.method is Method.MONTE_CARLO:
        raise CapabilityError("p_value supports exact and asymptotic methods only")
    p = 1.0 - null_cdf(spec)(observed)
    return min(1.0, max(0.0, p))


def _scale(spec: TestSpec) -> float:
    return math.sqrt(spec.n) if spec.stat_kind in _SQRTN_SCALED else 1.0


def _mc_weight(spec: TestSpec) -> float | None:
    return ms_weight(spec.alpha).w if spec.stat_kind is StatKind.MS_ONESIDED else None


def compute_statistic(spec: TestSpec, sample: UnitSample) -> tuple[float, float | None]:
    """The spec's statistic on its comparison scale plus the argmax location."""
    kind = spec.stat_kind
    if kind is StatKind.SMIRNOV_ARGMAX:
        sv = stats.wstar_stat(sample)
        return _scale(spec) * sv.value, sv.argmax_u
    if kind is StatKind.KS_ARGMAX:
        sv = stats.vstar_stat(sample)
        return _scale(spec) * sv.value, sv.argmax_u
    if kind is StatKind.SMIRNOV:
        return _scale(spec) * stats.smirnov_stat(sample).value, None
    if kind is StatKind.KS:
        return _scale(spec) * stats.ks_stat(sample).value, None
    if kind is StatKind.MS_ONESIDED:
        return stats.tnplus_stat(sample, ms_weight(spec.alpha).w).value, None
    from . import mc
    row = sample.values[None, :]
    if kind is StatKind.WEIGHTED_SMIRNOV:
        return _scale(spec) * float(mc.weighted_onesided_sup(row)[0]), None
    if kind is StatKind.WEIGHTED_KS:
        return _scale(spec) * float(mc.weighted_twosided_sup(row)[0]), None
    raise CapabilityError(f"cannot compute statistic {kind.value}")


def run_test(spec: TestSpec, sample: UnitSample,
             cache: "CriticalValueCache | None" = None) -> TestReport:
    """Compute statistic, critical value, and p-value; reject iff the
    statistic strictly exceeds the critical value."""
    if sample.n != spec.n:
        raise InputError(f"sample size {sample.n} does not match spec n={spec.n}")
    stat, argmax_u = compute_statistic(spec, sample)
    crit = critical_value(spec, cache)
    if spec.method is Method.MONTE_CARLO:
        from . import mc
        sims = _scale(spec) * mc.simulate_null(
            spec.stat_kind, spec.n, mc.MCConfig(spec.mc_reps, spec.mc_seed),
            weight=_mc_weight(spec))
        pv = (1.0 + float(np.sum(sims >= stat))) / (sims.size + 1.0)
    else:
        pv = p_value(spec, stat)
    return TestReport(spec, stat, crit, pv, bool(stat > crit), argmax_u)


def default_cache_path() -> Path:
    return Path(os.environ.get(CACHE_ENV, DEFAULT_CACHE_NAME))


@dataclass
class CriticalValueCache:
    """Append-only CSV cache `stat,n,alpha,value,method,tolerance` with
    whole-file advisory locking around writes."""

    path: Path
    _entries: dict = field(default_factory=dict, repr=False)

    def __init__(self, path=None):
        self.path = Path(path) if path is not None else default_cache_path()
        self._entries = {}
        self._load()

    @staticmethod
    def _key(kind: StatKind, n: int, alpha: float, method: Method) -> tuple:
        return (StatKind(kind).value, int(n), f"{alpha:.12g}", Method(method).value)

    def _load(self):
        if not self.path.exists():
            return
        with self.path.open(encoding="utf-8") as fh:
            fcntl.flock(fh, fcntl.LOCK_SH)
            try:
                rows = fh.read().splitlines()
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)
        for row in rows[1:]:
            parts = row.split(",")
            if len(parts) != 6:
                continue
            stat, n, alpha, value, method, _tol = parts
            self._entries[(stat, int(n), alpha, method)] = float(value)

    def get(self, kind, n, alpha, method) -> float | None:
        key = self._key(kind, n, alpha, method)
        if key not in self._entries:
            self._load()
        return self._entries.get(key)

    def put(self, kind, n, alpha, method, value: float, tolerance: float):
        key = self._key(kind, n, alpha, method)
        if self._entries.get(key) == value:
            return
        new = not self.path.exists()
        with self.path.open("a", encoding="utf-8") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            try:
                if new:
                    fh.write("stat,n,alpha,value,method,tolerance\n")
                fh.write(f"{key[0]},{key[1]},{key[2]},{value!r},{key[3]},{tolerance:g}\n")
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)
        self._entries[key] = value
