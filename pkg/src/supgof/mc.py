"""Deterministic, parallelizable Monte-Carlo engine.

Replicate r of a run with master seed s consumes positions [r*n, (r+1)*n) of
the counter-based Philox stream keyed by s, so results are bit-identical for
a fixed configuration no matter how replicates are chunked or scheduled.
Statistics are evaluated on whole blocks of replicates with vectorized
kernels; power comparisons reuse the same simulated samples for every test
(common random numbers).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import critical as crit
from .errors import DomainError, InputError
from .statistics import StatKind

_BLOCK_TARGET = 2_000_000  # floats per generation block


@dataclass(frozen=True)
class MCConfig:
    reps: int
    master_seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.reps < 1:
            raise InputError(f"reps must be >= 1, got {self.reps}")
        if self.workers < 1:
            raise InputError(f"workers must be >= 1, got {self.workers}")


def uniform_block(master_seed: int, start_rep: int, n_reps: int, n: int) -> np.ndarray:
    """Rows start_rep .. start_rep+n_reps-1 of the replicate stream, unsorted."""
    bg = np.random.Philox(key=np.uint64(master_seed))
    bg.advance(start_rep * n)
    return np.random.Generator(bg).random((n_reps, n))


def _block_edges(reps: int, n: int, workers: int) -> list[tuple[int, int]]:
    block = max(1, min(reps, _BLOCK_TARGET // max(n, 1)))
    if workers > 1:
        block = max(1, min(block, -(-reps // workers)))
    return [(r0, min(r0 + block, reps)) for r0 in range(0, reps, block)]


def weighted_onesided_sup(u: np.ndarray) -> np.ndarray:
    """Row-wise sup of (F_n - F0)/sqrt(F0(1-F0)) for sorted unit rows; the
    piecewise sup is attained at left endpoints, floored at 0."""
    n = u.shape[1]
    i = np.arange(1, n + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = (i / n - u) / np.sqrt(u * (1.0 - u))
    return np.maximum(np.nanmax(terms, axis=1), 0.0)


def weighted_twosided_sup(u: np.ndarray) -> np.ndarray:
    """Row-wise sup of |F_n - F0|/sqrt(F0(1-F0)): per index the larger of the
    upward and downward excursions, which is always positive."""
    n = u.shape[1]
    i = np.arange(1, n + 1)
    num = np.maximum(i / n - u, u - (i - 1) / n)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = num / np.sqrt(u * (1.0 - u))
    return np.nanmax(terms, axis=1)


def _rows_smirnov(u):
    n = u.shape[1]
    return np.max(np.arange(1, n + 1) / n - u, axis=1)


def _rows_ks(u):
    n = u.shape[1]
    i = np.arange(1, n + 1)
    return np.max(np.maximum(i / n - u, u - (i - 1) / n), axis=1)


def _rows_wstar(u):
    n = u.shape[1]
    d = np.arange(1, n + 1) / n - u
    r = np.argmax(d, axis=1)
    rows = np.arange(u.shape[0])
    ur = u[rows, r]
    return d[rows, r] / np.sqrt(ur * (1.0 - ur))


def _rows_vstar(u):
    n = u.shape[1]
    i = np.arange(1, n + 1)
    t = np.maximum(i / n - u, u - (i - 1) / n)
    r = np.argmax(t, axis=1)
    rows = np.arange(u.shape[0])
    ur = u[rows, r]
    return t[rows, r] / np.sqrt(ur * (1.0 - ur))


def _rows_cdf_ratio(u):
    n = u.shape[1]
    with np.errstate(divide="ignore"):
        return np.max(np.arange(1, n + 1) / (n * u), axis=1)


def _rows_survival_ratio(u):
    n = u.shape[1]
    if n == 1:
        return np.zeros(u.shape[0])
    i = np.arange(1, n)
    with np.errstate(divide="ignore"):
        vals = np.max((n - i) / (n * (1.0 - u[:, :-1])), axis=1)
    return np.maximum(vals, 0.0)


_ROW_KERNELS = {
    StatKind.SMIRNOV: _rows_smirnov,
    StatKind.KS: _rows_ks,
    StatKind.SMIRNOV_ARGMAX: _rows_wstar,
    StatKind.KS_ARGMAX: _rows_vstar,
    StatKind.CDF_RATIO: _rows_cdf_ratio,
    StatKind.SURVIVAL_RATIO: _rows_survival_ratio,
    StatKind.WEIGHTED_SMIRNOV: weighted_onesided_sup,
    StatKind.WEIGHTED_KS: weighted_twosided_sup,
}


def statistic_rows(kind: StatKind, u_sorted: np.ndarray,
                   weight: float | None = None) -> np.ndarray:
    """Vectorized statistic over rows of sorted unit samples."""
    kind = StatKind(kind)
    if kind in (StatKind.MS_ONESIDED, StatKind.MS_TWOSIDED):
        if weight is None or weight <= 0.0:
            raise DomainError("combined statistics need a positive weight")
        mid = _rows_smirnov(u_sorted) if kind is StatKind.MS_ONESIDED else _rows_ks(u_sorted)
        n = u_sorted.shape[1]
        return np.maximum.reduce([
            weight * _rows_cdf_ratio(u_sorted),
            math.sqrt(n) * mid,
            weight * _rows_survival_ratio(u_sorted),
        ])
    return _ROW_KERNELS[kind](u_sorted)


def simulate_null(stat_kind: StatKind, n: int, cfg: MCConfig,
                  weight: float | None = None) -> np.ndarray:
    """Sorted statistic values over cfg.reps uniform samples of size n."""
    if n < 1:
        raise InputError(f"sample size must be >= 1, got {n}")

    def one(edge):
        r0, r1 = edge
        u = uniform_block(cfg.master_seed, r0, r1 - r0, n)
        u.sort(axis=1)
        return statistic_rows(stat_kind, u, weight)

    edges = _block_edges(cfg.reps, n, cfg.workers)
    if cfg.workers > 1 and len(edges) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(one, edges))
    else:
        parts = [one(e) for e in edges]
    return np.sort(np.concatenate(parts))


def type_one_error(spec: crit.TestSpec, cfg: MCConfig,
                   cache: "crit.CriticalValueCache | None" = None) -> tuple[float, float]:
    """Rejection frequency of the spec's test over uniform null samples."""
    threshold = crit.critical_value(spec, cache)
    scale = math.sqrt(spec.n) if spec.stat_kind in crit._SQRTN_SCALED else 1.0
    w = crit.ms_weight(spec.alpha).w if spec.stat_kind is StatKind.MS_ONESIDED else None
    sims = simulate_null(spec.stat_kind, spec.n, cfg, weight=w)
    rate = float(np.mean(scale * sims > threshold))
    return rate, math.sqrt(rate * (1.0 - rate) / cfg.reps)


@dataclass(frozen=True)
class PowerCurve:
    """Estimated rejection probabilities over a grid of alternatives for the
    argmax-rescaled (N), plain sup (S), and combined (MS) one-sided tests."""

    n: int
    alpha: float
    tau_prob: float
    delta_grid: np.ndarray
    power: dict = field(default_factory=dict)    # keys "N", "S", "MS"
    stderr: dict = field(default_factory=dict)


def power_curve(n: int, alpha: float, tau_prob: float, delta_grid,
                cfg: MCConfig,
                cache: "crit.CriticalValueCache | None" = None) -> PowerCurve:
    """Monte-Carlo power of the three one-sided tests at their exact critical
    values, all evaluated on the same replicate samples per grid point."""
    from .alternatives import AlternativeSpec, alt_quantile_vec

    deltas = np.atleast_1d(np.asarray(delta_grid, dtype=float))
    specs = [AlternativeSpec(tau_prob, float(d)) for d in deltas]  # validates range

    z = crit.exact_critical(crit.TestSpec(StatKind.SMIRNOV_ARGMAX, n, alpha, crit.Method.EXACT), cache)
    uq = crit.exact_critical(crit.TestSpec(StatKind.SMIRNOV, n, alpha, crit.Method.EXACT), cache)
    y = crit.exact_critical(crit.TestSpec(StatKind.MS_ONESIDED, n, alpha, crit.Method.EXACT), cache)
    w = crit.ms_weight(alpha).w
    rootn = math.sqrt(n)

    counts = np.zeros((3, deltas.size))

    def one(edge):
        r0, r1 = edge
        u = uniform_block(cfg.master_seed, r0, r1 - r0, n)
        local = np.zeros((3, deltas.size))
        for di, spec in enumerate(specs):
            x = alt_quantile_vec(spec, u)
            x.sort(axis=1)
            local[0, di] = np.sum(rootn * _rows_wstar(x) > z)
            local[1, di] = np.sum(rootn * _rows_smirnov(x) > uq)
            local[2, di] = np.sum(statistic_rows(StatKind.MS_ONESIDED, x, w) > y)
        return local

    edges = _block_edges(cfg.reps, n, cfg.workers)
    if cfg.workers > 1 and len(edges) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(one, edges))
    else:
        parts = [one(e) for e in edges]
    for part in parts:
        counts += part

    p = counts / cfg.reps
    se = np.sqrt(p * (1.0 - p) / cfg.reps)
    names = ("N", "S", "MS")
    return PowerCurve(n, alpha, tau_prob, deltas,
                      power={k: p[i] for i, k in enumerate(names)},
                      stderr={k: se[i] for i, k in enumerate(names)})


def empirical_cdf_distance(samples, cdf) -> float:
    """Sup distance between the empirical CDF of the sorted samples and the
    given CDF, evaluated over the sample points."""
    s = np.asarray(samples, dtype=float)
    if s.ndim != 1 or s.size == 0:
        raise InputError("samples must be a nonempty sorted 1-d array")
    if np.any(np.diff(s) < 0.0):
        raise InputError("samples must be sorted ascending")
    try:
        f = np.asarray(cdf(s), dtype=float)
        if f.shape != s.shape:
            raise TypeError
    except (TypeError, ValueError):
        f = np.array([cdf(float(v)) for v in s])
    m = s.size
    i = np.arange(1, m + 1)
    return float(max(np.max(np.abs(i / m - f)), np.max(np.abs((i - 1) / m - f))))
