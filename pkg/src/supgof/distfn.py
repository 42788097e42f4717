"""Hypothesized distribution models and the probability integral transform.

Every test statistic downstream depends on the data only through the sorted
transformed values F0(x_i), so this module is the single entry point for raw
data. Models are continuous by construction; discrete or discontinuous
hypotheses are out of scope.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np
from scipy.special import ndtri

from .errors import DomainError, InputError, ParameterError

_SQRT2 = math.sqrt(2.0)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


def norm_cdf(x: float) -> float:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * math.erfc(-x / _SQRT2)


def norm_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / _SQRT_2PI


def norm_quantile(p: float) -> float:
    """Standard normal quantile, Newton-polished against norm_cdf."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"normal quantile needs p in (0,1), got {p}")
    q = float(ndtri(p))
    d = norm_pdf(q)
    if d > 1e-300:
        step = (norm_cdf(q) - p) / d
        if abs(step) < 1e-6:
            q -= step
    return q


class ModelFamily(str, Enum):
    UNIFORM = "uniform"
    NORMAL = "normal"
    EXPONENTIAL = "exponential"
    PIECEWISE_LINEAR = "piecewise_linear"


@dataclass(frozen=True)
class HypothesisModel:
    """A continuous hypothesized CDF, evaluable and invertible.

    Construct through the classmethods; they validate parameters. For the
    piecewise-linear family the knot x-values must be strictly increasing
    and the F-values nondecreasing from 0 to 1.
    """

    family: ModelFamily
    params: tuple[float, ...] = ()
    knots_x: np.ndarray | None = field(default=None, repr=False)
    knots_f: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def uniform(cls, a: float, b: float) -> "HypothesisModel":
        if not b > a:
            raise ParameterError(f"uniform needs b > a, got ({a}, {b})")
        return cls(ModelFamily.UNIFORM, (float(a), float(b)))

    @classmethod
    def normal(cls, mu: float, sigma: float) -> "HypothesisModel":
        if not sigma > 0:
            raise ParameterError(f"normal needs sigma > 0, got {sigma}")
        return cls(ModelFamily.NORMAL, (float(mu), float(sigma)))

    @classmethod
    def exponential(cls, rate: float) -> "HypothesisModel":
        if not rate > 0:
            raise ParameterError(f"exponential needs rate > 0, got {rate}")
        return cls(ModelFamily.EXPONENTIAL, (float(rate),))

    @classmethod
    def piecewise_linear(cls, knots) -> "HypothesisModel":
        pts = [(float(x), float(f)) for x, f in knots]
        if len(pts) < 2:
            raise ParameterError("piecewise_linear needs at least two knots")
        xs = np.array([p[0] for p in pts])
        fs = np.array([p[1] for p in pts])
        if not np.all(np.diff(xs) > 0):
            raise ParameterError("knot x-values must be strictly increasing")
        if np.any(np.diff(fs) < 0):
            raise ParameterError("knot F-values must be nondecreasing")
        if fs[0] != 0.0 or fs[-1] != 1.0:
            raise ParameterError("knot F-values must run from 0 to 1")
        return cls(ModelFamily.PIECEWISE_LINEAR, (), xs, fs)

    def support(self) -> tuple[float, float]:
        if self.family is ModelFamily.UNIFORM:
            return self.params
        if self.family is ModelFamily.NORMAL:
            return (-math.inf, math.inf)
        if self.family is ModelFamily.EXPONENTIAL:
            return (0.0, math.inf)
        return (float(self.knots_x[0]), float(self.knots_x[-1]))


def eval_cdf(model: HypothesisModel, x: float) -> float:
    """F0(x) for the given model; nondecreasing in x, range [0, 1]."""
    if model.family is ModelFamily.UNIFORM:
        a, b = model.params
        return min(1.0, max(0.0, (x - a) / (b - a)))
    if model.family is ModelFamily.NORMAL:
        mu, sigma = model.params
        return norm_cdf((x - mu) / sigma)
    if model.family is ModelFamily.EXPONENTIAL:
        (rate,) = model.params
        return -math.expm1(-rate * x) if x > 0 else 0.0
    return float(np.interp(x, model.knots_x, model.knots_f, left=0.0, right=1.0))


def eval_quantile(model: HypothesisModel, p: float) -> float:
    """Generalized inverse F0^{-1}(p) for p in (0, 1)."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"quantile needs p in (0,1), got {p}")
    if model.family is ModelFamily.UNIFORM:
        a, b = model.params
        return a + p * (b - a)
    if model.family is ModelFamily.NORMAL:
        mu, sigma = model.params
        return mu + sigma * norm_quantile(p)
    if model.family is ModelFamily.EXPONENTIAL:
        (rate,) = model.params
        return -math.log1p(-p) / rate
    # leftmost x with F(x) >= p; flat segments collapse to their left end
    xs, fs = model.knots_x, model.knots_f
    idx = int(np.searchsorted(fs, p, side="left"))
    if fs[idx] == p or fs[idx] == fs[idx - 1]:
        return float(xs[idx])
    t = (p - fs[idx - 1]) / (fs[idx] - fs[idx - 1])
    return float(xs[idx - 1] + t * (xs[idx] - xs[idx - 1]))


@dataclass(frozen=True)
class UnitSample:
    """Sorted probability-integral-transformed observations in [0, 1]."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or vals.size == 0:
            raise InputError("UnitSample needs a nonempty 1-d array")
        if np.any(vals < 0.0) or np.any(vals > 1.0):
            raise InputError("UnitSample values must lie in [0, 1]")
        if np.any(np.diff(vals) < 0.0):
            raise InputError("UnitSample values must be sorted ascending")
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return self.values.size


def pit(raw_sample, model: HypothesisModel) -> UnitSample:
    """Probability integral transform: sorted {F0(x_i)}.

    Values exactly at support endpoints map to 0 or 1 and are accepted;
    operations that need interior values raise their own errors.
    """
    raw = np.asarray(raw_sample, dtype=float)
    if raw.ndim != 1 or raw.size == 0:
        raise InputError("sample must be a nonempty 1-d array")
    lo, hi = model.support()
    if np.any(raw < lo) or np.any(raw > hi):
        raise InputError("sample contains values outside the model's support")
    u = np.sort([eval_cdf(model, float(x)) for x in raw])
    return UnitSample(u)


def parse_model(text: str) -> HypothesisModel:
    """Parse `uniform:a,b | normal:mu,sigma | exp:lambda | pwl:file.csv`."""
    head, sep, rest = text.partition(":")
    if not sep:
        raise InputError(f"malformed model spec {text!r}")
    head = head.strip().lower()
    try:
        if head == "uniform":
            a, b = (float(v) for v in rest.split(","))
            return HypothesisModel.uniform(a, b)
        if head == "normal":
            mu, sigma = (float(v) for v in rest.split(","))
            return HypothesisModel.normal(mu, sigma)
        if head == "exp":
            return HypothesisModel.exponential(float(rest))
        if head == "pwl":
            return HypothesisModel.piecewise_linear(read_knots_csv(rest.strip()))
    except (ValueError, ParameterError) as exc:
        if isinstance(exc, ParameterError):
            raise
        raise InputError(f"malformed model spec {text!r}: {exc}") from exc
    raise InputError(f"unknown model family {head!r}")


def _is_number(token: str) -> bool:
    try:
        float(token)
        return True
    except ValueError:
        return False


def read_sample_csv(path) -> np.ndarray:
    """Read one numeric value per line; a single header line is skipped."""
    p = Path(path)
    try:
        lines = p.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InputError(f"cannot read sample file {path}: {exc}") from exc
    rows = [ln.strip() for ln in lines if ln.strip()]
    if rows and not _is_number(rows[0].split(",")[0]):
        rows = rows[1:]
    if not rows:
        raise InputError(f"no data rows in {path}")
    try:
        return np.array([float(r.split(",")[0]) for r in rows])
    except ValueError as exc:
        raise InputError(f"non-numeric entry in {path}: {exc}") from exc


def read_knots_csv(path):
    """Read (x, F) knot rows for a piecewise-linear model."""
    p = Path(path)
    try:
        with p.open(encoding="utf-8", newline="") as fh:
            rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    except OSError as exc:
        raise InputError(f"cannot read knots file {path}: {exc}") from exc
    if rows and not _is_number(rows[0][0]):
        rows = rows[1:]
    if not rows:
        raise InputError(f"no knot rows in {path}")
    try:
        return [(float(r[0]), float(r[1])) for r in rows]
    except (IndexError, ValueError) as exc:
        raise InputError(f"malformed knot row in {path}: {exc}") from exc
