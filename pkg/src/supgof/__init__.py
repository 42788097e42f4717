"""Supremum-type goodness-of-fit tests.

One- and two-sided tests built from the maximum deviation of the empirical
CDF, its weighted and argmax-rescaled variants, and the combined ratio
statistics, together with their exact finite-sample and asymptotic null
distributions, critical values, p-values, and a deterministic Monte-Carlo
engine for size and power studies.
"""

from .alternatives import (AlternativeSpec, alt_cdf, alt_quantile,
                           analytic_summaries, beta_coeff, sample_alt)
from .asymptotic import (SeriesControl, gumbel_critical, kolmogorov_cdf,
                         maxwell_cdf, ms_limit, smirnov_limit_cdf,
                         vstar_limit_cdf)
from .critical import (CriticalValueCache, Method, MSWeight, TestReport,
                       TestSpec, asymptotic_critical, exact_critical,
                       ms_weight, p_value, run_test)
from .distfn import (HypothesisModel, UnitSample, eval_cdf, eval_quantile,
                     parse_model, pit)
from .exact import (RectangleBounds, daniels_ln_cdf, hessenberg_det, qnk,
                    smirnov_cdf, steck_rectangle, threshold_s, tnplus_cdf,
                    wstar_cdf)
from .mc import (MCConfig, PowerCurve, empirical_cdf_distance, power_curve,
                 simulate_null, type_one_error)
from .statistics import (StatisticValue, StatKind, argmax_one_sided,
                         argmax_two_sided, ks_stat, ln_stat, smirnov_stat,
                         tn_stat, tnplus_stat, un_stat, vstar_stat, wstar_stat)

__version__ = "0.1.0"

__all__ = [
    "AlternativeSpec", "alt_cdf", "alt_quantile", "analytic_summaries",
    "beta_coeff", "sample_alt",
    "SeriesControl", "gumbel_critical", "kolmogorov_cdf", "maxwell_cdf",
    "ms_limit", "smirnov_limit_cdf", "vstar_limit_cdf",
    "CriticalValueCache", "Method", "MSWeight", "TestReport", "TestSpec",
    "asymptotic_critical", "exact_critical", "ms_weight", "p_value", "run_test",
    "HypothesisModel", "UnitSample", "eval_cdf", "eval_quantile",
    "parse_model", "pit",
    "RectangleBounds", "daniels_ln_cdf", "hessenberg_det", "qnk",
    "smirnov_cdf", "steck_rectangle", "threshold_s", "tnplus_cdf", "wstar_cdf",
    "MCConfig", "PowerCurve", "empirical_cdf_distance", "power_curve",
    "simulate_null", "type_one_error",
    "StatisticValue", "StatKind", "argmax_one_sided", "argmax_two_sided",
    "ks_stat", "ln_stat", "smirnov_stat", "tn_stat", "tnplus_stat", "un_stat",
    "vstar_stat", "wstar_stat",
]
