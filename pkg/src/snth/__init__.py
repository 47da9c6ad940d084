"""Multivariate skew-normal Tukey-h distributions: densities, moments,
conditionals, sampling, and maximum-likelihood estimation."""

from __future__ import annotations

from .data import Dataset, from_array, read_csv, write_csv
from .distribution import (MomentReport, SnthConditional, SnthParams,
                           snth_canonical, snth_cdf, snth_conditional,
                           snth_conditional_moments, snth_log_pdf,
                           snth_marginal, snth_moments, snth_sample,
                           snth_skew_kurt)
from .estimator import SkewNormalTukeyH
from .inference import (DEFAULT_FIT_CONFIG, EmFailure, EmResult, FitConfig,
                        FitResult, MarginalEstimates, ParamStdErr, TestResult,
                        aic, em_sn_scale, fit, fit_marginals, full_log_lik,
                        lrt, marginal_log_lik, reconstruct_latent,
                        standard_errors)
from .skewnormal import (AsnParams, EsnParams, asn_to_sn, esn_log_pdf,
                         esn_moments, esn_sample, sn_canonical, sn_cdf,
                         sn_conditional, sn_marginal, sn_to_asn)
from .special import (Accuracy, inv_tukey_h, lambert_w0, mvn_cdf,
                      truncated_normal_moments, tukey_h, zeta1)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # special functions
    "Accuracy", "lambert_w0", "tukey_h", "inv_tukey_h", "mvn_cdf",
    "truncated_normal_moments", "zeta1",
    # skew-normal building blocks
    "AsnParams", "EsnParams", "asn_to_sn", "sn_to_asn", "esn_log_pdf",
    "esn_sample", "esn_moments", "sn_marginal", "sn_conditional", "sn_cdf",
    "sn_canonical",
    # the distribution itself
    "SnthParams", "SnthConditional", "MomentReport", "snth_sample",
    "snth_log_pdf", "snth_cdf", "snth_marginal", "snth_moments",
    "snth_skew_kurt", "snth_conditional", "snth_conditional_moments",
    "snth_canonical",
    # estimation
    "FitConfig", "DEFAULT_FIT_CONFIG", "FitResult", "TestResult", "EmResult",
    "EmFailure", "MarginalEstimates", "ParamStdErr", "full_log_lik",
    "marginal_log_lik", "fit_marginals", "reconstruct_latent", "em_sn_scale",
    "fit", "standard_errors", "lrt", "aic",
    # data handling and the estimator facade
    "Dataset", "read_csv", "write_csv", "from_array", "SkewNormalTukeyH",
]
