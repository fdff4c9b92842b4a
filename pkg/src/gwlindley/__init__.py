"""Generalized weighted Lindley (GWL) lifetime distribution.

Density, moments, entropies and hazard shape; eight point estimators; the
GG, GW, GEP and EW benchmark models; goodness-of-fit tools; and a
Monte-Carlo harness for comparing the estimators.
"""

from .datasets import Dataset, load_dataset
from .distribution import (
    GwlParams,
    cdf,
    hazard,
    hazard_shape,
    log_pdf,
    mean,
    pdf,
    quantile,
    sample,
    survival,
    variance,
)
from .estimation import FitResult, Method, fit, fisher_information, log_likelihood, wald_ci
from .samples import LifetimeSample

__all__ = [
    "Dataset",
    "FitResult",
    "GwlParams",
    "LifetimeSample",
    "Method",
    "cdf",
    "fisher_information",
    "fit",
    "hazard",
    "hazard_shape",
    "load_dataset",
    "log_likelihood",
    "log_pdf",
    "mean",
    "pdf",
    "quantile",
    "sample",
    "survival",
    "variance",
    "wald_ci",
]
