"""Goodness of fit and model selection: AIC/AICc, Kolmogorov-Smirnov, TTT plot."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .samples import as_sample
from .specfun import DomainError

__all__ = [
    "aic_aicc",
    "kolmogorov_sf",
    "ks_test",
    "TttCurve",
    "ttt_transform",
    "ModelRow",
    "ModelComparison",
    "FittedModel",
    "compare_models",
]


def aic_aicc(loglik: float, k: int, n: int) -> tuple[float, float]:
    """AIC = -2 l + 2k and AICc = AIC + 2k(k+1)/(n-k-1)."""
    if k < 0 or n <= k + 1:
        raise DomainError(f"AICc needs n > k + 1 (got n={n}, k={k})")
    aic = -2.0 * loglik + 2.0 * k
    return aic, aic + 2.0 * k * (k + 1) / (n - k - 1)


def kolmogorov_sf(x: float, tol: float = 1e-12) -> float:
    """P(K > x) for the Kolmogorov limit law, 2 sum (-1)^(k-1) exp(-2 k^2 x^2).

    The series is cut once a term drops below ``tol``.  For small ``x`` the
    alternating series converges too slowly to be useful and the value is 1
    to double precision anyway.
    """
    if x <= 0.2:
        return 1.0
    total, k = 0.0, 1
    while True:
        term = math.exp(-2.0 * k * k * x * x)
        total += term if k % 2 else -term
        if term < tol:
            break
        k += 1
    return min(1.0, max(0.0, 2.0 * total))


def ks_test(data, cdf: Callable[[np.ndarray], np.ndarray]) -> tuple[float, float]:
    """One-sample KS statistic D_n and its asymptotic p-value.

    ``cdf`` must accept an array of sorted observations.  The p-value uses
    the limit law at sqrt(n) D_n with no small-sample correction.
    """
    data = as_sample(data)
    t = data.sorted_values
    n = len(t)
    F = np.asarray(cdf(t), dtype=float)
    i = np.arange(1, n + 1)
    d = float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))
    return d, kolmogorov_sf(math.sqrt(n) * d)


@dataclass(frozen=True)
class TttCurve:
    u: np.ndarray  # r/n
    g: np.ndarray  # G(r/n)

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.u.tolist(), self.g.tolist()))


def ttt_transform(data) -> TttCurve:
    """Scaled total time on test, G(r/n) = (sum_{i<=r} t_(i) + (n-r) t_(r)) / sum t."""
    t = as_sample(data).sorted_values
    n = len(t)
    r = np.arange(1, n + 1)
    g = (np.cumsum(t) + (n - r) * t) / float(np.sum(t))
    g[-1] = 1.0
    return TttCurve(r / n, g)


@dataclass
class ModelRow:
    name: str
    k: int
    loglik: float
    aic: float
    aicc: float
    ks_stat: float
    ks_pvalue: float
    best: bool = False
    notes: str = ""


@dataclass
class ModelComparison:
    rows: list[ModelRow]
    n: int
    excluded: list[tuple[str, str]] = field(default_factory=list)

    @property
    def best(self) -> ModelRow | None:
        return next((r for r in self.rows if r.best), None)

    def sorted_by_aic(self) -> list[ModelRow]:
        return sorted(self.rows, key=lambda r: r.aic)


@dataclass(frozen=True)
class FittedModel:
    """What :func:`compare_models` needs from a fitted model."""

    name: str
    k: int
    loglik: float
    cdf: Callable[[np.ndarray], np.ndarray]
    ok: bool = True
    notes: str = ""


def compare_models(data, models: Sequence[FittedModel]) -> ModelComparison:
    """Tabulate AIC, AICc and KS for fitted models; flag the AIC minimum.

    Models that failed to fit (``ok=False`` or a non-finite log-likelihood)
    are listed in ``excluded`` rather than ranked.
    """
    data = as_sample(data)
    n = len(data)
    rows, excluded = [], []
    for m in models:
        if not m.ok or not math.isfinite(m.loglik):
            excluded.append((m.name, m.notes or "fit failed"))
            continue
        aic, aicc = aic_aicc(m.loglik, m.k, n)
        d, p = ks_test(data, m.cdf)
        rows.append(ModelRow(m.name, m.k, m.loglik, aic, aicc, d, p, notes=m.notes))
    if rows:
        min(rows, key=lambda r: r.aic).best = True
    return ModelComparison(rows, n, excluded)
