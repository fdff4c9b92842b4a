"""The generalized weighted Lindley (GWL) lifetime distribution.

Density on t > 0 with shape ``phi``, rate ``lam`` and power ``alpha``::

    f(t) = alpha * lam**(alpha*phi) * t**(alpha*phi - 1)
           * (lam + (lam*t)**alpha) * exp(-(lam*t)**alpha)
           / ((lam + phi) * Gamma(phi))

Writing ``x = (lam*t)**alpha``, the law is a two-component mixture of
generalized gamma variables: with probability ``p = lam/(lam+phi)`` the
variable ``x`` is Gamma(phi), otherwise Gamma(phi+1).  All distribution
functions below are evaluated through that mixture, which keeps every term
non-negative (no cancellation) and lets the incomplete gamma functions be
taken in log space for the far tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special as sp

from .samples import LifetimeSample
from .specfun import (
    DomainError,
    QuadratureSpec,
    RootBracket,
    find_root,
    integrate,
    log_reg_inc_gamma_upper_logx,
    reg_inc_gamma_logx,
)

__all__ = [
    "GwlParams",
    "GgParams",
    "MixtureWeights",
    "MgfResult",
    "mixture_weights",
    "mixture_components",
    "gg_log_pdf",
    "gg_cdf",
    "log_pdf",
    "pdf",
    "limit_at_zero",
    "cdf",
    "survival",
    "log_survival",
    "hazard",
    "log_hazard",
    "quantile",
    "raw_moment",
    "central_moment",
    "mean",
    "variance",
    "mgf",
    "mean_log",
    "mrl",
    "eta",
    "shannon_entropy",
    "renyi_entropy",
    "lorenz",
    "sample",
    "hazard_shape",
]


@dataclass(frozen=True)
class GwlParams:
    phi: float
    lam: float
    alpha: float

    def __post_init__(self):
        for name in ("phi", "lam", "alpha"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float, np.floating, np.integer)) and math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be a positive finite number, got {v!r}")
            object.__setattr__(self, name, float(v))

    def as_array(self) -> np.ndarray:
        return np.array([self.phi, self.lam, self.alpha])

    @classmethod
    def from_array(cls, theta) -> "GwlParams":
        phi, lam, alpha = (float(v) for v in theta)
        return cls(phi, lam, alpha)

    def __iter__(self):
        return iter((self.phi, self.lam, self.alpha))


@dataclass(frozen=True)
class MixtureWeights:
    p: float


@dataclass(frozen=True)
class GgParams:
    shape: float
    rate: float
    power: float


@dataclass(frozen=True)
class MgfResult:
    value: float
    converged: bool
    terms: int


def mixture_weights(params: GwlParams) -> MixtureWeights:
    return MixtureWeights(params.lam / (params.lam + params.phi))


def mixture_components(params: GwlParams) -> tuple[GgParams, GgParams]:
    phi, lam, alpha = params
    return GgParams(phi, lam, alpha), GgParams(phi + 1.0, lam, alpha)


def gg_log_pdf(gg: GgParams, t):
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        lt = np.log(np.where(t > 0, t, 1.0)) + math.log(gg.rate)
        out = (
            math.log(gg.power) + math.log(gg.rate) + (gg.power * gg.shape - 1.0) * lt
            - np.exp(gg.power * lt) - sp.gammaln(gg.shape)
        )
    return _unwrap(np.where(t > 0, out, -np.inf))


def gg_cdf(gg: GgParams, t):
    P, _ = reg_inc_gamma_logx(gg.shape, _log_power_arg(gg.rate, gg.power, t))
    return _unwrap(P)


def _unwrap(arr):
    return arr.item() if np.ndim(arr) == 0 else arr


def _log_lam_t(lam, t):
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):
        return np.log(np.where(t > 0, t, 0.0)) + math.log(lam)


def _log_power_arg(lam, alpha, t):
    # log x with x = (lam t)^alpha; -inf for t <= 0.  Kept in log space
    # because x underflows for large alpha long before P(phi, x) does.
    return alpha * _log_lam_t(lam, t)


def _log_norm(params: GwlParams) -> float:
    return math.log(params.lam + params.phi) + math.lgamma(params.phi)


def log_pdf(params: GwlParams, t):
    """Log density; ``-inf`` for ``t <= 0``."""
    phi, lam, alpha = params
    t = np.asarray(t, dtype=float)
    u = _log_lam_t(lam, t)
    lx = alpha * u
    with np.errstate(over="ignore", invalid="ignore"):
        out = (
            math.log(alpha) + math.log(lam) + (alpha * phi - 1.0) * u
            + np.logaddexp(math.log(lam), lx) - np.exp(lx) - _log_norm(params)
        )
    out = np.where(t > 0, out, -np.inf)
    return _unwrap(np.where(np.isnan(out), -np.inf, out))


def pdf(params: GwlParams, t):
    return _unwrap(np.exp(log_pdf(params, t)))


def limit_at_zero(params: GwlParams) -> float:
    """Value of the density as t -> 0+: ``inf``, a finite constant, or 0."""
    phi, lam, alpha = params
    ap = alpha * phi
    if math.isclose(ap, 1.0, rel_tol=1e-12):
        return alpha * lam**2 / ((lam + phi) * math.gamma(phi))
    return math.inf if ap < 1.0 else 0.0


def cdf(params: GwlParams, t):
    phi, lam, alpha = params
    p = lam / (lam + phi)
    lx = _log_power_arg(lam, alpha, t)
    out = p * reg_inc_gamma_logx(phi, lx)[0] + (1.0 - p) * reg_inc_gamma_logx(phi + 1.0, lx)[0]
    return _unwrap(np.clip(out, 0.0, 1.0))


def survival(params: GwlParams, t):
    phi, lam, alpha = params
    p = lam / (lam + phi)
    lx = _log_power_arg(lam, alpha, t)
    out = p * reg_inc_gamma_logx(phi, lx)[1] + (1.0 - p) * reg_inc_gamma_logx(phi + 1.0, lx)[1]
    return _unwrap(np.clip(out, 0.0, 1.0))


def log_survival(params: GwlParams, t):
    """log S(t), finite far beyond the point where S underflows."""
    phi, lam, alpha = params
    p = lam / (lam + phi)
    lx = np.atleast_1d(_log_power_arg(lam, alpha, t)).astype(float)
    out = np.logaddexp(
        math.log(p) + log_reg_inc_gamma_upper_logx(phi, lx),
        math.log1p(-p) + log_reg_inc_gamma_upper_logx(phi + 1.0, lx),
    )
    return _unwrap(out.reshape(np.shape(t)))


def log_hazard(params: GwlParams, t):
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise DomainError("hazard is defined for t > 0")
    return _unwrap(np.asarray(log_pdf(params, t)) - np.asarray(log_survival(params, t)))


def hazard(params: GwlParams, t):
    """Hazard rate f/S, evaluated as exp(log f - log S) so it stays finite in the tail."""
    return _unwrap(np.exp(log_hazard(params, t)))


def raw_moment(params: GwlParams, r: float) -> float:
    """E[T**r]; any real r > -alpha*phi is allowed (r = 0 gives 1)."""
    phi, lam, alpha = params
    if r == 0:
        return 1.0
    a = r / alpha + phi
    if a <= 0:
        raise DomainError(f"E[T^{r}] diverges for these parameters")
    return math.exp(
        math.log(a + lam) + math.lgamma(a) - math.log(lam + phi) - r * math.log(lam) - math.lgamma(phi)
    )


def mean(params: GwlParams) -> float:
    return raw_moment(params, 1.0)


def variance(params: GwlParams) -> float:
    return raw_moment(params, 2.0) - raw_moment(params, 1.0) ** 2


def central_moment(params: GwlParams, r: int) -> float:
    """E[(T - mu)**r] by binomial expansion over the raw moments."""
    if int(r) != r or r < 1:
        raise DomainError("central moments are defined here for integer r >= 1")
    r = int(r)
    if r == 1:
        return 0.0
    if r == 2:
        return variance(params)
    mu = mean(params)
    return math.fsum(math.comb(r, i) * (-mu) ** (r - i) * raw_moment(params, i) for i in range(r + 1))


def mgf(params: GwlParams, t: float, max_terms: int = 1000, tol: float = 1e-16) -> MgfResult:
    """Moment generating function by partial sums of its power series.

    ``converged`` is False when the terms are still growing at ``max_terms``
    (the series diverges for alpha < 1 and t > 0, and for alpha = 1 once
    t >= lam).
    """
    phi, lam, alpha = params
    if t == 0:
        return MgfResult(1.0, True, 1)
    log_c = -math.log(lam + phi) - math.lgamma(phi)
    log_abs_t = math.log(abs(t)) - math.log(lam)
    total = 0.0
    prev = math.inf
    for r in range(max_terms):
        a = r / alpha + phi
        log_term = r * log_abs_t - math.lgamma(r + 1.0) + math.log(a + lam) + math.lgamma(a) + log_c
        if log_term > 700:
            return MgfResult(math.inf if t > 0 else math.nan, False, r + 1)
        term = math.exp(log_term) * (-1.0 if (t < 0 and r % 2) else 1.0)
        total += term
        if r > 0 and abs(term) <= tol * abs(total) and abs(term) < prev:
            return MgfResult(total, True, r + 1)
        prev = abs(term)
    return MgfResult(total, False, max_terms)


def mean_log(params: GwlParams) -> float:
    """E[log T] = (psi(phi) + 1/(lam+phi)) / alpha - log(lam)."""
    phi, lam, alpha = params
    return (sp.psi(phi) - alpha * math.log(lam) + 1.0 / (lam + phi)) / alpha


def mrl(params: GwlParams, t):
    """Mean residual life E[T - t | T > t]; r(0) is the mean."""
    phi, lam, alpha = params
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("mean residual life needs t >= 0")
    p = lam / (lam + phi)
    lx = np.atleast_1d(_log_power_arg(lam, alpha, t)).astype(float)
    a = phi + 1.0 / alpha
    # E[T; T > t] = sum_j w_j * E[T_j] * Q(shape_j + 1/alpha, x)
    log_num = np.logaddexp(
        math.log(p) + math.lgamma(a) - math.lgamma(phi) + log_reg_inc_gamma_upper_logx(a, lx),
        math.log1p(-p) + math.lgamma(a + 1.0) - math.lgamma(phi + 1.0) + log_reg_inc_gamma_upper_logx(a + 1.0, lx),
    ) - math.log(lam)
    log_s = np.logaddexp(
        math.log(p) + log_reg_inc_gamma_upper_logx(phi, lx),
        math.log1p(-p) + log_reg_inc_gamma_upper_logx(phi + 1.0, lx),
    )
    out = np.exp(log_num - log_s) - np.atleast_1d(t)
    return _unwrap(out.reshape(np.shape(t)))


def _gamma_expectation(g: Callable[[float], float], shape: float, spec: QuadratureSpec | None = None):
    """E[g(Y)] for Y ~ Gamma(shape, 1), by quadrature.

    For shape < 1 the integrable singularity at 0 is removed with the
    substitution u = y**shape on [0, 1].
    """
    spec = spec or QuadratureSpec(abs_tol=1e-14, rel_tol=1e-12)
    lg = math.lgamma(shape)
    if shape < 1:
        lg1 = math.lgamma(shape + 1.0)

        def lower(u):
            y = u ** (1.0 / shape)
            return g(y) * math.exp(-y - lg1)

        lo = integrate(lower, 0.0, 1.0, spec)
    else:
        def lower(y):
            return g(y) * math.exp((shape - 1.0) * math.log(y) - y - lg) if y > 0 else (g(0.0) if shape == 1 else 0.0)

        lo = integrate(lower, 0.0, 1.0, spec)

    def upper(y):
        return g(y) * math.exp((shape - 1.0) * math.log(y) - y - lg)

    mode = max(shape - 1.0, 1.0)
    hi = integrate(upper, 1.0, math.inf, spec, scale=max(1.0, math.sqrt(shape)), points=[1.0 + mode] if mode > 1 else None)
    return lo.value + hi.value, lo.converged and hi.converged


def eta(params: GwlParams) -> float:
    """eta(phi, lam) = int_0^inf (lam+y) log(lam+y) y^(phi-1) e^(-y) dy."""
    phi, lam = params.phi, params.lam
    val, _ = _gamma_expectation(lambda y: (lam + y) * math.log(lam + y), phi)
    return val * math.gamma(phi)


def shannon_entropy(params: GwlParams) -> float:
    """Differential (Shannon) entropy, closed form up to the eta integral."""
    phi, lam, alpha = params
    e_term, _ = _gamma_expectation(lambda y: (lam + y) * math.log(lam + y), phi)
    return (
        math.log(lam + phi) + math.lgamma(phi) - math.log(alpha) - math.log(lam)
        + phi * (1.0 + phi + lam) / (lam + phi)
        - sp.psi(phi) * (alpha * phi - 1.0) / alpha
        - (alpha * phi - 1.0) / (alpha * (lam + phi))
        - e_term / (lam + phi)
    )


def renyi_log_delta(params: GwlParams, rho: float) -> float:
    """log of int_0^inf y^k (lam+y)^rho e^(-rho y) dy, k = (alpha rho phi - rho + 1 - alpha)/alpha."""
    phi, lam, alpha = params
    k = (alpha * rho * phi - rho + 1.0 - alpha) / alpha
    if k <= -1.0:
        raise DomainError(
            f"Renyi entropy of order {rho} diverges: need rho*(alpha*phi-1)+1 > 0"
        )
    shape = k + 1.0
    # substitute z = rho*y so the weight becomes a Gamma(k+1) density
    offset = rho * math.log(lam + shape / rho)
    val, _ = _gamma_expectation(lambda z: math.exp(rho * math.log(lam + z / rho) - offset), shape)
    return -shape * math.log(rho) + math.lgamma(shape) + offset + math.log(val)


def renyi_entropy(params: GwlParams, rho: float) -> float:
    if not (rho > 0 and rho != 1):
        raise DomainError("Renyi order must be positive and different from 1")
    phi, lam, alpha = params
    log_int = (rho - 1.0) * (math.log(alpha) + math.log(lam)) - rho * _log_norm(params) + renyi_log_delta(params, rho)
    return log_int / (1.0 - rho)


def quantile(params: GwlParams, p):
    """Inverse cdf, by bracketing around the mean in log time and Brent's method."""
    ps = np.atleast_1d(np.asarray(p, dtype=float))
    if np.any(~((ps > 0) & (ps < 1))):
        raise DomainError("quantile needs 0 < p < 1")
    log_mu = math.log(raw_moment(params, 1.0)) if params.alpha * params.phi > 1e-3 else -math.log(params.lam)
    out = np.empty_like(ps)
    for i, pi in enumerate(ps):
        def g(u, pi=pi):
            return float(cdf(params, math.exp(u))) - pi

        lo, hi = log_mu - math.log(10.0), log_mu + math.log(10.0)
        step = math.log(10.0)
        while g(lo) > 0:
            lo -= step
            step *= 1.5
            if lo < -745:
                raise DomainError(f"quantile {pi} underflows the double range")
        step = math.log(10.0)
        while g(hi) < 0:
            hi += step
            step *= 1.5
            if hi > 709:
                raise DomainError(f"quantile {pi} overflows the double range")
        out[i] = math.exp(find_root(g, RootBracket(lo, hi, tol=1e-14)))
    return _unwrap(out.reshape(np.shape(p)))


def lorenz(params: GwlParams, p):
    """Lorenz curve L(p) = E[T; T <= t_p] / E[T]."""
    phi, lam, alpha = params
    lx = _log_power_arg(lam, alpha, quantile(params, p))
    a = phi + 1.0 / alpha
    w_hi = a / (a + lam)
    out = w_hi * reg_inc_gamma_logx(a + 1.0, lx)[0] + (1.0 - w_hi) * reg_inc_gamma_logx(a, lx)[0]
    return _unwrap(np.clip(out, 0.0, 1.0))


def sample(params: GwlParams, n: int, seed: int | None = None, rng: np.random.Generator | None = None) -> LifetimeSample:
    """Exact draws through the generalized-gamma mixture.

    Each draw is ``G**(1/alpha) / lam`` with ``G`` standard gamma of shape
    ``phi`` (probability ``lam/(lam+phi)``) or ``phi + 1``.  Shapes below one
    use the boost ``G = G' * U**(1/shape)`` with ``G' ~ Gamma(shape + 1)``,
    carried out in log space so tiny draws do not underflow.
    """
    if n < 1:
        raise ValueError("sample size must be positive")
    phi, lam, alpha = params
    rng = rng if rng is not None else np.random.default_rng(seed)
    first = rng.random(n) < lam / (lam + phi)
    shape = np.where(first, phi, phi + 1.0)
    boost = shape < 1.0
    g = rng.standard_gamma(np.where(boost, shape + 1.0, shape))
    u = rng.random(n)
    with np.errstate(divide="ignore"):
        log_g = np.log(g) + np.where(boost, np.log(u) / shape, 0.0)
    t = np.exp(log_g / alpha - math.log(lam))
    tiny = np.finfo(float).tiny
    return LifetimeSample(np.clip(t, tiny, np.finfo(float).max))


_SHAPES = {
    "+": "increasing",
    "-": "decreasing",
    "-+": "bathtub",
    "+-": "unimodal",
    "-+-": "decreasing-increasing-decreasing",
    "+-+": "increasing-decreasing-increasing",
}


def hazard_shape(params: GwlParams, n_grid: int = 4000, p_range=(1e-10, 1 - 1e-10), rel_tol: float = 1e-10) -> str:
    """Classify the hazard shape from the sign pattern of d log h on a log-time grid.

    The grid spans the ``p_range`` quantiles; steps whose relative change is
    below ``rel_tol`` are treated as flat and ignored.
    """
    lo, hi = quantile(params, list(p_range))
    t = np.geomspace(lo, hi, n_grid)
    d = np.diff(log_hazard(params, t))
    signs = np.sign(d[np.abs(d) > rel_tol])
    if signs.size == 0:
        return "constant"
    runs = [signs[0]]
    for s in signs[1:]:
        if s != runs[-1]:
            runs.append(s)
    key = "".join("+" if s > 0 else "-" for s in runs)
    return _SHAPES.get(key, key)
