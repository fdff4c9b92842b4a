"""Point estimation for the GWL distribution.

Eight estimators share one driver, :func:`fit`: each is an objective over
``(phi, lam, alpha)`` minimized by Nelder-Mead in log-parameter space.

=====  ============================================================
MLE    negative log-likelihood
ME     squared relative residuals of the first three raw moments
OLSE   sum of squared distances F(t_(i)) - i/(n+1)
WLSE   the same with weights (n+1)^2 (n+2) / (i (n-i+1))
MPS    minus the mean log spacing H (ties use the density instead)
CME    Cramer-von Mises distance
ADE    Anderson-Darling distance
RADE   right-tail Anderson-Darling distance
=====  ============================================================
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special as sp
from scipy.stats import norm

from . import distribution as dist
from .distribution import GwlParams
from .samples import LifetimeSample, as_sample
from .specfun import EPS, DomainError, MinimizeOptions, minimize, numeric_hessian, reg_inc_gamma_logx

__all__ = [
    "Method",
    "FitResult",
    "Spacings",
    "FisherInformation",
    "LifetimeSample",
    "log_likelihood",
    "likelihood_equations",
    "fixed_point_forms",
    "delta_F",
    "spacings",
    "lse_objective",
    "wlse_objective",
    "mps_objective",
    "cme_objective",
    "ade_objective",
    "rade_objective",
    "moment_equations",
    "start_candidates",
    "fit",
    "is_failure",
    "observed_information",
    "log_pdf_hessian",
    "fisher_information",
    "wald_ci",
]

F_FLOOR = 1e-300
F_CEIL = 1.0 - 1e-16
BOUNDS = (1e-6, 1e6)
ME_TOLERANCE = 1e-4
_LOG_BOX = 700.0  # |log theta| beyond this is treated as outside the domain


class Method(str, enum.Enum):
    MLE = "MLE"
    ME = "ME"
    OLSE = "OLSE"
    WLSE = "WLSE"
    MPS = "MPS"
    CME = "CME"
    ADE = "ADE"
    RADE = "RADE"

    @classmethod
    def parse(cls, tag: "str | Method") -> "Method":
        if isinstance(tag, Method):
            return tag
        key = str(tag).strip().upper()
        aliases = {"LSE": "OLSE", "RTADE": "RADE", "MOM": "ME", "AD": "ADE", "CVM": "CME"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise ValueError(f"unknown estimation method {tag!r}; choose from {[m.value for m in cls]}") from None


@dataclass
class FitResult:
    method: Method
    estimates: GwlParams
    converged: bool
    iterations: int
    objective_value: float
    n: int
    covariance: np.ndarray | None = None
    stderr: np.ndarray | None = None
    loglik: float = math.nan
    notes: list[str] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return is_failure(self)

    def to_dict(self) -> dict:
        return {
            "method": self.method.value,
            "phi": self.estimates.phi,
            "lambda": self.estimates.lam,
            "alpha": self.estimates.alpha,
            "converged": self.converged,
            "iterations": self.iterations,
            "objective_value": self.objective_value,
            "loglik": self.loglik,
            "n": self.n,
            "stderr": None if self.stderr is None else [float(v) for v in self.stderr],
            "covariance": None if self.covariance is None else self.covariance.tolist(),
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class Spacings:
    d: np.ndarray


def is_failure(result: FitResult) -> bool:
    """Failure as used for the Monte-Carlo accounting.

    Not converged, any estimate outside [1e-6, 1e6], or a non-finite
    objective at the reported optimum.
    """
    theta = result.estimates.as_array()
    return (
        not result.converged
        or bool(np.any((theta < BOUNDS[0]) | (theta > BOUNDS[1])))
        or not math.isfinite(result.objective_value)
    )


# ---------------------------------------------------------------------------
# vectorized kernels on raw floats (hot path of every objective)


def _log_pdf(phi, lam, alpha, log_t):
    u = log_t + math.log(lam)
    lx = alpha * u
    with np.errstate(over="ignore", invalid="ignore"):
        return (
            math.log(alpha) + math.log(lam) + (alpha * phi - 1.0) * u
            + np.logaddexp(math.log(lam), lx) - np.exp(lx)
            - math.log(lam + phi) - math.lgamma(phi)
        )


def _cdf_sf(phi, lam, alpha, log_t):
    p = lam / (lam + phi)
    lx = alpha * (log_t + math.log(lam))
    P0, Q0 = reg_inc_gamma_logx(phi, lx)
    # P(phi+1, x) = P(phi, x) - x^phi e^-x / Gamma(phi+1), and Q gains the
    # same term.  F keeps relative accuracy within a factor 1/p because its
    # P(phi, x) share is never cancelled; S involves additions only.
    with np.errstate(over="ignore", invalid="ignore"):
        term = np.exp(phi * lx - np.exp(lx) - math.lgamma(phi + 1.0))
    term = np.nan_to_num(term, nan=0.0, posinf=0.0)
    F = P0 - (1.0 - p) * np.minimum(term, P0)
    S = Q0 + (1.0 - p) * term
    return F, S


def _params(params) -> tuple[float, float, float]:
    if isinstance(params, GwlParams):
        return params.phi, params.lam, params.alpha
    phi, lam, alpha = (float(v) for v in params)
    return phi, lam, alpha


# ---------------------------------------------------------------------------
# likelihood


def log_likelihood(params, data) -> float:
    """Sum of log densities; ``-inf`` if any term degenerates."""
    data = as_sample(data)
    v = float(np.sum(_log_pdf(*_params(params), data.log_values)))
    return v if math.isfinite(v) else -math.inf


def likelihood_equations(params, data) -> np.ndarray:
    """Score vector (d l/d phi, d l/d lam, d l/d alpha).

    Each component is the left side minus the right side of the
    corresponding likelihood equation, so all three vanish at an interior
    maximum.
    """
    data = as_sample(data)
    phi, lam, alpha = _params(params)
    n = len(data)
    u = data.log_values + math.log(lam)
    x = np.exp(alpha * u)
    g = lam + x
    s_log_t = float(np.sum(data.log_values))
    d_phi = n * alpha * math.log(lam) + alpha * s_log_t - n / (lam + phi) - n * sp.psi(phi)
    d_lam = (
        n * alpha * phi / lam + float(np.sum((1.0 + alpha * x / lam) / g))
        - alpha / lam * float(np.sum(x)) - n / (lam + phi)
    )
    d_alpha = n / alpha + n * phi * math.log(lam) + phi * s_log_t + float(np.sum(x * u / g)) - float(np.sum(x * u))
    return np.array([d_phi, d_lam, d_alpha])


def fixed_point_forms(params, data) -> tuple[float, float]:
    """alpha and phi re-expressed from the phi- and alpha-equations.

    Returns ``(alpha_star, phi_star)``; at an interior MLE both reproduce
    the current alpha and phi.  Diagnostic only.
    """
    data = as_sample(data)
    phi, lam, alpha = _params(params)
    n = len(data)
    denom = n * math.log(lam) + float(np.sum(data.log_values))
    u = data.log_values + math.log(lam)
    x = np.exp(alpha * u)
    alpha_star = (n / (lam + phi) + n * sp.psi(phi)) / denom
    phi_star = (float(np.sum(x * u)) - float(np.sum(x * u / (lam + x))) - n / alpha) / denom
    return alpha_star, phi_star


def delta_F(j: int, params, t):
    """Partial derivative of the cdf in parameter ``j`` (1=phi, 2=lam, 3=alpha).

    Central difference with relative step eps**(1/3).
    """
    if j not in (1, 2, 3):
        raise ValueError("j must be 1, 2 or 3")
    theta = np.array(_params(params))
    h = EPS ** (1.0 / 3.0) * theta[j - 1]
    up, dn = theta.copy(), theta.copy()
    up[j - 1] += h
    dn[j - 1] -= h
    log_t = np.log(np.asarray(t, dtype=float))
    Fu, _ = _cdf_sf(*up, log_t)
    Fd, _ = _cdf_sf(*dn, log_t)
    out = (Fu - Fd) / (2.0 * h)
    return out.item() if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# distance-type objectives (all sort internally via LifetimeSample)


def _fitted_cdf(params, data):
    F, _ = _cdf_sf(*_params(params), data.log_values)
    return F


def lse_objective(params, data) -> float:
    data = as_sample(data)
    n = len(data)
    i = np.arange(1, n + 1)
    return float(np.sum((_fitted_cdf(params, data) - i / (n + 1.0)) ** 2))


def _wlse_weights(n):
    i = np.arange(1, n + 1)
    return (n + 1.0) ** 2 * (n + 2.0) / (i * (n - i + 1.0))


def wlse_objective(params, data) -> float:
    data = as_sample(data)
    n = len(data)
    i = np.arange(1, n + 1)
    return float(np.sum(_wlse_weights(n) * (_fitted_cdf(params, data) - i / (n + 1.0)) ** 2))


def spacings(params, data) -> Spacings:
    """Raw cdf spacings D_1..D_{n+1} (no tie substitution)."""
    data = as_sample(data)
    F = _fitted_cdf(params, data)
    return Spacings(np.diff(np.concatenate(([0.0], F, [1.0]))))


def _log_spacings(theta, data, clamp):
    phi, lam, alpha = theta
    F, S = _cdf_sf(phi, lam, alpha, data.log_values)
    d = np.empty(len(F) + 1)
    d[0] = F[0]
    d[1:-1] = np.diff(F)
    d[-1] = S[-1]
    # far upper tail: difference the survival function instead
    upper = F[:-1] > 0.5
    if np.any(upper):
        d[1:-1][upper] = (S[:-1] - S[1:])[upper]
    with np.errstate(divide="ignore", invalid="ignore"):
        ld = np.log(np.maximum(d, F_FLOOR) if clamp else d)
    ties = data.tie_index
    if ties.size:
        ld[ties] = _log_pdf(phi, lam, alpha, data.log_values[ties])
    return ld


def mps_objective(params, data, clamp: bool = False) -> float:
    """H: mean log spacing (to be maximized).

    For tied observations ``t_(i) == t_(i-1)`` the zero spacing is replaced
    by the density at ``t_(i)``.  Without ``clamp`` an underflowing spacing
    gives ``-inf``; with it spacings are floored at 1e-300.
    """
    data = as_sample(data)
    ld = _log_spacings(_params(params), data, clamp)
    v = float(np.mean(ld))
    return v if not math.isnan(v) else -math.inf


def cme_objective(params, data) -> float:
    data = as_sample(data)
    n = len(data)
    i = np.arange(1, n + 1)
    return 1.0 / (12.0 * n) + float(np.sum((_fitted_cdf(params, data) - (2.0 * i - 1.0) / (2.0 * n)) ** 2))


def _clamped_logs(theta, data):
    F, S = _cdf_sf(*theta, data.log_values)
    Fc = np.clip(F, F_FLOOR, F_CEIL)
    Sc = np.clip(S, F_FLOOR, F_CEIL)
    clamped = bool(np.any(Fc != F) or np.any(Sc != S))
    return F, np.log(Fc), np.log(Sc), clamped


def ade_objective(params, data, report: list | None = None) -> float:
    data = as_sample(data)
    n = len(data)
    i = np.arange(1, n + 1)
    _, logF, logS, clamped = _clamped_logs(_params(params), data)
    if clamped and report is not None:
        report.append("F or S clamped to [1e-300, 1-1e-16] in Anderson-Darling terms")
    return -n - float(np.sum((2.0 * i - 1.0) * (logF + logS[::-1]))) / n


def rade_objective(params, data, report: list | None = None) -> float:
    data = as_sample(data)
    n = len(data)
    i = np.arange(1, n + 1)
    F, _, logS, clamped = _clamped_logs(_params(params), data)
    if clamped and report is not None:
        report.append("S clamped to [1e-300, 1-1e-16] in right-tail Anderson-Darling terms")
    return n / 2.0 - 2.0 * float(np.sum(F)) - float(np.sum((2.0 * i - 1.0) * logS[::-1])) / n


def moment_equations(params, data) -> np.ndarray:
    """raw_moment(j) - sample moment j, for j = 1, 2, 3."""
    data = as_sample(data)
    g = params if isinstance(params, GwlParams) else GwlParams(*_params(params))
    t = data.sorted_values
    return np.array([dist.raw_moment(g, j) - float(np.mean(t**j)) for j in (1, 2, 3)])


def _me_objective(theta, data, sample_moments):
    phi, lam, alpha = theta
    total = 0.0
    for j, m in enumerate(sample_moments, start=1):
        a = j / alpha + phi
        log_mu = math.log(a + lam) + math.lgamma(a) - math.log(lam + phi) - j * math.log(lam) - math.lgamma(phi)
        if log_mu > 700:
            return math.inf
        total += (math.exp(log_mu) / m - 1.0) ** 2
    return total


# ---------------------------------------------------------------------------
# start values


def _wl_moment_start(data: LifetimeSample):
    t = data.sorted_values
    m1, m2 = float(np.mean(t)), float(np.mean(t**2))

    def obj(z):
        phi, lam = np.exp(z)
        mu1 = phi * (1 + phi + lam) / (lam * (lam + phi))
        mu2 = (2 + phi + lam) * phi * (phi + 1) / (lam**2 * (lam + phi))
        return math.log(mu1 / m1) ** 2 + math.log(mu2 / m2) ** 2

    try:
        res = minimize(obj, [0.0, -math.log(m1)], MinimizeOptions(max_iterations=400, x_tol=1e-6, f_tol=1e-10, restarts=0))
        phi, lam = np.exp(res.x)
        if res.fun < 1e-6 and all(BOUNDS[0] < v < BOUNDS[1] for v in (phi, lam)):
            return (phi, lam, 1.0)
    except DomainError:
        pass
    return (1.0, 1.0, 1.0)


def _log_moment_start(data: LifetimeSample, phi0: float):
    lt = data.log_values
    s2 = float(np.var(lt))
    if not s2 > 0:
        return None
    # log T = log(Y)/alpha - log(lam), Var(log Y) ~ trigamma(phi0 + 1/2)
    alpha = math.sqrt(sp.polygamma(1, phi0 + 0.5) / s2)
    log_lam = (sp.psi(phi0 + 0.5)) / alpha - float(np.mean(lt))
    return (phi0, math.exp(log_lam), alpha)


def start_candidates(data) -> list[tuple[float, float, float]]:
    """Heuristic starting points: the weighted-Lindley moment fit (alpha = 1)
    and log-moment matches that adapt alpha to the spread of log t."""
    data = as_sample(data)
    out = [_wl_moment_start(data)]
    for phi0 in (0.5, 2.0):
        s = _log_moment_start(data, phi0)
        if s is not None and all(math.isfinite(v) and 1e-8 < v < 1e8 for v in s):
            out.append(s)
    return out


# ---------------------------------------------------------------------------
# the driver


def _objective(method: Method, data: LifetimeSample, notes: list) -> Callable[[np.ndarray], float]:
    n = len(data)
    lt = data.log_values
    i = np.arange(1, n + 1)
    pp = i / (n + 1.0)
    w = _wlse_weights(n)
    cm = (2.0 * i - 1.0) / (2.0 * n)
    ad_w = (2.0 * i - 1.0) / n
    moments = [float(np.mean(data.sorted_values**j)) for j in (1, 2, 3)]

    def theta_of(z):
        if np.any(np.abs(z) > _LOG_BOX):
            return None
        return np.exp(z)

    if method is Method.MLE:
        def f(z):
            th = theta_of(z)
            return math.inf if th is None else -float(np.sum(_log_pdf(*th, lt)))
    elif method is Method.ME:
        def f(z):
            th = theta_of(z)
            return math.inf if th is None else _me_objective(th, data, moments)
    elif method in (Method.OLSE, Method.WLSE, Method.CME):
        target = cm if method is Method.CME else pp
        weight = w if method is Method.WLSE else 1.0
        const = 1.0 / (12.0 * n) if method is Method.CME else 0.0

        def f(z):
            th = theta_of(z)
            if th is None:
                return math.inf
            F, _ = _cdf_sf(*th, lt)
            return const + float(np.sum(weight * (F - target) ** 2))
    elif method is Method.MPS:
        def f(z):
            th = theta_of(z)
            return math.inf if th is None else -float(np.mean(_log_spacings(th, data, clamp=True)))
    elif method is Method.ADE:
        def f(z):
            th = theta_of(z)
            if th is None:
                return math.inf
            F, S = _cdf_sf(*th, lt)
            logF = np.log(np.clip(F, F_FLOOR, F_CEIL))
            logS = np.log(np.clip(S, F_FLOOR, F_CEIL))
            return -n - float(np.sum(ad_w * (logF + logS[::-1])))
    elif method is Method.RADE:
        def f(z):
            th = theta_of(z)
            if th is None:
                return math.inf
            F, S = _cdf_sf(*th, lt)
            logS = np.log(np.clip(S, F_FLOOR, F_CEIL))
            return n / 2.0 - 2.0 * float(np.sum(F)) - float(np.sum(ad_w * logS[::-1]))
    else:  # pragma: no cover - closed enumeration
        raise ValueError(method)
    return f


def observed_information(method: Method, params: GwlParams, data: LifetimeSample) -> np.ndarray:
    """Numeric Hessian of the negative log-likelihood (MLE) or of the
    negative log spacing product (MPS), in natural parameters."""
    theta = params.as_array()
    if method is Method.MPS:
        def f(th):
            return -float(np.sum(_log_spacings(th, data, clamp=False)))
    else:
        def f(th):
            return -float(np.sum(_log_pdf(*th, data.log_values)))
    return numeric_hessian(f, theta)


def _covariance(method, params, data, notes):
    try:
        H = observed_information(method, params, data)
    except (FloatingPointError, ValueError) as exc:
        notes.append(f"observed information unavailable: {exc}")
        return None, None
    eig = np.linalg.eigvalsh(H)
    if not np.all(eig > 0):
        notes.append("observed information is not positive definite; no standard errors")
        return None, None
    cov = np.linalg.inv(H)
    cov = 0.5 * (cov + cov.T)
    return cov, np.sqrt(np.diag(cov))


def fit(
    method: "Method | str",
    data,
    x0: GwlParams | None = None,
    opts: MinimizeOptions | None = None,
    covariance: bool = True,
) -> FitResult:
    """Fit the GWL distribution with one of the eight estimators.

    Never raises on numerical trouble: problems surface as
    ``converged=False`` plus an explanation in ``notes``.
    """
    method = Method.parse(method)
    data = as_sample(data)
    opts = opts or MinimizeOptions()
    notes: list[str] = []
    f = _objective(method, data, notes)

    starts = [tuple(x0)] if x0 is not None else start_candidates(data)
    z0, f0 = None, math.inf
    for s in starts:
        z = np.log(np.asarray(s, dtype=float))
        v = f(z)
        if not math.isnan(v) and v < f0:
            z0, f0 = z, v
    if z0 is None:
        notes.append("objective not finite at any starting point")
        theta = np.asarray(starts[0], dtype=float)
        return FitResult(method, GwlParams(*theta), False, 0, math.nan, len(data), notes=notes)

    res = minimize(f, z0, opts)
    theta = np.exp(res.x)
    est = GwlParams(*theta)
    converged = res.converged
    if not converged:
        notes.append(f"simplex did not converge within {opts.max_iterations} iterations")

    if method is Method.MPS:
        objective_value = -res.fun
        if math.isfinite(objective_value) and np.any(np.isneginf(_log_spacings(theta, data, clamp=False))):
            notes.append("a spacing underflowed; spacings were floored at 1e-300")
    else:
        objective_value = res.fun
    if method is Method.ME:
        norm_res = math.sqrt(res.fun) if math.isfinite(res.fun) else math.inf
        if norm_res > ME_TOLERANCE:
            converged = False
            notes.append(f"moment residual norm {norm_res:.3g} exceeds {ME_TOLERANCE:g}")
    if method in (Method.ADE, Method.RADE):
        report: list[str] = []
        (ade_objective if method is Method.ADE else rade_objective)(est, data, report)
        notes.extend(report)

    out = FitResult(
        method=method,
        estimates=est,
        converged=converged,
        iterations=res.iterations,
        objective_value=float(objective_value),
        n=len(data),
        loglik=log_likelihood(est, data),
        notes=notes,
    )
    if covariance and method in (Method.MLE, Method.MPS) and not is_failure(out):
        out.covariance, out.stderr = _covariance(method, est, data, notes)
    return out


def wald_ci(result: FitResult, level: float = 0.95) -> list[tuple[float, float]]:
    """Per-coordinate Wald intervals ``estimate +/- z * se``, floored at 0."""
    if result.stderr is None:
        raise ValueError("no standard errors available for this fit")
    if not 0 < level < 1:
        raise ValueError("confidence level must lie in (0, 1)")
    z = float(norm.ppf(0.5 + level / 2.0))
    return [
        (max(0.0, est - z * se), est + z * se)
        for est, se in zip(result.estimates.as_array(), result.stderr)
    ]


# ---------------------------------------------------------------------------
# expected information


def log_pdf_hessian(params, t) -> np.ndarray:
    """Analytic second derivatives of log f(t) in (phi, lam, alpha); shape (..., 3, 3)."""
    phi, lam, alpha = _params(params)
    t = np.asarray(t, dtype=float)
    u = np.log(lam * t)
    x = np.exp(alpha * u)
    g = lam + x
    c = 1.0 / (lam + phi) ** 2
    h_pp = np.full_like(u, c - sp.polygamma(1, phi))
    h_pl = np.full_like(u, alpha / lam + c)
    h_pa = u
    a1 = 1.0 + alpha * x / lam
    h_ll = (
        -alpha * phi / lam**2 + alpha * (alpha - 1.0) * x / (lam**2 * g) - a1**2 / g**2
        - alpha * (alpha - 1.0) * x / lam**2 + c
    )
    h_la = phi / lam + x * (1.0 + alpha * u) / (lam * g) - a1 * x * u / g**2 - x * (1.0 + alpha * u) / lam
    h_aa = -1.0 / alpha**2 + lam * x * u**2 / g**2 - x * u**2
    H = np.stack(
        [
            np.stack([h_pp, h_pl, h_pa], -1),
            np.stack([h_pl, h_ll, h_la], -1),
            np.stack([h_pa, h_la, h_aa], -1),
        ],
        -2,
    )
    return H


def _expectation(params: GwlParams, g: Callable[[float], float]) -> float:
    """E[g(T)] via the gamma-mixture representation and quadrature."""
    phi, lam, alpha = params
    p = lam / (lam + phi)

    def in_t(y):
        return g(y ** (1.0 / alpha) / lam) if y > 0 else g(0.0)

    e1, _ = dist._gamma_expectation(in_t, phi)
    e2, _ = dist._gamma_expectation(in_t, phi + 1.0)
    return p * e1 + (1.0 - p) * e2


_NAMES = ("phi", "lambda", "alpha")


@dataclass
class FisherInformation:
    """Per-observation expected information, two ways.

    ``closed_form`` evaluates the closed-form element expressions (with their
    expectation terms integrated numerically); ``expected`` is
    ``-E[d^2 log f]`` integrated directly.  ``discrepancies`` lists the
    elements where the two disagree beyond ``tolerance``.
    """

    closed_form: np.ndarray
    expected: np.ndarray
    tolerance: float
    discrepancies: dict[str, tuple[float, float]]

    @property
    def matrix(self) -> np.ndarray:
        return self.expected

    def report(self) -> str:
        if not self.discrepancies:
            return "all closed-form elements agree with the integrated information"
        lines = [f"{k}: closed form {a:.10g} vs integrated {b:.10g}" for k, (a, b) in self.discrepancies.items()]
        return "\n".join(lines)


def _closed_form_elements(params: GwlParams) -> np.ndarray:
    phi, lam, alpha = params
    psi, psi1 = sp.psi(phi), sp.polygamma(1, phi)
    c = 1.0 / (lam + phi)

    def lt(t):
        return math.log(lam * t)

    def xa(t):
        return (lam * t) ** alpha

    i_pp = -c**2 + psi1
    i_pl = -alpha / lam + c**2
    i_pa = (-alpha * math.log(lam) - psi + alpha * math.log(lam) - c) / alpha
    i_ll = (
        alpha * phi / lam**2
        + (alpha - 1.0) * lam ** (alpha - 2.0) * (psi - alpha * math.log(lam) + c)
        + _expectation(params, lambda t: alpha * t**alpha * lam ** (alpha - 2.0) * ((alpha - 2.0) * lam - xa(t)) / (lam + xa(t)) if t > 0 else 0.0)
        - c**2
    )
    i_aa = (
        phi * (lam + phi + 1.0) * (psi**2 + psi) / (alpha**2 * (lam + phi))
        + 1.0 / alpha**2
        + (2.0 * (lam + 2.0 * phi + 1.0) * psi + 2.0) / (alpha**2 * (lam + phi))
        - _expectation(params, lambda t: lam * xa(t) * lt(t) ** 2 / (lam + xa(t)) if t > 0 else 0.0)
    )
    shifted = phi + 1.0 - 1.0 / alpha
    gamma_term = (
        (phi + lam + 1.0 - 1.0 / alpha) * math.exp(math.lgamma(shifted) - math.lgamma(phi)) / (lam + phi)
        if shifted > 0 else math.nan
    )
    i_al = (
        -phi / lam
        + (lam * (1.0 + phi * psi) + phi * (1.0 + (phi + 1.0) * sp.psi(phi + 1.0))) / (lam * (lam + phi))
        - _expectation(params, lambda t: (1.0 + alpha * lam ** (alpha - 1.0) * t**alpha) * xa(t) * lt(t) / (lam + xa(t)) ** 2 if t > 0 else 0.0)
        + gamma_term
        - _expectation(params, lambda t: (alpha * lam ** (alpha - 1.0) * t**alpha * lt(t) + (lam * t) ** (alpha - 1.0)) / (lam + xa(t)) if t > 0 else 0.0)
    )
    return np.array([[i_pp, i_pl, i_pa], [i_pl, i_ll, i_al], [i_pa, i_al, i_aa]])


def fisher_information(params: GwlParams, tolerance: float = 1e-4) -> FisherInformation:
    expected = np.empty((3, 3))
    for a in range(3):
        for b in range(a, 3):
            val = -_expectation(params, lambda t, a=a, b=b: float(log_pdf_hessian(params, t)[a, b]) if t > 0 else 0.0)
            expected[a, b] = expected[b, a] = val
    closed = _closed_form_elements(params)
    flags = {}
    for a in range(3):
        for b in range(a, 3):
            x, y = closed[a, b], expected[a, b]
            if not (math.isfinite(x) and abs(x - y) <= tolerance * max(1.0, abs(y))):
                flags[f"I[{_NAMES[a]},{_NAMES[b]}]"] = (float(x), float(y))
    return FisherInformation(closed, expected, tolerance, flags)
