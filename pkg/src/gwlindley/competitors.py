"""Three-parameter lifetime models used as benchmarks for the GWL fit.

Parameter triples, in order:

===  =====================  ==============================================
GG   (beta, phi, alpha)     f = alpha beta^(alpha phi) t^(alpha phi - 1) e^{-(beta t)^alpha} / Gamma(phi)
GW   (alpha, phi, lam)      f = (alpha phi)^-1 (t/phi)^(1/alpha - 1) (1 - lam (t/phi)^(1/alpha))^(1/lam - 1)
GEP  (alpha, beta, phi)     exponentiated exponential-Poisson
EW   (alpha, beta, phi)     F = (1 - e^{-(t/beta)^alpha})^phi
===  =====================  ==============================================

GW's ``lam`` is real; for ``lam > 0`` the support is ``t < phi * lam**(-alpha)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special as sp

from .samples import as_sample
from .specfun import DomainError, MinimizeOptions, minimize, reg_inc_gamma_logx

__all__ = [
    "TAGS",
    "PARAM_NAMES",
    "CompetitorModel",
    "CompetitorFit",
    "competitor_log_pdf",
    "competitor_pdf",
    "competitor_cdf",
    "competitor_fit",
    "GW_LAMBDA_MAX",
]

TAGS = ("GG", "GW", "GEP", "EW")
PARAM_NAMES = {
    "GG": ("beta", "phi", "alpha"),
    "GW": ("alpha", "phi", "lambda"),
    "GEP": ("alpha", "beta", "phi"),
    "EW": ("alpha", "beta", "phi"),
}
# Above 1 the GW density is unbounded at its support endpoint, so the
# likelihood has no maximum; fits are confined to lam <= 1.
GW_LAMBDA_MAX = 1.0
_LOG_BOX = 700.0


@dataclass(frozen=True)
class CompetitorModel:
    tag: str
    params: tuple[float, float, float]

    def __post_init__(self):
        tag = self.tag.upper()
        if tag not in TAGS:
            raise ValueError(f"unknown competitor {self.tag!r}; choose from {TAGS}")
        object.__setattr__(self, "tag", tag)
        p = tuple(float(v) for v in self.params)
        if len(p) != 3 or not all(math.isfinite(v) for v in p):
            raise DomainError(f"{tag} needs three finite parameters, got {self.params!r}")
        positive = p[:2] if tag == "GW" else p
        if any(v <= 0 for v in positive):
            raise DomainError(f"{tag} parameters {PARAM_NAMES[tag]} must be positive (GW lambda may be any real), got {p}")
        object.__setattr__(self, "params", p)

    def upper_support(self) -> float:
        if self.tag == "GW" and self.params[2] > 0:
            alpha, phi, lam = self.params
            return phi * lam ** (-alpha)
        return math.inf


@dataclass
class CompetitorFit:
    model: CompetitorModel
    converged: bool
    iterations: int
    loglik: float
    n: int
    notes: list[str] = field(default_factory=list)

    @property
    def tag(self) -> str:
        return self.model.tag

    @property
    def k(self) -> int:
        return 3


# ---------------------------------------------------------------------------
# log densities on raw arrays


def _log1mexp(w):
    """log(1 - e^w) for w <= 0."""
    w = np.asarray(w, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(w > -math.log(2.0), np.log(-np.expm1(w)), np.log1p(-np.exp(w)))


def _gg(th, t):
    beta, phi, alpha = th
    lt = np.log(t)
    with np.errstate(over="ignore"):
        return (
            math.log(alpha) - math.lgamma(phi) + alpha * phi * math.log(beta)
            + (alpha * phi - 1.0) * lt - np.exp(alpha * (math.log(beta) + lt))
        )


def _gw_core(th, t):
    alpha, phi, lam = th
    lx = np.log(t / phi) / alpha
    x = np.exp(lx)
    inside = 1.0 - lam * x > 0 if lam > 0 else np.ones_like(x, dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        l1 = np.log1p(-lam * x)
    return lx, x, inside, l1


def _gw(th, t):
    alpha, phi, lam = th
    lx, x, inside, l1 = _gw_core(th, t)
    if lam == 0.0:
        tail = -x
    else:
        tail = (1.0 / lam - 1.0) * l1
    with np.errstate(invalid="ignore"):
        out = -math.log(alpha * phi) + (1.0 - alpha) * lx + tail
    return np.where(inside, out, -np.inf)


def _gep(th, t):
    alpha, beta, phi = th
    w = phi * np.expm1(-beta * t)  # -phi + phi e^{-beta t}, in (-phi, 0]
    return (
        math.log(alpha * beta * phi) - alpha * float(_log1mexp(-phi)) - beta * t + w
        + (alpha - 1.0) * _log1mexp(w)
    )


def _ew(th, t):
    alpha, beta, phi = th
    lz = np.log(t / beta)
    with np.errstate(over="ignore"):
        y = np.exp(alpha * lz)
    return math.log(alpha * phi / beta) + (alpha - 1.0) * lz - y + (phi - 1.0) * _log1mexp(-y)


_LOG_PDF = {"GG": _gg, "GW": _gw, "GEP": _gep, "EW": _ew}


def _unwrap(arr):
    return arr.item() if np.ndim(arr) == 0 else arr


def competitor_log_pdf(model: CompetitorModel, t):
    """Log density; ``-inf`` outside the support (t <= 0, or beyond GW's endpoint)."""
    t = np.asarray(t, dtype=float)
    pos = t > 0
    out = np.full(t.shape, -np.inf)
    if np.any(pos):
        out[pos] = _LOG_PDF[model.tag](model.params, t[pos])
    return _unwrap(out)


def competitor_pdf(model: CompetitorModel, t):
    return _unwrap(np.exp(np.asarray(competitor_log_pdf(model, t))))


def competitor_cdf(model: CompetitorModel, t):
    t = np.asarray(t, dtype=float)
    tp = np.where(t > 0, t, 1.0)
    th = model.params
    if model.tag == "GG":
        beta, phi, alpha = th
        out, _ = reg_inc_gamma_logx(phi, alpha * np.log(beta * tp))
    elif model.tag == "EW":
        alpha, beta, phi = th
        with np.errstate(over="ignore"):
            out = np.exp(phi * _log1mexp(-((tp / beta) ** alpha)))
    elif model.tag == "GEP":
        alpha, beta, phi = th
        w = phi * np.expm1(-beta * tp)
        out = np.exp(alpha * (_log1mexp(w) - float(_log1mexp(-phi))))
    else:
        alpha, phi, lam = th
        _, x, inside, l1 = _gw_core(th, tp)
        with np.errstate(invalid="ignore"):
            out = -np.expm1(-x) if lam == 0.0 else -np.expm1(l1 / lam)
        out = np.where(inside, out, 1.0)
    out = np.where(t > 0, np.clip(out, 0.0, 1.0), 0.0)
    return _unwrap(out)


# ---------------------------------------------------------------------------
# fitting


def _starts(tag: str, t: np.ndarray):
    m = float(np.mean(t))
    if tag == "GG":
        return [(1.0 / m, 1.0, 1.0), (1.0, 1.0, 1.0)]
    if tag == "GW":
        return [(1.0, m, 0.1), (1.0, m, -0.1), (1.0, 1.0, 1.0), (1.0, float(np.max(t)), 0.5)]
    if tag == "GEP":
        return [(1.0, 1.0 / m, 1.0), (1.0, 1.0, 1.0)]
    return [(1.0, m, 1.0), (1.0, 1.0, 1.0)]


def _to_theta(tag, z):
    if np.any(np.abs(z) > _LOG_BOX):
        return None
    th = np.exp(z)
    if tag == "GW":
        th[2] = z[2]
        if z[2] > GW_LAMBDA_MAX:
            return None
    return th


def _to_z(tag, th):
    th = np.asarray(th, dtype=float)
    z = np.log(np.abs(th))
    if tag == "GW":
        z[2] = th[2]
    return z


def competitor_fit(tag: str, data, opts: MinimizeOptions | None = None) -> CompetitorFit:
    """Maximum likelihood by Nelder-Mead from several starts; best wins.

    Positive parameters are optimized on the log scale, GW's lambda on its
    own scale.  Points whose support excludes an observation score +inf.
    """
    tag = tag.upper()
    if tag not in TAGS:
        raise ValueError(f"unknown competitor {tag!r}; choose from {TAGS}")
    data = as_sample(data)
    t = data.sorted_values
    lp = _LOG_PDF[tag]
    opts = opts or MinimizeOptions(max_iterations=6000, x_tol=1e-10, f_tol=1e-12, restarts=2)

    def nll(z):
        th = _to_theta(tag, z)
        if th is None:
            return math.inf
        with np.errstate(all="ignore"):
            v = -float(np.sum(lp(th, t)))
        return v if math.isfinite(v) else math.inf

    best = None
    for s in _starts(tag, t):
        z0 = _to_z(tag, s)
        if not math.isfinite(nll(z0)):
            continue
        res = minimize(nll, z0, opts)
        if best is None or res.fun < best.fun:
            best = res
    notes: list[str] = []
    if best is None:
        notes.append("log-likelihood not finite at any start")
        return CompetitorFit(CompetitorModel(tag, _starts(tag, t)[0]), False, 0, -math.inf, len(t), notes)
    th = _to_theta(tag, best.x)
    converged = best.converged
    if not converged:
        notes.append("simplex did not converge")
    if np.any(np.abs(best.x) > 0.9 * _LOG_BOX):
        notes.append("estimate drifted toward the parameter-space boundary")
    if tag == "GW" and th[2] > GW_LAMBDA_MAX - 1e-6:
        notes.append(f"GW lambda at its cap {GW_LAMBDA_MAX:g}")
    return CompetitorFit(CompetitorModel(tag, tuple(th)), converged, best.iterations, -best.fun, len(t), notes)
