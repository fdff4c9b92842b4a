"""Special functions and generic numerical kernels.

Gamma-family functions are thin, domain-checked wrappers over
:mod:`scipy.special`; the upper incomplete gamma also has a log-space
continued-fraction path for arguments where the regularized value
underflows.  Quadrature, root finding and simplex minimization wrap the
corresponding :mod:`scipy` routines behind small, explicit contracts.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate as _integrate
from scipy import optimize as _optimize
from scipy import special as _special

__all__ = [
    "DomainError",
    "BracketError",
    "QuadratureSpec",
    "QuadResult",
    "RootBracket",
    "MinimizeOptions",
    "MinimizeResult",
    "ln_gamma",
    "digamma",
    "trigamma",
    "reg_inc_gamma",
    "log_reg_inc_gamma_upper",
    "reg_inc_gamma_logx",
    "log_reg_inc_gamma_upper_logx",
    "integrate",
    "find_root",
    "minimize",
    "numeric_hessian",
]

EPS = np.finfo(float).eps


class DomainError(ValueError):
    """Argument outside the mathematical domain of a function."""


class BracketError(ValueError):
    """Root bracket endpoints do not straddle a sign change."""


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-13
    rel_tol: float = 1e-11
    max_subdivisions: int = 500

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    converged: bool

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class RootBracket:
    lo: float
    hi: float
    tol: float = 1e-12

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty bracket [{self.lo}, {self.hi}]")
        if not self.tol > 0:
            raise ValueError("bracket tolerance must be positive")


@dataclass(frozen=True)
class MinimizeOptions:
    max_iterations: int = 4000
    x_tol: float = 1e-8
    f_tol: float = 1e-10
    restarts: int = 1
    initial_step: float = 0.2

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if not (self.x_tol > 0 and self.f_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.restarts < 0:
            raise ValueError("restarts must be non-negative")


@dataclass(frozen=True)
class MinimizeResult:
    x: np.ndarray
    fun: float
    converged: bool
    iterations: int
    evaluations: int = 0


def _check_positive(name, x):
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError(f"{name} requires finite positive arguments, got {x!r}")
    return arr


def _unwrap(arr):
    return arr.item() if np.ndim(arr) == 0 else arr


def ln_gamma(x):
    """log Gamma(x) for x > 0."""
    return _unwrap(_special.gammaln(_check_positive("ln_gamma", x)))


def digamma(x):
    return _unwrap(_special.psi(_check_positive("digamma", x)))


def trigamma(x):
    return _unwrap(_special.polygamma(1, _check_positive("trigamma", x)))


def reg_inc_gamma(s, x, tail: str = "lower"):
    """Regularized incomplete gamma P(s, x) (``tail="lower"``) or Q(s, x).

    Both tails are computed directly, never as ``1 - other``, so the small
    tail keeps full relative accuracy.
    """
    s = _check_positive("reg_inc_gamma", s)
    x = np.asarray(x, dtype=float)
    if np.any(np.isnan(x)) or np.any(x < 0):
        raise DomainError(f"reg_inc_gamma requires x >= 0, got {x!r}")
    if tail == "lower":
        out = _special.gammainc(s, x)
    elif tail == "upper":
        out = _special.gammaincc(s, x)
    else:
        raise ValueError(f"tail must be 'lower' or 'upper', not {tail!r}")
    return _unwrap(out)


def _log_upper_cf(s, x, iterations=300):
    # Modified Lentz evaluation of the continued fraction for Gamma(s, x);
    # converges quickly for x > s + 1.
    tiny = 1e-300
    b = x + 1.0 - s
    c = np.full_like(x, 1.0 / tiny)
    d = 1.0 / b
    h = d.copy()
    for i in range(1, iterations + 1):
        an = -i * (i - s)
        b = b + 2.0
        d = an * d + b
        d = np.where(np.abs(d) < tiny, tiny, d)
        c = b + an / c
        c = np.where(np.abs(c) < tiny, tiny, c)
        d = 1.0 / d
        delta = d * c
        h = h * delta
        if np.all(np.abs(delta - 1.0) < 1e-16):
            break
    return s * np.log(x) - x - _special.gammaln(s) + np.log(h)


def log_reg_inc_gamma_upper(s, x):
    """log Q(s, x), finite even where Q itself underflows."""
    s, x = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(x, dtype=float))
    with np.errstate(divide="ignore"):
        out = np.log(_special.gammaincc(s, x))
    deep = (out < -600.0) & np.isfinite(x) & (x > s + 1.0)
    if np.any(deep):
        out = np.array(out, dtype=float)
        out[deep] = _log_upper_cf(s[deep], x[deep])
    return _unwrap(out)


# Below this log-argument x itself may underflow while P(s, x) ~ x^s / Gamma(s+1)
# is still far from negligible (s small), so the leading series term is used.
_TINY_LOG_X = -600.0


def _small_x_log_p(s, log_x):
    return s * log_x - _special.gammaln(s + 1.0)


def reg_inc_gamma_logx(s, log_x):
    """(P(s, x), Q(s, x)) given ``log x``.

    Useful when x = exp(alpha * log(...)) under- or overflows: for
    ``log x < -600`` the leading series term is exact to double precision.
    """
    s, lx = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(log_x, dtype=float))
    with np.errstate(over="ignore"):
        x = np.exp(lx)
    P = np.asarray(_special.gammainc(s, x), dtype=float)
    Q = np.asarray(_special.gammaincc(s, x), dtype=float)
    tiny = lx < _TINY_LOG_X
    if np.any(tiny):
        lp = _small_x_log_p(s[tiny], lx[tiny])
        P = P.copy()
        Q = Q.copy()
        P[tiny] = np.exp(lp)
        Q[tiny] = -np.expm1(lp)
    return _unwrap(P), _unwrap(Q)


def log_reg_inc_gamma_upper_logx(s, log_x):
    """log Q(s, x) given ``log x``; finite over the whole double range of x."""
    s, lx = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(log_x, dtype=float))
    with np.errstate(over="ignore"):
        x = np.exp(lx)
    out = np.array(log_reg_inc_gamma_upper(s, x), dtype=float, ndmin=1).reshape(lx.shape)
    tiny = lx < _TINY_LOG_X
    if np.any(tiny):
        lp = _small_x_log_p(s[tiny], lx[tiny])
        with np.errstate(divide="ignore"):
            out[tiny] = np.where(lp > -math.log(2.0), np.log(-np.expm1(lp)), np.log1p(-np.exp(lp)))
    return _unwrap(out)


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float = math.inf,
    spec: QuadratureSpec | None = None,
    scale: float = 1.0,
    points: Sequence[float] | None = None,
) -> QuadResult:
    """Adaptive Gauss-Kronrod quadrature of ``f`` over ``[a, b]``.

    A semi-infinite range ``[a, inf)`` is mapped to ``[0, 1)`` through
    ``y = a + scale * u / (1 - u)``; ``scale`` should be of the order of the
    integrand's decay length.  Failing to meet the tolerance does not raise:
    the best estimate comes back with ``converged=False``.
    """
    spec = spec or QuadratureSpec()
    opts = dict(epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=spec.max_subdivisions, full_output=1)
    if math.isinf(b):
        def g(u):
            if u >= 1.0:
                return 0.0
            w = 1.0 - u
            val = f(a + scale * u / w)
            return val * scale / (w * w) if val != 0.0 else 0.0

        if points:
            pts = [(p - a) / (scale + p - a) for p in points if p > a]
            opts["points"] = sorted(pts)
        lo, hi, func = 0.0, 1.0, g
    else:
        if points:
            opts["points"] = [p for p in points if a < p < b]
        lo, hi, func = a, b, f
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _integrate.IntegrationWarning)
        out = _integrate.quad(func, lo, hi, **opts)
    value, err = out[0], out[1]
    # quad appends a warning message only when it gave up
    ok = len(out) == 3 and np.isfinite(value)
    return QuadResult(float(value), float(err), bool(ok))


def find_root(f: Callable[[float], float], bracket: RootBracket) -> float:
    """Brent's method on a sign-changing bracket."""
    flo, fhi = f(bracket.lo), f(bracket.hi)
    if flo == 0.0:
        return bracket.lo
    if fhi == 0.0:
        return bracket.hi
    if np.sign(flo) == np.sign(fhi):
        raise BracketError(
            f"f does not change sign on [{bracket.lo}, {bracket.hi}] (f(lo)={flo}, f(hi)={fhi})"
        )
    return float(_optimize.brentq(f, bracket.lo, bracket.hi, xtol=bracket.tol, rtol=4 * EPS, maxiter=500))


def _simplex(x0, step):
    k = len(x0)
    sim = np.tile(x0, (k + 1, 1))
    for i in range(k):
        sim[i + 1, i] += step
    return sim


def minimize(
    f: Callable[[np.ndarray], float],
    x0: Sequence[float],
    opts: MinimizeOptions | None = None,
) -> MinimizeResult:
    """Derivative-free Nelder-Mead minimization with optional restarts.

    NaN objective values are treated as +inf.  Convergence requires both the
    simplex diameter (``x_tol``) and the spread of objective values
    (``f_tol``) criteria; running out of iterations is reported through
    ``converged=False``, never raised.
    """
    opts = opts or MinimizeOptions()
    x0 = np.asarray(x0, dtype=float)

    def safe(x):
        v = f(x)
        return math.inf if v is None or math.isnan(v) else float(v)

    if not math.isfinite(safe(x0)):
        raise DomainError("objective is not finite at the starting point")

    total_it = total_ev = 0
    x, fun, converged = x0, math.inf, False
    for attempt in range(opts.restarts + 1):
        remaining = opts.max_iterations - total_it
        if remaining <= 0:
            break
        res = _optimize.minimize(
            safe,
            x,
            method="Nelder-Mead",
            options=dict(
                maxiter=remaining,
                maxfev=4 * remaining,
                xatol=opts.x_tol,
                fatol=opts.f_tol,
                initial_simplex=_simplex(x, opts.initial_step if attempt == 0 else opts.initial_step / 4),
                adaptive=len(x) > 2,
            ),
        )
        total_it += int(res.nit)
        total_ev += int(res.nfev)
        improved = res.fun < fun - opts.f_tol
        if res.fun <= fun:
            x, fun = np.asarray(res.x, dtype=float), float(res.fun)
        converged = bool(res.success) and math.isfinite(fun)
        if attempt > 0 and not improved and converged:
            break
    return MinimizeResult(x=x, fun=fun, converged=converged, iterations=total_it, evaluations=total_ev)


def numeric_hessian(f: Callable[[np.ndarray], float], x: Sequence[float], step: float | None = None) -> np.ndarray:
    """Central-difference Hessian, symmetrized.

    Step per coordinate is ``step * max(|x_i|, 1)`` with ``step`` defaulting
    to the cube root of machine epsilon.  Raises ``FloatingPointError``
    naming the offending entries if any entry is not finite.
    """
    x = np.asarray(x, dtype=float)
    k = len(x)
    rel = EPS ** (1.0 / 3.0) if step is None else step
    h = rel * np.maximum(np.abs(x), 1.0)
    f0 = f(x)
    H = np.empty((k, k))
    for i in range(k):
        ei = np.zeros(k)
        ei[i] = h[i]
        H[i, i] = (f(x + ei) - 2.0 * f0 + f(x - ei)) / h[i] ** 2
        for j in range(i + 1, k):
            ej = np.zeros(k)
            ej[j] = h[j]
            H[i, j] = (f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)) / (4.0 * h[i] * h[j])
            H[j, i] = H[i, j]
    H = 0.5 * (H + H.T)
    bad = np.argwhere(~np.isfinite(H))
    if len(bad):
        raise FloatingPointError(f"non-finite Hessian entries at {[tuple(b) for b in bad]}")
    return H
