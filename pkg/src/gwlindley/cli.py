"""Command-line front end: ``gwl {fit,compare,simulate,sample,ttt,props}``.

Exit codes: 0 success, 1 usage or input error, 2 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import distribution as dist
from .competitors import PARAM_NAMES, TAGS, competitor_cdf, competitor_fit
from .datasets import DatasetError, load_dataset
from .distribution import GwlParams
from .estimation import FitResult, Method, fit, wald_ci
from .gof import FittedModel, ModelComparison, aic_aicc, compare_models, ks_test, ttt_transform
from .simstudy import PRESETS, StudyConfig, export_report, run_study, stderr_progress
from .specfun import DomainError

__all__ = ["main", "build_parser", "run_comparison", "parse_study_config", "ConfigError"]

EXIT_OK, EXIT_INPUT, EXIT_NONCONVERGED = 0, 1, 2
GWL_NAMES = ("phi", "lambda", "alpha")
CLI_N_GRID = (50, 150, 250)
CLI_REPLICATES = 500


class ConfigError(ValueError):
    """Malformed simulation configuration; the message names the field."""


# ---------------------------------------------------------------------------
# rendering


def _num(x) -> str:
    if isinstance(x, bool) or x is None:
        return str(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".10g")


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return x


def render(fmt: str, header: Sequence[str], rows: Sequence[Sequence], meta: dict | None = None) -> str:
    if fmt == "json":
        records = [{h: _jsonable(v) for h, v in zip(header, r)} for r in rows]
        payload = {"rows": records}
        if meta:
            payload.update({k: _jsonable(v) for k, v in meta.items()})
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_num(v) if not isinstance(v, str) else v for v in r])
        return buf.getvalue()
    cells = [list(header)] + [[v if isinstance(v, str) else _num(v) for v in r] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    text = "\n".join(lines) + "\n"
    if meta:
        text += "".join(f"{k}: {v if isinstance(v, str) else _num(v)}\n" for k, v in meta.items())
    return text


# ---------------------------------------------------------------------------
# model comparison


@dataclass
class ComparisonOutcome:
    table: ModelComparison
    gwl_fit: FitResult
    gwl_choice: str


def run_comparison(data) -> ComparisonOutcome:
    """Fit GWL (by MLE and by MPS, keeping the higher log-likelihood) and the
    four competitors, then tabulate AIC, AICc and KS."""
    fits = [fit(Method.MLE, data), fit(Method.MPS, data)]
    usable = [f for f in fits if math.isfinite(f.loglik)]
    gwl = max(usable, key=lambda f: f.loglik) if usable else fits[0]
    models = [
        FittedModel(
            f"GWL ({gwl.method.value})",
            3,
            gwl.loglik,
            lambda t, p=gwl.estimates: dist.cdf(p, t),
            ok=math.isfinite(gwl.loglik),
            notes="; ".join(gwl.notes),
        )
    ]
    for tag in TAGS:
        cf = competitor_fit(tag, data)
        notes = list(cf.notes)
        models.append(
            FittedModel(
                tag, cf.k, cf.loglik, lambda t, m=cf.model: competitor_cdf(m, t),
                ok=math.isfinite(cf.loglik), notes="; ".join(notes),
            )
        )
    return ComparisonOutcome(compare_models(data, models), gwl, gwl.method.value)


# ---------------------------------------------------------------------------
# simulation config files


_CONFIG_KEYS = {"truth.phi", "truth.lambda", "truth.alpha", "n_grid", "replicates", "methods", "master_seed"}


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        else:
            out[key] = v
    return out


def _as_list(v) -> list:
    if isinstance(v, str):
        return [s for s in (p.strip() for p in v.replace(";", ",").split(",")) if s]
    return list(v)


def parse_study_config(text: str) -> StudyConfig:
    """Parse JSON or ``key = value`` lines into a :class:`StudyConfig`.

    Keys: truth.phi, truth.lambda, truth.alpha, n_grid, replicates, methods,
    master_seed.  List values are comma separated in the key=value form.
    """
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            raw = _flatten(json.loads(stripped))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
    else:
        raw = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected key = value")
            k, v = (s.strip() for s in line.split("=", 1))
            raw[k] = v
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config field(s): {', '.join(sorted(unknown))}")

    def get(key, conv, default=None):
        if key not in raw:
            if default is None:
                raise ConfigError(f"missing config field: {key}")
            return default
        try:
            return conv(raw[key])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key}: {raw[key]!r} ({exc})") from None

    try:
        truth = GwlParams(get("truth.phi", float), get("truth.lambda", float), get("truth.alpha", float))
    except DomainError as exc:
        raise ConfigError(f"bad value for truth: {exc}") from None
    n_grid = get("n_grid", lambda v: tuple(int(x) for x in _as_list(v)))
    replicates = get("replicates", int)
    methods = get("methods", lambda v: tuple(Method.parse(x) for x in _as_list(v)), tuple(Method))
    seed = get("master_seed", int, 2015)
    try:
        return StudyConfig(truth, n_grid, replicates, methods, seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


# ---------------------------------------------------------------------------
# commands


def _data(args):
    if not args.data:
        raise DatasetError("--data is required for this command")
    return load_dataset(args.data, corrected_aarset=args.corrected_aarset)


def _params(args) -> GwlParams:
    return GwlParams(args.phi, args.lam, args.alpha)


def cmd_fit(args) -> int:
    ds = _data(args)
    data = ds.values
    res = fit(args.method, data)
    n = len(data)
    aic = aicc = math.nan
    if math.isfinite(res.loglik):
        aic = -2.0 * res.loglik + 6.0
        if n > 4:
            aicc = aic_aicc(res.loglik, 3, n)[1]
    d, p = ks_test(data, lambda t: dist.cdf(res.estimates, t))
    cis = wald_ci(res, 0.95) if res.stderr is not None else [(math.nan, math.nan)] * 3
    se = res.stderr if res.stderr is not None else [math.nan] * 3
    rows = [
        (name, est, s, lo, hi)
        for name, est, s, (lo, hi) in zip(GWL_NAMES, res.estimates.as_array(), se, cis)
    ]
    meta = {
        "dataset": ds.name,
        "method": res.method.value,
        "n": n,
        "converged": res.converged,
        "iterations": res.iterations,
        "objective": res.objective_value,
        "loglik": res.loglik,
        "aic": aic,
        "aicc": aicc,
        "ks_stat": d,
        "ks_pvalue": p,
    }
    if res.notes:
        meta["notes"] = "; ".join(res.notes)
    if args.format == "csv":
        rows = rows + [(k, v, "", "", "") for k, v in meta.items()]
        meta = None
    sys.stdout.write(render(args.format, ("param", "estimate", "stderr", "ci95_lower", "ci95_upper"), rows, meta))
    return EXIT_OK if res.converged else EXIT_NONCONVERGED


def cmd_compare(args) -> int:
    ds = _data(args)
    out = run_comparison(ds.values)
    header = ("model", "k", "loglik", "aic", "aicc", "ks_stat", "ks_pvalue", "best")
    rows = [(r.name, r.k, r.loglik, r.aic, r.aicc, r.ks_stat, r.ks_pvalue, r.best) for r in out.table.rows]
    rows += [(name, 3, math.nan, math.nan, math.nan, math.nan, math.nan, False) for name, _ in out.table.excluded]
    meta = None
    if args.format != "csv":
        meta = {"dataset": ds.name, "n": out.table.n, "gwl_method": out.gwl_choice}
        for name, why in out.table.excluded:
            meta[f"excluded {name}"] = why
    sys.stdout.write(render(args.format, header, rows, meta))
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.config:
        try:
            with open(args.config) as fh:
                config = parse_study_config(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
    else:
        base = PRESETS[args.preset]
        config = StudyConfig(base.truth, CLI_N_GRID, CLI_REPLICATES, base.methods, base.master_seed)
    overrides = {}
    if args.replicates is not None:
        overrides["replicates"] = args.replicates
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.n_grid:
        overrides["n_grid"] = tuple(int(v) for v in _as_list(args.n_grid))
    if args.methods:
        overrides["methods"] = tuple(Method.parse(m) for m in _as_list(args.methods))
    if overrides:
        fields = dict(
            truth=config.truth, n_grid=config.n_grid, replicates=config.replicates,
            methods=config.methods, master_seed=config.master_seed,
        )
        fields.update(overrides)
        config = StudyConfig(**fields)
    print(
        f"simulating truth={tuple(config.truth)} n={list(config.n_grid)} N={config.replicates} "
        f"methods={[m.value for m in config.methods]}",
        file=sys.stderr,
    )
    report = run_study(config, workers=args.workers, progress=stderr_progress)
    if args.out:
        export_report(report, args.out)
    if args.format == "csv":
        if not args.out:
            sys.stdout.write(export_report(report))
    else:
        sys.stdout.write(render(args.format, ("method", "n", "param", "mre", "mse", "failure_proportion"), list(report.rows())))
    return EXIT_OK


def cmd_sample(args) -> int:
    draws = dist.sample(_params(args), args.n, seed=args.seed)
    rows = [(float(v),) for v in draws.values]
    sys.stdout.write(render(args.format, ("t",), rows))
    return EXIT_OK


def cmd_ttt(args) -> int:
    curve = ttt_transform(_data(args).values)
    sys.stdout.write(render(args.format, ("u", "G"), curve.points))
    return EXIT_OK


def cmd_props(args) -> int:
    params = _params(args)
    rows: list[tuple] = [("mean", dist.mean(params)), ("variance", dist.variance(params))]
    probs = (0.1, 0.25, 0.5, 0.75, 0.9)
    qs = [dist.quantile(params, p) for p in probs]
    rows += [(f"quantile({p:g})", q) for p, q in zip(probs, qs)]
    rows.append(("shannon_entropy", dist.shannon_entropy(params)))
    for rho in (0.5, 2.0):
        try:
            rows.append((f"renyi_entropy({rho:g})", dist.renyi_entropy(params, rho)))
        except DomainError:
            rows.append((f"renyi_entropy({rho:g})", math.inf))
    rows += [(f"mrl({q:.6g})", dist.mrl(params, q)) for q in qs]
    rows.append(("hazard_shape", dist.hazard_shape(params)))
    sys.stdout.write(render(args.format, ("quantity", "value"), rows))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "csv", "json"), default=None, help="table (csv for simulate)")
    common.add_argument("--seed", type=int, default=None, help="random seed")
    common.add_argument("--data", default=None, help="aarset, cantareira or a path to a file of lifetimes")
    common.add_argument("--corrected-aarset", action="store_true", help="use 75 in place of the bundled 15")

    gwl = argparse.ArgumentParser(add_help=False)
    gwl.add_argument("--phi", type=float, default=1.0)
    gwl.add_argument("--lambda", dest="lam", type=float, default=1.0)
    gwl.add_argument("--alpha", type=float, default=1.0)

    parser = argparse.ArgumentParser(prog="gwl", description="Generalized weighted Lindley lifetime toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", parents=[common], help="fit the GWL distribution to a data set")
    p.add_argument("--method", type=Method.parse, default=Method.MLE, help="MLE, ME, OLSE, WLSE, MPS, CME, ADE or RADE")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("compare", parents=[common], help="compare GWL with GG, GW, GEP and EW")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("simulate", parents=[common], help="Monte-Carlo comparison of the estimators")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--preset", choices=sorted(PRESETS), default="paper-a")
    src.add_argument("--config", help="JSON or key=value study description")
    p.add_argument("--replicates", type=int, default=None)
    p.add_argument("--n-grid", default=None, help="comma-separated sample sizes")
    p.add_argument("--methods", default=None, help="comma-separated method tags")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None, help="write the CSV report here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sample", parents=[common, gwl], help="draw from the GWL distribution")
    p.add_argument("--n", type=int, default=10)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("ttt", parents=[common], help="scaled TTT curve of a data set")
    p.set_defaults(func=cmd_ttt)

    p = sub.add_parser("props", parents=[common, gwl], help="distributional properties for given parameters")
    p.set_defaults(func=cmd_props)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.format is None:
        args.format = "csv" if args.command == "simulate" else "table"
    try:
        return args.func(args)
    except (DatasetError, ConfigError, DomainError, ValueError, OSError) as exc:
        print(f"gwl {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
