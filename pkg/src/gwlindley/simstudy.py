"""Monte-Carlo comparison of the GWL estimators.

For each sample size ``n`` and replicate ``j`` a sample is drawn with a
seed derived from ``(master_seed, n, j)`` alone, every configured method is
fitted to that same sample, and per-method mean relative estimates (MRE),
mean squared errors (MSE) and failure proportions are accumulated.
"""

from __future__ import annotations

import csv
import io
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, TextIO

import numpy as np

from . import distribution as dist
from .distribution import GwlParams
from .estimation import Method, fit, is_failure
from .specfun import MinimizeOptions

__all__ = [
    "PRESETS",
    "StudyConfig",
    "MethodSummary",
    "StudyReport",
    "replicate_rng",
    "run_replicate",
    "run_study",
    "export_report",
    "CSV_HEADER",
]

CSV_HEADER = ("method", "n", "param", "mre", "mse", "failure_proportion")
PARAM_LABELS = ("phi", "lambda", "alpha")

# Looser than the interactive default: the study makes thousands of fits and
# differences below 1e-6 in log-parameters are far inside Monte-Carlo noise.
STUDY_OPTIONS = MinimizeOptions(x_tol=1e-6, f_tol=1e-8, restarts=1)


@dataclass(frozen=True)
class StudyConfig:
    truth: GwlParams
    n_grid: tuple[int, ...]
    replicates: int
    methods: tuple[Method, ...] = tuple(Method)
    master_seed: int = 2015
    opts: MinimizeOptions = STUDY_OPTIONS

    def __post_init__(self):
        object.__setattr__(self, "n_grid", tuple(int(n) for n in self.n_grid))
        object.__setattr__(self, "methods", tuple(Method.parse(m) for m in self.methods))
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if not self.n_grid or min(self.n_grid) < 4:
            raise ValueError("every sample size must be >= 4")
        if not self.methods:
            raise ValueError("at least one method is required")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")


PRESETS: dict[str, StudyConfig] = {
    # main study truth
    "paper-a": StudyConfig(GwlParams(2.0, 0.5, 0.1), tuple(range(50, 251, 10)), 10_000),
    # alternative truth
    "paper-b": StudyConfig(GwlParams(0.5, 0.7, 1.5), tuple(range(50, 251, 10)), 10_000),
}


@dataclass
class MethodSummary:
    method: Method
    n: int
    replicates: int
    successes: int
    mre: np.ndarray
    mse: np.ndarray

    @property
    def failure_proportion(self) -> float:
        return 1.0 - self.successes / self.replicates


@dataclass
class StudyReport:
    config: StudyConfig
    summaries: dict[tuple[Method, int], MethodSummary] = field(default_factory=dict)
    # raw estimates per n, shape (replicates, methods, 3); NaN rows are failures
    estimates: dict[int, np.ndarray] = field(default_factory=dict)

    def __getitem__(self, key: tuple[Method | str, int]) -> MethodSummary:
        m, n = key
        return self.summaries[(Method.parse(m), int(n))]

    def rows(self) -> Iterable[tuple]:
        for m in self.config.methods:
            for n in self.config.n_grid:
                s = self.summaries[(m, n)]
                for i, label in enumerate(PARAM_LABELS):
                    yield (m.value, n, label, float(s.mre[i]), float(s.mse[i]), s.failure_proportion)


def replicate_rng(master_seed: int, n: int, j: int) -> np.random.Generator:
    """Independent stream for replicate ``j`` at sample size ``n``."""
    return np.random.default_rng(np.random.SeedSequence([master_seed, n, j]))


def run_replicate(config: StudyConfig, n: int, j: int) -> np.ndarray:
    """Estimates for every method on one sample; rows of NaN mark failures."""
    data = dist.sample(config.truth, n, rng=replicate_rng(config.master_seed, n, j))
    out = np.full((len(config.methods), 3), np.nan)
    for k, m in enumerate(config.methods):
        try:
            r = fit(m, data, opts=config.opts, covariance=False)
        except Exception:  # noqa: BLE001 - any crash counts as a failed fit
            continue
        if not is_failure(r):
            out[k] = r.estimates.as_array()
    return out


def _task(args):
    config, n, j = args
    return run_replicate(config, n, j)


def run_study(
    config: StudyConfig,
    workers: int = 1,
    progress: Callable[[int, int], None] | None = None,
) -> StudyReport:
    """Run the full grid.  Results do not depend on ``workers``: each
    replicate has its own stream and estimates are reduced in index order."""
    truth = config.truth.as_array()
    report = StudyReport(config)
    total = len(config.n_grid) * config.replicates
    done = 0
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        for n in config.n_grid:
            jobs = [(config, n, j) for j in range(config.replicates)]
            results = pool.map(_task, jobs, chunksize=8) if pool else map(_task, jobs)
            est = np.empty((config.replicates, len(config.methods), 3))
            for j, r in enumerate(results):
                est[j] = r
                done += 1
                if progress:
                    progress(done, total)
            report.estimates[n] = est
            for k, m in enumerate(config.methods):
                e = est[:, k, :]
                ok = ~np.isnan(e[:, 0])
                good = e[ok]
                if len(good):
                    mre = np.mean(good / truth, axis=0)
                    mse = np.mean((good - truth) ** 2, axis=0)
                else:
                    mre = mse = np.full(3, math.nan)
                report.summaries[(m, n)] = MethodSummary(m, n, config.replicates, int(ok.sum()), mre, mse)
    finally:
        if pool:
            pool.shutdown()
    return report


def export_report(report: StudyReport, out: TextIO | str | None = None) -> str:
    """Long-format CSV, one row per (method, n, parameter).

    Numbers use ``repr`` so that parsing the file returns identical floats.
    Returns the text and also writes it to ``out`` (a path or stream) if given.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for m, n, label, mre, mse, fp in report.rows():
        w.writerow([m, n, label, repr(mre), repr(mse), repr(fp)])
    text = buf.getvalue()
    if isinstance(out, str):
        with open(out, "w", newline="") as fh:
            fh.write(text)
    elif out is not None:
        out.write(text)
    return text


def stderr_progress(done: int, total: int) -> None:
    step = max(1, total // 20)
    if done % step == 0 or done == total:
        print(f"  {done}/{total} replicates", file=sys.stderr, flush=True)
