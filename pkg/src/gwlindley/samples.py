"""Validated containers for positive lifetime observations."""

from __future__ import annotations

from functools import cached_property
from typing import Iterable

import numpy as np


class LifetimeSample:
    """An immutable collection of strictly positive, finite observations.

    The ascending order statistics are computed once and cached; every
    estimator that needs ``t_(1) <= ... <= t_(n)`` reads ``sorted_values``.
    """

    def __init__(self, values: Iterable[float]):
        arr = np.array(list(values) if not isinstance(values, np.ndarray) else values, dtype=float).ravel()
        if arr.size == 0:
            raise ValueError("a lifetime sample needs at least one observation")
        bad = np.flatnonzero(~np.isfinite(arr) | (arr <= 0))
        if bad.size:
            i = int(bad[0])
            raise ValueError(f"observation {i} is not a positive finite number: {arr[i]!r}")
        arr.setflags(write=False)
        self._values = arr

    @property
    def values(self) -> np.ndarray:
        return self._values

    @cached_property
    def sorted_values(self) -> np.ndarray:
        out = np.sort(self._values)
        out.setflags(write=False)
        return out

    @cached_property
    def log_values(self) -> np.ndarray:
        out = np.log(self.sorted_values)
        out.setflags(write=False)
        return out

    @cached_property
    def tie_index(self) -> np.ndarray:
        """Positions ``i`` (0-based, into sorted values) with ``t_(i) == t_(i-1)``."""
        return np.flatnonzero(np.diff(self.sorted_values) == 0) + 1

    def __len__(self):
        return self._values.size

    def __iter__(self):
        return iter(self._values.tolist())

    def __repr__(self):
        return f"LifetimeSample(n={len(self)}, min={self.sorted_values[0]:g}, max={self.sorted_values[-1]:g})"

    def scaled(self, c: float) -> "LifetimeSample":
        return LifetimeSample(self._values * c)


def as_sample(data) -> LifetimeSample:
    return data if isinstance(data, LifetimeSample) else LifetimeSample(data)
