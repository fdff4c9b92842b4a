"""Dataset ingestion: bundled example datasets and plain-text files."""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .samples import LifetimeSample

BUILTIN = ("aarset", "cantareira")

_SPLIT = re.compile(r"[\s,;]+")


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class Dataset:
    name: str
    values: LifetimeSample
    provenance: str

    def __len__(self):
        return len(self.values)


def parse_values(text: str, source: str = "<string>") -> list[float]:
    """Parse whitespace/comma separated positive reals; ``#`` starts a comment line."""
    out: list[float] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        for tok in filter(None, _SPLIT.split(line)):
            try:
                v = float(tok)
            except ValueError:
                raise DatasetError(f"{source}, line {lineno}: cannot parse {tok!r} as a number") from None
            if not v > 0 or v == float("inf"):
                raise DatasetError(f"{source}, line {lineno}: lifetimes must be positive and finite, got {tok}")
            out.append(v)
    if not out:
        raise DatasetError(f"{source}: no observations found")
    return out


def load_dataset(name_or_path: str, corrected_aarset: bool = False) -> Dataset:
    key = name_or_path.lower()
    if key in BUILTIN:
        text = resources.files("gwlindley").joinpath("data").joinpath(f"{key}.txt").read_text()
        values = parse_values(text, key)
        provenance = f"builtin:{key}"
        if key == "aarset" and corrected_aarset:
            values = [75.0 if v == 15.0 else v for v in values]
            provenance += " (15 -> 75)"
        return Dataset(key, LifetimeSample(values), provenance)
    path = Path(name_or_path)
    if not path.is_file():
        raise DatasetError(f"no such dataset file or builtin: {name_or_path!r} (builtins: {', '.join(BUILTIN)})")
    return Dataset(path.stem, LifetimeSample(parse_values(path.read_text(), str(path))), str(path))
