"""Series container, tabular ingestion and the preprocessing transforms."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "IngestSpec",
    "Series",
    "load_series",
    "log_returns",
    "mean_subtract_integrate",
    "rolling_volatility",
]


@dataclass(frozen=True)
class Series:
    """Uniformly sampled real sequence.

    ``origin_index`` is the absolute index of ``values[0]``; the estimator
    aligns two series through it, so transforms that drop leading samples
    shift it accordingly.
    """

    values: np.ndarray
    axis_unit: str = "samples"
    origin_index: int = 0

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=float).reshape(-1)
        if arr.size == 0:
            raise ValueError("series is empty")
        if not np.all(np.isfinite(arr)):
            bad = int(np.flatnonzero(~np.isfinite(arr))[0])
            raise ValueError(f"non-finite sample at position {bad}")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "origin_index", int(self.origin_index))

    def __len__(self) -> int:
        return self.values.size

    @property
    def stop_index(self) -> int:
        """Absolute index one past the last sample."""
        return self.origin_index + self.values.size

    def with_values(self, values, origin_index: int | None = None) -> "Series":
        return Series(
            values,
            axis_unit=self.axis_unit,
            origin_index=self.origin_index if origin_index is None else origin_index,
        )


@dataclass(frozen=True)
class IngestSpec:
    column_index: int = 0
    delimiter: str = "\t"
    skip_header: int = 0
    axis_unit: str = "samples"
    comment: str | None = "#"

    def __post_init__(self) -> None:
        if self.column_index < 0:
            raise ValueError("column_index must be >= 0")
        if self.skip_header < 0:
            raise ValueError("skip_header must be >= 0")
        if len(self.delimiter) != 1:
            raise ValueError("delimiter must be a single character")


def load_series(path, spec: IngestSpec = IngestSpec()) -> Series:
    """Read one numeric column of a delimited text file.

    Blank lines and lines starting with ``spec.comment`` are ignored; the
    header skip counts the remaining physical rows. Errors name the 1-based
    line number of the offending row.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")

    values: list[float] = []
    skipped = 0
    with path.open(newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh, delimiter=spec.delimiter), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if spec.comment and row[0].lstrip().startswith(spec.comment):
                continue
            if skipped < spec.skip_header:
                skipped += 1
                continue
            if spec.column_index >= len(row):
                raise ValueError(
                    f"{path}:{lineno}: row has {len(row)} column(s), "
                    f"column {spec.column_index} requested"
                )
            cell = row[spec.column_index].strip()
            try:
                v = float(cell)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric value {cell!r}") from None
            if not np.isfinite(v):
                raise ValueError(f"{path}:{lineno}: non-finite value {cell!r}")
            values.append(v)

    if not values:
        raise ValueError(f"{path}: no data rows")
    return Series(np.asarray(values), axis_unit=spec.axis_unit)


def mean_subtract_integrate(s: Series) -> Series:
    """Subtract the sample mean and take the running sum (profile of a sequence)."""
    x = s.values - s.values.mean()
    return s.with_values(np.cumsum(x))


def log_returns(p: Series, horizon: int = 1) -> Series:
    """``r[k] = ln p[k + horizon] - ln p[k]``; indexed by the earlier sample."""
    horizon = int(horizon)
    if horizon < 1:
        raise ValueError("horizon must be a positive integer")
    if horizon >= len(p):
        raise ValueError(f"horizon {horizon} too large for {len(p)} prices")
    if np.any(p.values <= 0):
        bad = int(np.flatnonzero(p.values <= 0)[0])
        raise ValueError(f"non-positive price at position {bad}")
    v = p.values
    # log of the ratio: no cancellation, and exact under scaling by powers of two
    return p.with_values(np.log(v[horizon:] / v[:-horizon]))


def rolling_volatility(r: Series, window: int) -> Series:
    """Trailing sample standard deviation (ddof=1) over ``window`` returns.

    Output sample ``j`` covers ``r[j : j + window]`` and is stamped with the
    index of that window's last return.
    """
    window = int(window)
    if window < 2:
        raise ValueError("volatility window must be >= 2")
    if window > len(r):
        raise ValueError(f"volatility window {window} longer than series ({len(r)})")
    # centre first so the sliding sums do not cancel catastrophically
    x = r.values - r.values.mean()
    c1 = np.concatenate(([0.0], np.cumsum(x)))
    c2 = np.concatenate(([0.0], np.cumsum(x * x)))
    s1 = c1[window:] - c1[:-window]
    s2 = c2[window:] - c2[:-window]
    var = (s2 - s1 * s1 / window) / (window - 1)
    np.maximum(var, 0.0, out=var)
    return r.with_values(np.sqrt(var), origin_index=r.origin_index + window - 1)
