"""Paired significance testing and summary statistics for recall tables.

Two ranking systems evaluated on the same datasets give paired recall
samples; the question "is system A better than system B?" is answered
with a one-sided paired t-test on the per-dataset differences.  Sample
standard deviations use the n-1 divisor throughout.

A bundled benchmark table (13 newspaper half-year datasets, three
systems, recall at three ranks) ships with the package for the
``compare`` command and the regression tests.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import IO, Sequence, Union

from scipy.special import stdtr

from .transactions import ParseError

BENCHMARK_SYSTEMS = ("proposed", "apriori", "additive")
BENCHMARK_RANKS = (1000, 4000, 12000)


class ZeroVarianceError(ValueError):
    """All paired differences are identical; the t statistic is undefined."""


@dataclass(frozen=True)
class TTestResult:
    """One-sided paired t-test (alternative: mean difference > 0)."""

    t: float
    dof: int
    p: float


def summary(values: Sequence[float]) -> tuple[float, float]:
    """Mean and sample (n-1) standard deviation of ``values``."""
    n = len(values)
    if n < 2:
        raise ValueError(f"need at least two values, got {n}")
    mean = math.fsum(values) / n
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var)


def student_t_upper_tail(t: float, dof: int) -> float:
    """P(T > t) for Student's t with ``dof`` degrees of freedom."""
    if dof < 1:
        raise ValueError(f"dof must be >= 1, got {dof}")
    # The distribution is symmetric, so the upper tail is the CDF at -t.
    return float(stdtr(dof, -t))


def paired_ttest_one_sided(a: Sequence[float], b: Sequence[float]) -> TTestResult:
    """Test whether the mean of ``a - b`` is greater than zero.

    ``a`` and ``b`` are recall values aligned by dataset.  Returns the t
    statistic, n-1 degrees of freedom, and the upper-tail p-value.
    """
    if len(a) != len(b):
        raise ValueError(f"sample lengths differ: {len(a)} vs {len(b)}")
    n = len(a)
    if n < 2:
        raise ValueError(f"need at least two pairs, got {n}")
    d = [x - y for x, y in zip(a, b)]
    mean, sd = summary(d)
    if sd == 0:
        raise ZeroVarianceError("all paired differences are identical")
    t = mean / (sd / math.sqrt(n))
    return TTestResult(t=t, dof=n - 1, p=student_t_upper_tail(t, n - 1))


# ---------------------------------------------------------------------------
# bundled benchmark table


@dataclass(frozen=True)
class BenchmarkTable:
    """Recall grid: datasets x (system, rank) columns."""

    datasets: tuple[str, ...]
    columns: dict[tuple[str, int], tuple[float, ...]]

    def column(self, system: str, k: int) -> tuple[float, ...]:
        try:
            return self.columns[(system, k)]
        except KeyError:
            raise KeyError(
                f"no column for system {system!r} at rank {k}; "
                f"have systems {sorted({s for s, _ in self.columns})} "
                f"and ranks {sorted({r for _, r in self.columns})}"
            ) from None


def _parse_benchmark(fh: IO[str]) -> BenchmarkTable:
    reader = csv.reader(fh)
    header = next(reader, None)
    if not header or header[0] != "dataset":
        raise ParseError("benchmark table must start with a 'dataset' column")
    keys: list[tuple[str, int]] = []
    for name in header[1:]:
        system, sep, rank = name.partition("_top")
        if not sep or not rank.isdigit():
            raise ParseError(f"column {name!r} is not of the form <system>_top<rank>")
        keys.append((system, int(rank)))
    datasets: list[str] = []
    cells: dict[tuple[str, int], list[float]] = {key: [] for key in keys}
    for row in reader:
        if not row:
            continue
        if len(row) != len(header):
            raise ParseError(f"row {row[0]!r} has {len(row)} fields, expected {len(header)}")
        datasets.append(row[0])
        for key, value in zip(keys, row[1:]):
            cells[key].append(float(value))
    if not datasets:
        raise ParseError("benchmark table has no data rows")
    return BenchmarkTable(
        datasets=tuple(datasets),
        columns={key: tuple(vals) for key, vals in cells.items()},
    )


def load_benchmark(source: Union[str, Path, IO[str], None] = None) -> BenchmarkTable:
    """Load a recall table, defaulting to the bundled benchmark CSV."""
    if source is None:
        ref = resources.files("ruleratio").joinpath("data/benchmark_recalls.csv")
        with ref.open("r", encoding="utf-8") as fh:
            return _parse_benchmark(fh)
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return _parse_benchmark(fh)
    return _parse_benchmark(source)


def compare_systems(
    table: BenchmarkTable, system_a: str, system_b: str, k: int
) -> tuple[TTestResult, tuple[float, ...], tuple[float, ...]]:
    """t-test ``system_a`` against ``system_b`` at rank ``k`` on a table."""
    a = table.column(system_a, k)
    b = table.column(system_b, k)
    return paired_ttest_one_sided(a, b), a, b
