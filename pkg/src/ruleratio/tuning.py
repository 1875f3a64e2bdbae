"""Pick an estimator family's parameter by maximizing recall at a fixed rank.

The tunables are one per family: the ridge weight for the regularized
ratio, the count threshold for the thresholded ratio, and the
pseudo-count for additive smoothing.  The threshold is swept over
integers; the two real-valued parameters use a coarse grid (default
spacing 0.25 over [0, 20]) followed by a 0.01-spaced refinement pass
around the best coarse point.  Ties go to the smaller parameter, and
parameter 0 — the plain-ratio reduction — is always in the default
grid, so tuning can never do worse than the unsmoothed estimator on
its own training data.

The companion protocol ``apply_prior_period`` freezes a tuned parameter
and measures recall on a *different* dataset, mimicking training on one
time period and evaluating on the next.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence, Union

import numpy as np

from .counts import CooccurrenceCounts
from .estimators import (
    AdditiveSmoothing,
    EstimatorSpec,
    RegularizedRatio,
    ThresholdedRatio,
    strength_array,
)
from .evaluation import ResolvedTruth, TruthPair, candidate_pairs, resolve_truth
from .transactions import DomainLabel, ParseError

TUNABLE_FAMILIES = ("proposed", "apriori", "additive")


@dataclass(frozen=True)
class SearchConfig:
    """Search range and grid spacings for the parameter sweep."""

    lo: float = 0.0
    hi: float = 20.0
    coarse: float = 0.25
    refine: float = 0.01

    def __post_init__(self) -> None:
        if not (0 <= self.lo <= self.hi):
            raise ValueError(f"need 0 <= lo <= hi, got lo={self.lo}, hi={self.hi}")
        if self.coarse <= 0 or self.refine <= 0:
            raise ValueError("grid spacings must be positive")
        if self.refine > self.coarse:
            raise ValueError("refine spacing must not exceed coarse spacing")


@dataclass(frozen=True)
class TuningOutcome:
    """Result of one sweep: the winning parameter and the search trace."""

    family: str
    parameter: float
    recall: float
    k: int
    trace: tuple[tuple[float, float], ...]


def spec_for(family: str, parameter: float, *, classes: int = 2) -> EstimatorSpec:
    """Build the estimator for a family at a given parameter value."""
    if family == "proposed":
        return RegularizedRatio(lam=float(parameter))
    if family == "apriori":
        theta = int(round(parameter))
        if theta != parameter:
            raise ValueError(f"threshold must be an integer, got {parameter}")
        return ThresholdedRatio(theta=theta)
    if family == "additive":
        return AdditiveSmoothing(mu=float(parameter), classes=classes)
    raise ValueError(
        f"family {family!r} has no tunable parameter "
        f"(expected one of {', '.join(TUNABLE_FAMILIES)})"
    )


class _RankedEvaluator:
    """Recall@k over the candidate set, vectorized for repeated sweeps.

    Builds the candidate count arrays and tie-break sort keys once, then
    evaluates one parameter per call: score the candidates, order them
    by (score desc, co-count desc, consequent token asc, antecedent
    token asc), and count reference pairs in the top k.
    """

    def __init__(
        self,
        counts: CooccurrenceCounts,
        labels: Sequence[DomainLabel],
        truth: ResolvedTruth,
        k: int,
    ) -> None:
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        if truth.n_evaluable == 0:
            raise ValueError("no evaluable reference pairs; recall is undefined")
        pairs = candidate_pairs(counts, labels)
        if not pairs:
            raise ValueError("empty candidate set; nothing to tune on")
        tokens = counts.tokens
        order = {tok: r for r, tok in enumerate(sorted(set(tokens)))}
        self.k = k
        self.denominator = truth.n_evaluable
        self.cxy = np.array([counts.pair_count(x, y) for x, y in pairs], dtype=np.float64)
        self.cy = np.array([counts.unary_count(y) for _, y in pairs], dtype=np.float64)
        self.x_rank = np.array([order[tokens[x]] for x, _ in pairs])
        self.y_rank = np.array([order[tokens[y]] for _, y in pairs])
        self.is_true = np.array(
            [(tokens[x], tokens[y]) in truth.pairs for x, y in pairs], dtype=bool
        )

    def recall(self, spec: EstimatorSpec) -> float:
        scores = strength_array(spec, self.cxy, self.cy)
        order = np.lexsort((self.y_rank, self.x_rank, -self.cxy, -scores))
        hits = int(self.is_true[order[: self.k]].sum())
        return hits / self.denominator


def _real_grid(cfg: SearchConfig) -> list[float]:
    n = int(np.floor((cfg.hi - cfg.lo) / cfg.coarse + 1e-9))
    grid = [round(cfg.lo + i * cfg.coarse, 10) for i in range(n + 1)]
    if grid[-1] < cfg.hi:
        grid.append(cfg.hi)
    return grid


def _refined_grid(cfg: SearchConfig, center: float) -> list[float]:
    half = int(round(cfg.coarse / cfg.refine))
    vals = (round(center + j * cfg.refine, 10) for j in range(-half, half + 1))
    return [v for v in vals if cfg.lo <= v <= cfg.hi]


def tune(
    family: str,
    counts: CooccurrenceCounts,
    labels: Sequence[DomainLabel],
    truth: Union[ResolvedTruth, Iterable[TruthPair]],
    k: int = 4000,
    search: SearchConfig = SearchConfig(),
    *,
    classes: int = 2,
) -> TuningOutcome:
    """Sweep the family's parameter and return the recall-at-``k`` maximizer.

    The threshold family is swept exhaustively over the integers in the
    range; the real-valued families get the two-stage grid.  Among
    parameters tied on recall, the smallest wins.
    """
    if family not in TUNABLE_FAMILIES:
        raise ValueError(
            f"family {family!r} has no tunable parameter "
            f"(expected one of {', '.join(TUNABLE_FAMILIES)})"
        )
    if not isinstance(truth, ResolvedTruth):
        truth = resolve_truth(truth, counts)
    evaluator = _RankedEvaluator(counts, labels, truth, k)

    trace: list[tuple[float, float]] = []
    seen: set[float] = set()

    def evaluate(param: float) -> float:
        r = evaluator.recall(spec_for(family, param, classes=classes))
        trace.append((param, r))
        seen.add(param)
        return r

    if family == "apriori":
        lo = int(np.ceil(search.lo - 1e-9))
        hi = int(np.floor(search.hi + 1e-9))
        for theta in range(lo, hi + 1):
            evaluate(float(theta))
    else:
        coarse = _real_grid(search)
        for p in coarse:
            evaluate(p)
        best_coarse = max(trace, key=lambda pr: (pr[1], -pr[0]))[0]
        for p in _refined_grid(search, best_coarse):
            if p not in seen:
                evaluate(p)

    best_recall = max(r for _, r in trace)
    best_param = min(p for p, r in trace if r == best_recall)
    return TuningOutcome(
        family=family,
        parameter=best_param,
        recall=best_recall,
        k=k,
        trace=tuple(trace),
    )


def apply_prior_period(
    outcome: TuningOutcome,
    counts: CooccurrenceCounts,
    labels: Sequence[DomainLabel],
    truth: Union[ResolvedTruth, Iterable[TruthPair]],
    ks: Sequence[int],
    *,
    classes: int = 2,
) -> list[float]:
    """Recall at each rank in ``ks`` with the tuned parameter held frozen.

    ``counts`` here is the held-out dataset, not the one the outcome was
    tuned on.
    """
    if not ks:
        return []
    if not isinstance(truth, ResolvedTruth):
        truth = resolve_truth(truth, counts)
    spec = spec_for(outcome.family, outcome.parameter, classes=classes)
    recalls = []
    for k in ks:
        evaluator = _RankedEvaluator(counts, labels, truth, k)
        recalls.append(evaluator.recall(spec))
    return recalls


# ---------------------------------------------------------------------------
# outcome files (key-value text, consumed by the eval/rank commands)


def save_outcome(outcome: TuningOutcome, sink: Union[str, Path, IO[str]]) -> None:
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8") as fh:
            save_outcome(outcome, fh)
        return
    sink.write(f"family\t{outcome.family}\n")
    sink.write(f"parameter\t{outcome.parameter!r}\n")
    sink.write(f"recall\t{outcome.recall!r}\n")
    sink.write(f"k\t{outcome.k}\n")


def load_outcome(source: Union[str, Path, IO[str]]) -> TuningOutcome:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return load_outcome(fh)
    fields: dict[str, str] = {}
    for lineno, line in enumerate(source, start=1):
        line = line.rstrip("\n")
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected key<TAB>value")
        fields[parts[0]] = parts[1]
    missing = {"family", "parameter", "recall", "k"} - fields.keys()
    if missing:
        raise ParseError(f"outcome file missing keys: {', '.join(sorted(missing))}")
    try:
        parameter = float(fields["parameter"])
        recall = float(fields["recall"])
        k = int(fields["k"])
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    return TuningOutcome(
        family=fields["family"],
        parameter=parameter,
        recall=recall,
        k=k,
        trace=((parameter, recall),),
    )
