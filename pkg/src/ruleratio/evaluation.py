"""Ranking candidate rules and scoring the ranking against known pairs.

A candidate rule pairs a consequent-labeled item ``x`` with an
antecedent-labeled item ``y`` that co-occurs with it at least once.
After scoring, candidates are sorted into a deterministic ranked list
and measured by recall and precision at rank against a reference set of
(consequent, antecedent) token pairs.

The recall denominator is the number of reference pairs whose two
tokens both occur somewhere in the database — pairs involving a token
never seen at all are not recoverable by any ranking and are dropped up
front by :func:`resolve_truth`.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence, Union

from .counts import CooccurrenceCounts
from .transactions import DomainLabel, ParseError

TruthPair = tuple[str, str]


@dataclass(frozen=True)
class RuleEntry:
    """One row of a ranked rule list (token-level, self-contained)."""

    rank: int
    consequent: str
    antecedent: str
    score: float
    cxy: int
    cy: int


@dataclass(frozen=True)
class ResolvedTruth:
    """Reference pairs restricted to tokens that occur in the database."""

    pairs: frozenset[TruthPair]
    n_total: int

    @property
    def n_evaluable(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class CurvePoint:
    rank: int
    recall: float
    precision: float


@dataclass(frozen=True)
class RecallCurve:
    points: tuple[CurvePoint, ...]
    n_truth: int
    n_candidates: int


def resolve_truth(
    truth: Iterable[TruthPair], counts: CooccurrenceCounts
) -> ResolvedTruth:
    """Drop reference pairs whose consequent or antecedent never occurs."""
    ids = {tok: i for i, tok in enumerate(counts.tokens)}

    def occurs(token: str) -> bool:
        i = ids.get(token)
        return i is not None and counts.unary_count(i) > 0

    all_pairs = set(truth)
    kept = frozenset((x, y) for x, y in all_pairs if occurs(x) and occurs(y))
    return ResolvedTruth(pairs=kept, n_total=len(all_pairs))


def candidate_pairs(
    counts: CooccurrenceCounts, labels: Sequence[DomainLabel]
) -> list[tuple[int, int]]:
    """All (consequent-item, antecedent-item) pairs that co-occur.

    Items that never occur cannot form candidates, and same-domain
    pairs are excluded by construction (a candidate crosses from the
    consequent domain to the antecedent domain).
    """
    if len(labels) != counts.n_items:
        raise ValueError(
            f"{len(labels)} labels for {counts.n_items} items"
        )
    consequents = [i for i, lab in enumerate(labels) if lab is DomainLabel.CONSEQUENT]
    antecedents = [i for i, lab in enumerate(labels) if lab is DomainLabel.ANTECEDENT]
    out = []
    for x in consequents:
        for y in antecedents:
            if counts.pair_count(x, y) >= 1:
                out.append((x, y))
    out.sort()
    return out


def rank(
    scores: Mapping[tuple[int, int], float], counts: CooccurrenceCounts
) -> list[RuleEntry]:
    """Sort scored pairs into a ranked list with a total, deterministic order.

    Descending score, then descending co-occurrence count, then ascending
    (consequent, antecedent) token pair — so equal-score runs still come
    out in one reproducible order regardless of map iteration order.
    """
    tokens = counts.tokens
    rows = []
    for (x, y), s in scores.items():
        if not math.isfinite(s):
            raise ValueError(f"non-finite score {s!r} for pair ({x}, {y})")
        rows.append((tokens[x], tokens[y], float(s), counts.pair_count(x, y), counts.unary_count(y)))
    rows.sort(key=lambda r: (-r[2], -r[3], r[0], r[1]))
    return [
        RuleEntry(rank=k, consequent=xt, antecedent=yt, score=s, cxy=cxy, cy=cy)
        for k, (xt, yt, s, cxy, cy) in enumerate(rows, start=1)
    ]


def _true_positives(ranked: Sequence[RuleEntry], truth: ResolvedTruth, k: int) -> int:
    top = ranked[:k] if k < len(ranked) else ranked
    return sum(1 for e in top if (e.consequent, e.antecedent) in truth.pairs)


def recall_at(ranked: Sequence[RuleEntry], truth: ResolvedTruth, k: int) -> float:
    """Fraction of evaluable reference pairs found in the top ``k``."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if truth.n_evaluable == 0:
        raise ValueError("no evaluable reference pairs; recall is undefined")
    return _true_positives(ranked, truth, k) / truth.n_evaluable


def precision_at(ranked: Sequence[RuleEntry], truth: ResolvedTruth, k: int) -> float:
    """Fraction of the top ``k`` entries that are reference pairs."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if truth.n_evaluable == 0:
        raise ValueError("no evaluable reference pairs; precision is undefined")
    return _true_positives(ranked, truth, k) / k


def curve(
    ranked: Sequence[RuleEntry], truth: ResolvedTruth, step: int
) -> RecallCurve:
    """Recall/precision sampled every ``step`` ranks, plus the endpoint."""
    if step < 1:
        raise ValueError(f"step must be >= 1, got {step}")
    n = len(ranked)
    ks = list(range(step, n + 1, step))
    if n > 0 and (not ks or ks[-1] != n):
        ks.append(n)
    points = tuple(
        CurvePoint(rank=k, recall=recall_at(ranked, truth, k), precision=precision_at(ranked, truth, k))
        for k in ks
    )
    return RecallCurve(points=points, n_truth=truth.n_evaluable, n_candidates=n)


# ---------------------------------------------------------------------------
# file formats


def read_truth(source: Union[str, Path, IO[str]]) -> set[TruthPair]:
    """Read tab-separated ``consequent<TAB>antecedent`` reference pairs."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return read_truth(fh)
    pairs: set[TruthPair] = set()
    for lineno, line in enumerate(source, start=1):
        line = line.rstrip("\n")
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 2 or not fields[0] or not fields[1]:
            raise ParseError(f"line {lineno}: expected consequent<TAB>antecedent")
        pairs.add((fields[0], fields[1]))
    return pairs


def write_truth(pairs: Iterable[TruthPair], sink: Union[str, Path, IO[str]]) -> None:
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8") as fh:
            write_truth(pairs, fh)
        return
    for x, y in sorted(pairs):
        sink.write(f"{x}\t{y}\n")


def write_ranked(entries: Iterable[RuleEntry], sink: Union[str, Path, IO[str]]) -> None:
    """Write the ranked list as TSV with scores at fixed 6-decimal precision."""
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8") as fh:
            write_ranked(entries, fh)
        return
    for e in entries:
        sink.write(
            f"{e.rank}\t{e.consequent}\t{e.antecedent}\t{e.score:.6f}\t{e.cxy}\t{e.cy}\n"
        )


def read_ranked(source: Union[str, Path, IO[str]]) -> list[RuleEntry]:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return read_ranked(fh)
    entries: list[RuleEntry] = []
    for lineno, line in enumerate(source, start=1):
        line = line.rstrip("\n")
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 6:
            raise ParseError(f"line {lineno}: expected 6 tab-separated fields")
        try:
            entry = RuleEntry(
                rank=int(fields[0]),
                consequent=fields[1],
                antecedent=fields[2],
                score=float(fields[3]),
                cxy=int(fields[4]),
                cy=int(fields[5]),
            )
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
        if entry.rank != len(entries) + 1:
            raise ParseError(
                f"line {lineno}: rank {entry.rank} breaks the 1..n sequence"
            )
        entries.append(entry)
    return entries


def write_curve(c: RecallCurve, sink: Union[str, Path, IO[str]]) -> None:
    """Write the curve as ``rank,recall,precision`` CSV (header included)."""
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8", newline="") as fh:
            write_curve(c, fh)
        return
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(["rank", "recall", "precision"])
    for p in c.points:
        writer.writerow([p.rank, f"{p.recall:.6f}", f"{p.precision:.6f}"])


def read_curve(source: Union[str, Path, IO[str]]) -> list[CurvePoint]:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return read_curve(fh)
    reader = csv.reader(source)
    header = next(reader, None)
    if header != ["rank", "recall", "precision"]:
        raise ParseError(f"unexpected curve header {header!r}")
    points = []
    for row in reader:
        if not row:
            continue
        if len(row) != 3:
            raise ParseError(f"curve row {row!r} does not have 3 columns")
        points.append(CurvePoint(rank=int(row[0]), recall=float(row[1]), precision=float(row[2])))
    return points
