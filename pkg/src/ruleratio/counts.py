"""Sparse co-occurrence counting over transaction databases.

Counts are kept for single items and for unordered item pairs that were
actually observed together; absent keys mean a count of zero.  The record
total includes empty records, so the single-item count of any item is at
most the record total.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import IO, Iterator, Sequence

from .transactions import ParseError, TransactionDatabase

_FORMAT_NAME = "ruleratio-counts"
_FORMAT_VERSION = 1


class VocabularyMismatchError(ValueError):
    """Raised when combining counts built over different vocabularies."""


@dataclass(frozen=True)
class CooccurrenceCounts:
    """Record total, per-item counts, and sparse pair counts.

    ``pairs`` is keyed by unordered id pairs stored as ``(i, j)`` with
    ``i < j``; the diagonal is not stored because the pair count of an
    item with itself equals its single-item count.
    """

    n_records: int
    unary: dict[int, int]
    pairs: dict[tuple[int, int], int]
    tokens: tuple[str, ...] = field(default=())

    @property
    def n_items(self) -> int:
        return len(self.tokens)

    def unary_count(self, x: int) -> int:
        return self.unary.get(x, 0)

    def pair_count(self, x: int, y: int) -> int:
        """Number of records containing both ``x`` and ``y`` (symmetric)."""
        if x == y:
            return self.unary.get(x, 0)
        key = (x, y) if x < y else (y, x)
        return self.pairs.get(key, 0)

    def iter_pairs(self) -> Iterator[tuple[int, int, int]]:
        """Yield ``(i, j, count)`` for stored unordered pairs, ``i < j``."""
        for (i, j), c in self.pairs.items():
            yield i, j, c

    def max_unary(self) -> int:
        return max(self.unary.values(), default=0)


def count(db: TransactionDatabase) -> CooccurrenceCounts:
    """Count item and pair occurrences over all records of ``db``."""
    return count_slice(db, 0, db.n_records)


def count_slice(db: TransactionDatabase, start: int, stop: int) -> CooccurrenceCounts:
    """Count over ``db.records[start:stop]`` only.

    The result carries the full vocabulary, so slices of the same database
    can be combined with :func:`merge_counts`; counting disjoint slices and
    merging equals counting the whole database.
    """
    unary: Counter[int] = Counter()
    pairs: Counter[tuple[int, int]] = Counter()
    n = 0
    for record in db.records[start:stop]:
        n += 1
        unary.update(record)
        pairs.update(combinations(sorted(record), 2))
    return CooccurrenceCounts(
        n_records=n, unary=dict(unary), pairs=dict(pairs), tokens=tuple(db.tokens)
    )


def empty_counts(tokens: Sequence[str] = ()) -> CooccurrenceCounts:
    """Identity element for :func:`merge_counts` over the given vocabulary."""
    return CooccurrenceCounts(n_records=0, unary={}, pairs={}, tokens=tuple(tokens))


def merge_counts(
    left: CooccurrenceCounts, right: CooccurrenceCounts
) -> CooccurrenceCounts:
    """Fieldwise sum of two counts built over the same vocabulary.

    Raises
    ------
    VocabularyMismatchError
        If the two vocabularies differ (an empty vocabulary acts as a
        wildcard so the empty identity merges with anything).
    """
    if left.tokens and right.tokens and left.tokens != right.tokens:
        raise VocabularyMismatchError(
            f"cannot merge counts over different vocabularies "
            f"({len(left.tokens)} vs {len(right.tokens)} items)"
        )
    unary = Counter(left.unary)
    unary.update(right.unary)
    pairs = Counter(left.pairs)
    pairs.update(right.pairs)
    return CooccurrenceCounts(
        n_records=left.n_records + right.n_records,
        unary=dict(unary),
        pairs=dict(pairs),
        tokens=left.tokens or right.tokens,
    )


def save_counts(counts: CooccurrenceCounts, dest: str | IO[str]) -> None:
    """Write counts as a versioned TSV dump.

    Header lines (prefixed ``#``) carry the format version, the record
    total, and the vocabulary in id order.  Data rows are
    ``x<TAB>y<TAB>count`` with tokens; diagonal rows hold single-item
    counts and off-diagonal rows each unordered pair once.  The dump
    round-trips exactly through :func:`load_counts`.
    """
    if isinstance(dest, str):
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            save_counts(counts, fh)
        return
    dest.write(f"#{_FORMAT_NAME}\t{_FORMAT_VERSION}\n")
    dest.write(f"#records\t{counts.n_records}\n")
    for token in counts.tokens:
        dest.write(f"#item\t{token}\n")
    for i in sorted(counts.unary):
        dest.write(f"{counts.tokens[i]}\t{counts.tokens[i]}\t{counts.unary[i]}\n")
    for i, j in sorted(counts.pairs):
        dest.write(f"{counts.tokens[i]}\t{counts.tokens[j]}\t{counts.pairs[i, j]}\n")


def load_counts(source: str | IO[str]) -> CooccurrenceCounts:
    """Read a counts dump produced by :func:`save_counts`."""
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as fh:
            return load_counts(fh)
    lines = iter(source)
    header = next(lines, None)
    if header is None or header.rstrip("\n").split("\t") != [
        f"#{_FORMAT_NAME}",
        str(_FORMAT_VERSION),
    ]:
        raise ParseError(
            f"not a {_FORMAT_NAME} v{_FORMAT_VERSION} dump (bad header line)"
        )
    n_records: int | None = None
    tokens: list[str] = []
    ids: dict[str, int] = {}
    unary: dict[int, int] = {}
    pairs: dict[tuple[int, int], int] = {}
    for lineno, line in enumerate(lines, start=2):
        line = line.rstrip("\n")
        if not line:
            continue
        parts = line.split("\t")
        if parts[0] == "#records":
            n_records = int(parts[1])
        elif parts[0] == "#item":
            ids[parts[1]] = len(tokens)
            tokens.append(parts[1])
        elif len(parts) == 3:
            try:
                x, y, c = ids[parts[0]], ids[parts[1]], int(parts[2])
            except KeyError as exc:
                raise ParseError(f"line {lineno}: unknown token {exc.args[0]!r}") from None
            if x == y:
                unary[x] = c
            else:
                pairs[(x, y) if x < y else (y, x)] = c
        else:
            raise ParseError(f"line {lineno}: malformed row {line!r}")
    if n_records is None:
        raise ParseError("missing #records header")
    return CooccurrenceCounts(
        n_records=n_records, unary=unary, pairs=pairs, tokens=tuple(tokens)
    )
