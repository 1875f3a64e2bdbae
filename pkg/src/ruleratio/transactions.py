"""Transaction databases: records of items, vocabulary, and domain labels.

A record is a set of items; an item is a string token mapped to a dense
integer id.  Items optionally carry a domain label (``consequent``,
``antecedent`` or ``other``) that downstream candidate generation uses to
decide which side of a rule an item may occupy.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from enum import Enum
from typing import IO, Iterable, Mapping


class ParseError(ValueError):
    """Raised when a records or domain-table file cannot be parsed."""


class DomainLabel(str, Enum):
    CONSEQUENT = "consequent"
    ANTECEDENT = "antecedent"
    OTHER = "other"


@dataclass
class TransactionDatabase:
    """An ordered collection of records over a shared vocabulary.

    Attributes
    ----------
    records : list[frozenset[int]]
        One deduplicated set of item ids per input record.  Empty records
        are kept; they still count as observations.
    tokens : list[str]
        Vocabulary in id order (``tokens[i]`` is the token of item ``i``).
        Ids are dense and assigned in first-seen order.
    labels : list[DomainLabel]
        Domain label per item id, aligned with ``tokens``.
    """

    records: list[frozenset[int]] = field(default_factory=list)
    tokens: list[str] = field(default_factory=list)
    labels: list[DomainLabel] = field(default_factory=list)

    def __post_init__(self) -> None:
        self._ids = {tok: i for i, tok in enumerate(self.tokens)}

    @property
    def n_records(self) -> int:
        return len(self.records)

    @property
    def n_items(self) -> int:
        return len(self.tokens)

    def id_of(self, token: str) -> int:
        return self._ids[token]

    def __contains__(self, token: str) -> bool:
        return token in self._ids

    def label_of(self, item: int) -> DomainLabel:
        return self.labels[item]


def parse_records(
    lines: Iterable[str],
    domain_table: Mapping[str, DomainLabel] | None = None,
) -> TransactionDatabase:
    """Build a database from an iterable of text lines.

    One record per line, items whitespace-separated.  Duplicate tokens
    within a line collapse to a single set member; an empty (or
    whitespace-only) line yields an empty record.  Tokens missing from
    ``domain_table`` are labeled :data:`DomainLabel.OTHER`.
    """
    domain_table = domain_table or {}
    tokens: list[str] = []
    labels: list[DomainLabel] = []
    ids: dict[str, int] = {}
    records: list[frozenset[int]] = []
    for line in lines:
        members: set[int] = set()
        for tok in line.split():
            item = ids.get(tok)
            if item is None:
                item = len(tokens)
                ids[tok] = item
                tokens.append(tok)
                labels.append(domain_table.get(tok, DomainLabel.OTHER))
            members.add(item)
        records.append(frozenset(members))
    return TransactionDatabase(records=records, tokens=tokens, labels=labels)


def iter_decoded_lines(stream: IO[bytes]) -> Iterable[str]:
    """Decode a byte stream line by line, reporting the failing line number.

    Raises
    ------
    ParseError
        If a line is not valid UTF-8.  The message carries the 1-based
        line number.
    """
    for lineno, raw in enumerate(stream, start=1):
        try:
            yield raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"line {lineno}: invalid UTF-8 ({exc.reason})") from exc


def load_records(
    source: str | IO[bytes],
    domain_table: Mapping[str, DomainLabel] | None = None,
) -> TransactionDatabase:
    """Read a records file (UTF-8, one record per line).

    ``source`` may be a filesystem path or a binary stream (e.g.
    ``sys.stdin.buffer``).  Decoding is done per line so that malformed
    input is rejected with its line number.
    """
    if isinstance(source, (str, bytes)):
        with open(source, "rb") as fh:
            return parse_records(iter_decoded_lines(fh), domain_table)
    return parse_records(iter_decoded_lines(source), domain_table)


def read_domain_table(source: str | IO[str]) -> dict[str, DomainLabel]:
    """Read a TSV domain table: ``token<TAB>label`` per line.

    Labels must be one of ``consequent``, ``antecedent``, ``other``.
    Blank lines are ignored.
    """
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as fh:
            return read_domain_table(fh)
    table: dict[str, DomainLabel] = {}
    for lineno, line in enumerate(source, start=1):
        line = line.rstrip("\n")
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected 'token<TAB>label', got {line!r}")
        token, label = parts
        try:
            table[token] = DomainLabel(label)
        except ValueError:
            raise ParseError(f"line {lineno}: unknown domain label {label!r}") from None
    return table


def write_domain_table(table: Mapping[str, DomainLabel], dest: str | IO[str]) -> None:
    """Write a TSV domain table, one ``token<TAB>label`` line per entry."""
    if isinstance(dest, str):
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            write_domain_table(table, fh)
        return
    for token, label in table.items():
        dest.write(f"{token}\t{label.value}\n")


def domain_labels_for(db: TransactionDatabase) -> list[DomainLabel]:
    """Labels aligned by item id, as candidate generation expects them."""
    return list(db.labels)


def records_to_text(db: TransactionDatabase) -> str:
    """Render records back to file form (tokens in id order within a record)."""
    buf = io.StringIO()
    for record in db.records:
        buf.write(" ".join(db.tokens[i] for i in sorted(record)))
        buf.write("\n")
    return buf.getvalue()
