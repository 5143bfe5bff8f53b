"""Loading, validating, filtering and summarizing abstract corpora.

A corpus file is UTF-8 JSON Lines with the fields ``id, year, venue_kind,
venue_name, discipline, author_count, text`` (the last three but one are
optional). Bad lines are rejected with a reason and never abort a load.
"""
from __future__ import annotations

import csv
import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping

from ._io import atomic_write

log = logging.getLogger(__name__)

VENUE_KINDS = ("journal", "proceedings")
FIELDS = ("id", "year", "venue_kind", "venue_name", "discipline", "author_count", "text")
REQUIRED = ("id", "year", "venue_kind", "venue_name", "text")
UNMAPPED = "unmapped"


@dataclass(frozen=True)
class AbstractRecord:
    id: str
    year: int
    venue_kind: str
    venue_name: str
    text: str
    discipline: str | None = None
    author_count: int | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "year": self.year,
            "venue_kind": self.venue_kind,
            "venue_name": self.venue_name,
            "discipline": self.discipline,
            "author_count": self.author_count,
            "text": self.text,
        }


@dataclass(frozen=True)
class Rejection:
    line: int
    reason: str


@dataclass(frozen=True)
class ValidationReport:
    accepted: int = 0
    rejected: tuple[Rejection, ...] = ()

    @property
    def n_rejected(self) -> int:
        return len(self.rejected)


@dataclass(frozen=True)
class Corpus:
    records: tuple[AbstractRecord, ...]
    report: ValidationReport = field(default_factory=ValidationReport, compare=False)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @cached_property
    def by_year(self) -> dict[int, tuple[AbstractRecord, ...]]:
        groups = defaultdict(list)
        for r in self.records:
            groups[r.year].append(r)
        return {y: tuple(groups[y]) for y in sorted(groups)}

    @cached_property
    def by_year_venue(self) -> dict[tuple[int, str], tuple[AbstractRecord, ...]]:
        groups = defaultdict(list)
        for r in self.records:
            groups[(r.year, r.venue_kind)].append(r)
        return {k: tuple(groups[k]) for k in sorted(groups)}

    @cached_property
    def by_id(self) -> dict[str, AbstractRecord]:
        return {r.id: r for r in self.records}

    @property
    def years(self) -> list[int]:
        return list(self.by_year)

    def year_slice(self, year: int) -> tuple[AbstractRecord, ...]:
        return self.by_year.get(year, ())


def _validate(obj, year_window: tuple[int, int]) -> AbstractRecord | str:
    if not isinstance(obj, dict):
        return "record is not an object"
    for name in REQUIRED:
        if name not in obj or obj[name] is None:
            return f"missing field: {name}"
    extra = sorted(set(obj) - set(FIELDS))
    if extra:
        return f"unknown field: {extra[0]}"
    rid = obj["id"]
    if not isinstance(rid, str) or not rid.strip():
        return "invalid id"
    year = obj["year"]
    if isinstance(year, bool) or not isinstance(year, int):
        return "invalid year"
    if not year_window[0] <= year <= year_window[1]:
        return "year out of range"
    if obj["venue_kind"] not in VENUE_KINDS:
        return "invalid venue_kind"
    if not isinstance(obj["venue_name"], str):
        return "invalid venue_name"
    text = obj["text"]
    if not isinstance(text, str) or not text.strip():
        return "empty text"
    disc = obj.get("discipline")
    if disc is not None and not isinstance(disc, str):
        return "invalid discipline"
    authors = obj.get("author_count")
    if authors is not None and (isinstance(authors, bool) or not isinstance(authors, int) or authors < 1):
        return "invalid author_count"
    return AbstractRecord(
        id=rid,
        year=year,
        venue_kind=obj["venue_kind"],
        venue_name=obj["venue_name"],
        text=text,
        discipline=disc or None,
        author_count=authors,
    )


def parse_records(lines: Iterable[str], year_window: tuple[int, int] = (1900, 2100)) -> Corpus:
    records = []
    rejected = []
    seen = set()
    for n, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            rejected.append(Rejection(n, "malformed json"))
            continue
        rec = _validate(obj, year_window)
        if isinstance(rec, str):
            rejected.append(Rejection(n, rec))
            continue
        if rec.id in seen:
            rejected.append(Rejection(n, "duplicate id"))
            continue
        seen.add(rec.id)
        records.append(rec)
    if rejected:
        log.warning("rejected %d of %d lines", len(rejected), len(rejected) + len(records))
    return Corpus(tuple(records), ValidationReport(len(records), tuple(rejected)))


def load_corpus(path: str | Path, year_window: tuple[int, int] = (1900, 2100)) -> Corpus:
    """Read a JSON Lines corpus. Raises OSError if the file is unreadable."""
    with open(path, encoding="utf-8") as fh:
        return parse_records(fh, year_window)


def dumps_corpus(corpus: Corpus) -> str:
    return "".join(
        json.dumps(r.to_dict(), ensure_ascii=False, sort_keys=False) + "\n" for r in corpus.records
    )


def export_corpus(corpus: Corpus, path: str | Path) -> None:
    atomic_write(path, dumps_corpus(corpus))


def filter_corpus(
    corpus: Corpus,
    year_range: tuple[int, int],
    venue_kind: str | None = None,
    discipline: str | None = None,
) -> Corpus:
    lo, hi = year_range
    if lo > hi:
        raise ValueError(f"inverted year range: {lo} > {hi}")
    if venue_kind is not None and venue_kind not in VENUE_KINDS:
        raise ValueError(f"unknown venue_kind {venue_kind!r}")
    keep = tuple(
        r for r in corpus.records
        if lo <= r.year <= hi
        and (venue_kind is None or r.venue_kind == venue_kind)
        and (discipline is None or r.discipline == discipline)
    )
    return Corpus(keep)


@dataclass(frozen=True)
class SummaryRow:
    year: int
    venue_kind: str
    count: int
    mean_author_count: float | None
    authors_missing: int


def summarize_corpus(corpus: Corpus) -> list[SummaryRow]:
    rows = []
    for (year, kind), recs in corpus.by_year_venue.items():
        authors = [r.author_count for r in recs if r.author_count is not None]
        mean = sum(authors) / len(authors) if authors else None
        rows.append(SummaryRow(year, kind, len(recs), mean, len(recs) - len(authors)))
    return rows


def write_summary(rows: list[SummaryRow], path: str | Path) -> None:
    lines = ["year,venue_kind,count,mean_author_count,authors_missing"]
    for r in rows:
        mean = "" if r.mean_author_count is None else repr(r.mean_author_count)
        lines.append(f"{r.year},{r.venue_kind},{r.count},{mean},{r.authors_missing}")
    atomic_write(path, "\n".join(lines) + "\n")


def load_discipline_map(path: str | Path) -> dict[str, str]:
    """CSV with header ``venue_name,discipline``."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["venue_name", "discipline"]:
            raise ValueError(f"{path}: expected header 'venue_name,discipline'")
        mapping = {}
        for n, row in enumerate(reader, 2):
            venue, disc = (row["venue_name"] or "").strip(), (row["discipline"] or "").strip()
            if not venue or not disc:
                raise ValueError(f"{path}:{n}: empty venue_name or discipline")
            if mapping.get(venue, disc) != disc:
                raise ValueError(f"{path}:{n}: conflicting discipline for {venue!r}")
            mapping[venue] = disc
    return mapping


def apply_discipline_map(corpus: Corpus, mapping: Mapping[str, str]) -> Corpus:
    """Fill missing discipline labels from a venue→discipline map."""
    recs = tuple(
        replace(r, discipline=mapping[r.venue_name])
        if r.discipline is None and r.venue_name in mapping else r
        for r in corpus.records
    )
    return Corpus(recs, corpus.report)


def discipline_of(record: AbstractRecord, mapping: Mapping[str, str] | None = None) -> str:
    if record.discipline:
        return record.discipline
    if mapping and record.venue_name in mapping:
        return mapping[record.venue_name]
    return UNMAPPED
