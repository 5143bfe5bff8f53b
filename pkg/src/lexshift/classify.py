"""Multi-marker document classification and prevalence tables.

A document is classified as likely machine-written when it contains at
least `min_common` distinct common markers and at least `min_rare` distinct
rare markers. Outputs are population-level counts; the flag on a single
document is not an authorship verdict.
"""
from __future__ import annotations

import csv
import re
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from ._io import atomic_write
from .corpus import Corpus, discipline_of
from .excess import MarkerSets, format_percent
from .freqmatrix import document_lemmas
from .textproc import LexiconBundle, TokenizedAbstract

DEFAULT_SENSITIVITY_GRID = [(c, r) for c in range(0, 4) for r in range(0, 5)]


@dataclass(frozen=True)
class GlobalMarkerSet:
    rare: frozenset[str]
    common: frozenset[str]
    provenance: tuple[tuple[int, str, float], ...] = ()

    def __post_init__(self):
        if self.rare & self.common:
            raise ValueError("a marker cannot be both rare and common")


def build_global_markers(sets: Sequence[MarkerSets]) -> GlobalMarkerSet:
    """Union the tuned sets; a lemma that is rare in one year and common in
    another is kept as common."""
    if not sets:
        raise ValueError("no marker sets given")
    rare, common = set(), set()
    prov = []
    for s in sets:
        rare |= s.rare
        common |= s.common
        prov.append((s.post_year, "rare", s.rare_cutoff))
        prov.append((s.post_year, "common", s.common_cutoff))
    return GlobalMarkerSet(frozenset(rare - common), frozenset(common), tuple(prov))


@dataclass(frozen=True)
class ClassificationResult:
    id: str
    rare_hits: int
    common_hits: int
    is_llm: bool


def _hits(lemmas: Iterable[str], g: GlobalMarkerSet) -> tuple[int, int]:
    s = lemmas if isinstance(lemmas, (set, frozenset)) else set(lemmas)
    return len(g.rare & s), len(g.common & s)


def classify_abstract(
    t: TokenizedAbstract | Iterable[str],
    g: GlobalMarkerSet,
    min_common: int = 1,
    min_rare: int = 2,
    doc_id: str = "",
) -> ClassificationResult:
    """Count distinct marker lemmas; `t` may be a TokenizedAbstract or any
    iterable of lemmas."""
    if min_common < 0 or min_rare < 0:
        raise ValueError("thresholds must be non-negative")
    lemmas = t.lemmas if isinstance(t, TokenizedAbstract) else t
    rare, common = _hits(lemmas, g)
    return ClassificationResult(doc_id, rare, common, common >= min_common and rare >= min_rare)


def classify_corpus(
    corpus: Corpus,
    g: GlobalMarkerSet,
    min_common: int = 1,
    min_rare: int = 2,
    lex: LexiconBundle | None = None,
    lemmas: Mapping[str, frozenset[str]] | None = None,
    workers: int = 1,
) -> list[ClassificationResult]:
    if lemmas is None:
        lemmas = document_lemmas(corpus, lex, workers)
    return [classify_abstract(lemmas[r.id], g, min_common, min_rare, r.id) for r in corpus.records]


@dataclass(frozen=True)
class SensitivityRow:
    min_common: int
    min_rare: int
    fp_count: int
    fp_total: int
    pos_count: int
    pos_total: int

    @property
    def fp_rate(self) -> float | None:
        return self.fp_count / self.fp_total if self.fp_total else None

    @property
    def pos_rate(self) -> float | None:
        return self.pos_count / self.pos_total if self.pos_total else None


def sensitivity_sweep(
    corpus: Corpus,
    g: GlobalMarkerSet,
    grid: Sequence[tuple[int, int]] = DEFAULT_SENSITIVITY_GRID,
    pre_cut_year: int = 2023,
    post_start: int | None = None,
    lex: LexiconBundle | None = None,
    lemmas: Mapping[str, frozenset[str]] | None = None,
) -> list[SensitivityRow]:
    """False-positive rate (years before `pre_cut_year`) and positive rate
    (years from `post_start`, default the year after the cut) for every
    (min_common, min_rare) pair."""
    if not grid:
        raise ValueError("empty threshold grid")
    post_start = pre_cut_year + 1 if post_start is None else post_start
    if lemmas is None:
        lemmas = document_lemmas(corpus, lex)
    hits = np.array([_hits(lemmas[r.id], g) for r in corpus.records], dtype=np.int64).reshape(-1, 2)
    years = np.array([r.year for r in corpus.records], dtype=np.int64)
    pre = years < pre_cut_year
    post = years >= post_start
    rows = []
    for min_common, min_rare in grid:
        flag = (hits[:, 1] >= min_common) & (hits[:, 0] >= min_rare)
        rows.append(SensitivityRow(
            int(min_common), int(min_rare),
            int((flag & pre).sum()), int(pre.sum()),
            int((flag & post).sum()), int(post.sum()),
        ))
    return rows


# ---------------------------------------------------------------------------
# prevalence tables


@dataclass(frozen=True)
class PrevalenceRow:
    key: tuple
    classified: int
    total: int

    @property
    def percent(self) -> float:
        return 100.0 * self.classified / self.total if self.total else 0.0

    @property
    def display(self) -> str:
        return format_percent(self.classified / self.total if self.total else 0.0)


@dataclass
class PrevalenceTables:
    by_year: list[PrevalenceRow] = field(default_factory=list)
    by_year_venue: list[PrevalenceRow] = field(default_factory=list)
    by_discipline_year: list[PrevalenceRow] = field(default_factory=list)


def prevalence_tables(
    corpus: Corpus,
    results: Sequence[ClassificationResult],
    discipline_map: Mapping[str, str] | None = None,
) -> PrevalenceTables:
    """Per year, per (year, venue kind), and per (discipline, year) over
    journal documents; unlabeled journals fall under "unmapped"."""
    flags = {}
    for res in results:
        if res.id not in corpus.by_id:
            raise KeyError(f"classification for unknown id {res.id!r}")
        flags[res.id] = res.is_llm
    year = defaultdict(lambda: [0, 0])
    venue = defaultdict(lambda: [0, 0])
    disc = defaultdict(lambda: [0, 0])
    for r in corpus.records:
        hit = int(flags.get(r.id, False))
        for table, key in ((year, (r.year,)), (venue, (r.year, r.venue_kind))):
            table[key][0] += hit
            table[key][1] += 1
        if r.venue_kind == "journal":
            key = (discipline_of(r, discipline_map), r.year)
            disc[key][0] += hit
            disc[key][1] += 1

    def rows(table):
        return [PrevalenceRow(k, v[0], v[1]) for k, v in sorted(table.items())]

    return PrevalenceTables(rows(year), rows(venue), rows(disc))


# ---------------------------------------------------------------------------
# files

_PROV = re.compile(r"#\s*year=(\d+)\s+mode=(rare|common)\s+cutoff=(\S+)")


def write_markers(g: GlobalMarkerSet, path: str | Path) -> None:
    lines = [f"# year={y} mode={mode} cutoff={cut!r}" for y, mode, cut in g.provenance]
    lines.append("word,kind")
    lines += [f"{w},rare" for w in sorted(g.rare)] + [f"{w},common" for w in sorted(g.common)]
    atomic_write(path, "\n".join(lines) + "\n")


def load_markers(path: str | Path) -> GlobalMarkerSet:
    rare, common, prov = set(), set(), []
    seen_header = False
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                m = _PROV.match(line)
                if m:
                    prov.append((int(m.group(1)), m.group(2), float(m.group(3))))
                continue
            if not seen_header:
                if line.replace(" ", "") != "word,kind":
                    raise ValueError(f"{path}:{n}: expected header 'word,kind'")
                seen_header = True
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 2 or parts[1] not in ("rare", "common") or not parts[0]:
                raise ValueError(f"{path}:{n}: bad marker line {line!r}")
            (rare if parts[1] == "rare" else common).add(parts[0].lower())
    if not seen_header:
        raise ValueError(f"{path}: missing header 'word,kind'")
    return GlobalMarkerSet(frozenset(rare - common), frozenset(common), tuple(prov))


def write_classifications(corpus: Corpus, results: Sequence[ClassificationResult], path: str | Path) -> None:
    lines = ["id,year,venue_kind,rare_hits,common_hits,is_llm"]
    for res in results:
        r = corpus.by_id[res.id]
        lines.append(f"{res.id},{r.year},{r.venue_kind},{res.rare_hits},{res.common_hits},{int(res.is_llm)}")
    atomic_write(path, "\n".join(lines) + "\n")


def load_classifications(path: str | Path) -> list[ClassificationResult]:
    with open(path, encoding="utf-8", newline="") as fh:
        return [
            ClassificationResult(row["id"], int(row["rare_hits"]), int(row["common_hits"]), row["is_llm"] == "1")
            for row in csv.DictReader(fh)
        ]


def write_sensitivity(rows: Sequence[SensitivityRow], path: str | Path) -> None:
    def rate(x):
        return "NA" if x is None else repr(x)

    lines = ["min_common,min_rare,fp_count,fp_total,fp_rate,pos_count,pos_total,pos_rate"]
    for r in rows:
        lines.append(
            f"{r.min_common},{r.min_rare},{r.fp_count},{r.fp_total},{rate(r.fp_rate)},"
            f"{r.pos_count},{r.pos_total},{rate(r.pos_rate)}"
        )
    atomic_write(path, "\n".join(lines) + "\n")


def write_tables(tables: PrevalenceTables, outdir: str | Path) -> None:
    outdir = Path(outdir)

    def fmt(row):
        return f"{row.classified},{row.total},{row.display[:-1]}"

    atomic_write(outdir / "table_year.csv", "\n".join(
        ["year,classified,total,percent"] + [f"{r.key[0]},{fmt(r)}" for r in tables.by_year]) + "\n")
    atomic_write(outdir / "table_venue.csv", "\n".join(
        ["year,venue_kind,classified,total,percent"]
        + [f"{r.key[0]},{r.key[1]},{fmt(r)}" for r in tables.by_year_venue]) + "\n")
    atomic_write(outdir / "table_discipline.csv", "\n".join(
        ["discipline,year,classified,total,percent"]
        + [f"{r.key[0]},{r.key[1]},{fmt(r)}" for r in tables.by_discipline_year]) + "\n")
