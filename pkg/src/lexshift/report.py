"""Yearly trend series of semantic properties with a classified-document overlay."""
from __future__ import annotations

import csv
import io
import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from ._io import atomic_write
from .classify import ClassificationResult
from .corpus import AbstractRecord, Corpus
from .semantics import PROFILE_FIELDS, SemanticProfile

GROUPS = ("journal", "proceedings", "all", "llm_overlay")
METRICS = PROFILE_FIELDS + ("author_count",)
HEADER = "metric,group,year,mean,normalized,n_docs"


@dataclass
class TrendSeries:
    metric: str
    group: str
    base_year: int
    points: dict[int, float] = field(default_factory=dict)
    n_docs: dict[int, int] = field(default_factory=dict)
    std: dict[int, float] = field(default_factory=dict)
    normalized: dict[int, float] = field(default_factory=dict)


def metric_value(metric: str, record: AbstractRecord, prof: SemanticProfile | None) -> float | None:
    """Value of `metric` for one document, or None when unavailable.

    Punctuation rates are addressed as ``punct:<mark>``.
    """
    if metric == "author_count":
        return None if record.author_count is None else float(record.author_count)
    if prof is None:
        return None
    if metric.startswith("punct:"):
        return prof.punctuation_per_sentence.get(metric[6:])
    if metric in PROFILE_FIELDS:
        return float(getattr(prof, metric))
    raise ValueError(f"unknown metric {metric!r}")


def _flags(results) -> dict[str, bool]:
    if results is None:
        return {}
    if isinstance(results, Mapping):
        return dict(results)
    return {r.id: r.is_llm for r in results}


def trend_series(
    corpus: Corpus,
    profiles: Mapping[str, SemanticProfile],
    results: Sequence[ClassificationResult] | Mapping[str, bool] | None,
    metric: str,
    base_year: int = 2000,
    onset_year: int = 2023,
) -> list[TrendSeries]:
    """Yearly means per venue kind, all venues, and the classified overlay.

    Documents flagged in years from `onset_year` on are removed from the
    main groups and averaged separately; flags in earlier years are ignored.
    Each main series is normalized by its own base-year mean, the overlay
    by the base-year mean of the "all" group.
    """
    if not (metric in METRICS or metric.startswith("punct:")):
        raise ValueError(f"unknown metric {metric!r}")
    if base_year not in corpus.by_year:
        raise ValueError(f"base year {base_year} not in corpus")
    flags = _flags(results)
    values: dict[str, dict[int, list[float]]] = {g: defaultdict(list) for g in GROUPS}
    for r in corpus.records:
        v = metric_value(metric, r, profiles.get(r.id))
        if v is None:
            continue
        if r.year >= onset_year and flags.get(r.id, False):
            values["llm_overlay"][r.year].append(v)
        else:
            values[r.venue_kind][r.year].append(v)
            values["all"][r.year].append(v)

    out = []
    for g in GROUPS:
        s = TrendSeries(metric, g, base_year)
        for year in sorted(values[g]):
            arr = np.array(values[g][year], dtype=float)
            s.points[year] = float(arr.mean())
            s.n_docs[year] = int(arr.size)
            s.std[year] = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
        out.append(s)
    base_of = {s.group: s.points.get(base_year) for s in out}
    for s in out:
        base = base_of["all"] if s.group == "llm_overlay" else base_of[s.group]
        for year, mean in s.points.items():
            s.normalized[year] = mean / base if base else math.nan
    return out


def _rows(series: Sequence[TrendSeries]):
    rows = []
    for s in series:
        for year in s.points:
            rows.append((s.metric, s.group, year, s.points[year], s.normalized.get(year, math.nan),
                         s.n_docs[year], s.std.get(year, math.nan)))
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    return rows


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def export_series(series: Sequence[TrendSeries], path: str | Path, json_path: str | Path | None = None) -> None:
    """CSV ``metric,group,year,mean,normalized,n_docs``, sorted by
    (metric, group, year); optionally the same rows as JSON."""
    rows = _rows(series)
    atomic_write(path, _csv([HEADER.split(",")] + [
        [m, g, y, repr(mean), repr(norm), n] for m, g, y, mean, norm, n, _ in rows
    ]))
    if json_path is not None:
        payload = [
            {"metric": m, "group": g, "year": y, "mean": mean,
             "normalized": None if math.isnan(norm) else norm, "n_docs": n}
            for m, g, y, mean, norm, n, _ in rows
        ]
        atomic_write(json_path, json.dumps(payload, indent=1) + "\n")


def export_distribution(series: Sequence[TrendSeries], path: str | Path) -> None:
    """Per-point count, mean and sample standard deviation."""
    atomic_write(path, _csv([["metric", "group", "year", "n_docs", "mean", "std"]] + [
        [m, g, y, n, repr(mean), repr(sd)] for m, g, y, mean, _, n, sd in _rows(series)
    ]))


def read_series_csv(path: str | Path) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as fh:
        return [
            {"metric": r["metric"], "group": r["group"], "year": int(r["year"]),
             "mean": float(r["mean"]), "normalized": float(r["normalized"]), "n_docs": int(r["n_docs"])}
            for r in csv.DictReader(fh)
        ]
