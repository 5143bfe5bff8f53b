"""Excess-word detection, style filtering and marker-set tuning.

A word is *excess* in a target year when its observed document frequency
beats the counterfactual by more than a fixed gap, or by more than a
frequency-dependent ratio. Excess style words are then split into rare and
common candidates by a cutoff on their baseline (counterfactual) frequency;
the cutoff is swept over a grid and the one that maximizes the post/pre
prevalence differential wins. The mean of the rare and common differentials
is a lower-bound estimate of the share of machine-written documents.
"""
from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass, field, replace
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from ._io import atomic_write
from .corpus import AbstractRecord, Corpus
from .freqmatrix import DEFAULT_FIT_YEARS, YearWordMatrix, departure_table
from .textproc import LexiconBundle, default_lexicon, lemma_set

log = logging.getLogger(__name__)

LABELS = ("style", "content")
RATIO_EXPONENT = math.log10(3) / -2


def ratio_curve(f: float) -> float:
    """Frequency-dependent ratio threshold f ** (log10(3) / -2).

    Equals 1 at f = 1 and 3 at f = 0.01; unbounded as f -> 0.
    """
    if f <= 0:
        return math.inf
    return f ** RATIO_EXPONENT


def default_grid(lo: float = 0.001, hi: float = 0.1, points: int = 100) -> list[float]:
    if points < 1 or lo <= 0 or hi < lo:
        raise ValueError("grid needs points >= 1 and 0 < lo <= hi")
    if points == 1:
        return [lo]
    return [float(x) for x in np.geomspace(lo, hi, points)]


@dataclass(frozen=True)
class ExcessWordRecord:
    word: str
    observed: float
    expected: float
    delta: float
    ratio: float
    flagged_by: str  # delta | ratio | both
    label: str = "unlabeled"  # style | content | unlabeled
    baseline: float = math.nan


def preliminary_excess(
    m: YearWordMatrix,
    target_year: int,
    fit_years: tuple[int, int] = DEFAULT_FIT_YEARS,
    delta_thresh: float = 0.03,
    ratio_curve: Callable[[float], float] = ratio_curve,
    baseline_year: int | None = None,
) -> list[ExcessWordRecord]:
    """Words whose gap beats `delta_thresh` or whose ratio beats
    ``ratio_curve(observed)``. Sorted by gap, largest first.

    `baseline_year` (default: the year after the fit window) fixes where the
    counterfactual is read to classify a word as rare or common later on.
    """
    if baseline_year is None:
        baseline_year = fit_years[1] + 1
    table = departure_table(m, target_year, fit_years, baseline_year)
    delta, ratio = table.delta, table.ratio
    out = []
    for j, word in enumerate(table.vocab):
        obs = float(table.observed[j])
        by_delta = bool(delta[j] > delta_thresh)
        by_ratio = bool(ratio[j] > ratio_curve(obs))
        if not (by_delta or by_ratio):
            continue
        flagged = "both" if by_delta and by_ratio else ("delta" if by_delta else "ratio")
        out.append(ExcessWordRecord(
            word, obs, float(table.expected[j]), float(delta[j]), float(ratio[j]),
            flagged, baseline=float(table.baseline[j]),
        ))
    out.sort(key=lambda r: (-r.delta, r.word))
    return out


# ---------------------------------------------------------------------------
# style / content annotation


def parse_annotations(lines: Iterable[str], source: str = "<annotations>") -> dict[str, str]:
    """Parse CSV ``word,label``; raises ValueError naming the bad line."""
    out: dict[str, str] = {}
    reader = csv.reader(lines)
    header = next(reader, None)
    if header is None:
        return out
    if [h.strip() for h in header] != ["word", "label"]:
        raise ValueError(f"{source}:1: expected header 'word,label'")
    for n, row in enumerate(reader, 2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise ValueError(f"{source}:{n}: expected 2 columns, got {len(row)}")
        word, label = row[0].strip().lower(), row[1].strip().lower()
        if not word or label not in LABELS:
            raise ValueError(f"{source}:{n}: bad annotation {row!r}")
        if out.get(word, label) != label:
            raise ValueError(f"{source}:{n}: conflicting labels for {word!r}")
        out[word] = label
    return out


def load_annotations(path: str | Path) -> dict[str, str]:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_annotations(fh, str(path))


def write_annotations(labels: Mapping[str, str], path: str | Path) -> None:
    lines = ["word,label"] + [f"{w},{labels[w]}" for w in sorted(labels)]
    atomic_write(path, "\n".join(lines) + "\n")


def style_filter(
    records: Sequence[ExcessWordRecord],
    annotations: Mapping[str, str] | str | Path,
) -> tuple[list[ExcessWordRecord], list[ExcessWordRecord]]:
    """Return (style records, records lacking any annotation)."""
    if not isinstance(annotations, Mapping):
        annotations = load_annotations(annotations)
    style, missing = [], []
    for r in records:
        label = annotations.get(r.word)
        if label is None:
            missing.append(r)
        elif label == "style":
            style.append(replace(r, label="style"))
    return style, missing


# ---------------------------------------------------------------------------
# group prevalence


def _doc_sets(
    records: Sequence[AbstractRecord],
    lex: LexiconBundle | None,
    lemmas: Mapping[str, frozenset[str]] | None,
) -> list[frozenset[str]]:
    if lemmas is not None:
        return [lemmas[r.id] for r in records]
    lex = lex or default_lexicon()
    return [lemma_set(r.text, lex) for r in records]


def group_prevalence(
    records: Sequence[AbstractRecord],
    words: Iterable[str],
    lex: LexiconBundle | None = None,
    lemmas: Mapping[str, frozenset[str]] | None = None,
) -> float:
    """Share of documents containing at least one of `words`."""
    if not records:
        raise ValueError("empty document slice")
    words = frozenset(words)
    if not words:
        return 0.0
    sets = _doc_sets(records, lex, lemmas)
    return sum(1 for s in sets if not words.isdisjoint(s)) / len(sets)


def prevalence_differential(
    corpus: Corpus,
    words: Iterable[str],
    post_year: int,
    pre_year: int,
    lex: LexiconBundle | None = None,
    lemmas: Mapping[str, frozenset[str]] | None = None,
) -> float:
    post, pre = corpus.year_slice(post_year), corpus.year_slice(pre_year)
    for year, recs in ((post_year, post), (pre_year, pre)):
        if not recs:
            raise ValueError(f"no documents for year {year}")
    words = frozenset(words)
    return group_prevalence(post, words, lex, lemmas) - group_prevalence(pre, words, lex, lemmas)


# ---------------------------------------------------------------------------
# tuning


@dataclass(frozen=True)
class SweepRow:
    mode: str
    cutoff: float
    set_size: int
    delta: float


@dataclass(frozen=True)
class TuningResult:
    mode: str
    cutoff: float
    words: frozenset[str]
    delta: float
    sweep: list[SweepRow] = field(default_factory=list)


class _Membership:
    """Document x candidate-word incidence for one year pair."""

    def __init__(self, words: list[str], post_sets, pre_sets):
        self.words = words
        col = {w: j for j, w in enumerate(words)}
        self.post = self._matrix(post_sets, col)
        self.pre = self._matrix(pre_sets, col)

    @staticmethod
    def _matrix(sets, col) -> np.ndarray:
        mat = np.zeros((len(sets), len(col)), dtype=bool)
        for i, s in enumerate(sets):
            for w in s:
                j = col.get(w)
                if j is not None:
                    mat[i, j] = True
        return mat

    def delta(self, mask: np.ndarray) -> float:
        if not mask.any():
            return 0.0
        p = int(self.post[:, mask].any(axis=1).sum())
        q = int(self.pre[:, mask].any(axis=1).sum())
        return p / self.post.shape[0] - q / self.pre.shape[0]


def _candidate_mask(records: Sequence[ExcessWordRecord], mode: str, cutoff: float, strategy: str) -> np.ndarray:
    if strategy == "baseline":
        base = np.array([r.baseline for r in records])
        if np.isnan(base).any():
            raise ValueError("excess records lack baseline frequencies")
        return base < cutoff if mode == "rare" else base >= cutoff
    if strategy == "ratio":
        # literal reading: ratio cutoff for rare words, gap cutoff for common
        if mode == "rare":
            return np.array([r.ratio >= cutoff for r in records], dtype=bool)
        return np.array([r.delta >= cutoff for r in records], dtype=bool)
    raise ValueError(f"unknown strategy {strategy!r}")


def tune_marker_set(
    records: Sequence[ExcessWordRecord],
    corpus: Corpus,
    mode: str,
    post_year: int,
    pre_year: int,
    cutoff_grid: Sequence[float] | None = None,
    lex: LexiconBundle | None = None,
    lemmas: Mapping[str, frozenset[str]] | None = None,
    strategy: str = "baseline",
) -> TuningResult:
    """Sweep cutoffs and keep the candidate set with the largest differential.

    Rare candidates have baseline below the cutoff, common ones at or above
    it. Ties go to the smaller set, then the smaller cutoff. Empty candidate
    sets are never selected.
    """
    if mode not in ("rare", "common"):
        raise ValueError(f"mode must be 'rare' or 'common', not {mode!r}")
    grid = list(default_grid() if cutoff_grid is None else cutoff_grid)
    if not grid:
        raise ValueError("empty cutoff grid")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("cutoff grid must be strictly ascending")
    post, pre = corpus.year_slice(post_year), corpus.year_slice(pre_year)
    if not post or not pre:
        raise ValueError(f"no documents for year {post_year if not post else pre_year}")
    records = list(records)
    words = [r.word for r in records]
    member = _Membership(words, _doc_sets(post, lex, lemmas), _doc_sets(pre, lex, lemmas))

    sweep = []
    best = None
    for cutoff in grid:
        mask = _candidate_mask(records, mode, cutoff, strategy) if records else np.zeros(0, bool)
        size = int(mask.sum())
        d = member.delta(mask)
        sweep.append(SweepRow(mode, float(cutoff), size, d))
        if size == 0:
            continue
        key = (-d, size, cutoff)
        if best is None or key < best[0]:
            best = (key, cutoff, mask)
    if best is None:
        raise ValueError("no candidates")
    _, cutoff, mask = best
    chosen = frozenset(w for w, keep in zip(words, mask) if keep)
    return TuningResult(mode, float(cutoff), chosen, -best[0][0], sweep)


@dataclass(frozen=True)
class MarkerSets:
    rare: frozenset[str]
    common: frozenset[str]
    rare_cutoff: float
    common_cutoff: float
    delta_rare: float
    delta_common: float
    post_year: int
    pre_year: int

    def __post_init__(self):
        if self.rare & self.common:
            raise ValueError("rare and common marker sets overlap")
        for d in (self.delta_rare, self.delta_common):
            if not -1.0 <= d <= 1.0:
                raise ValueError(f"differential {d} outside [-1, 1]")

    @property
    def estimate(self) -> float:
        return estimate_llm_share(self.delta_rare, self.delta_common)


def tune_markers(
    records: Sequence[ExcessWordRecord],
    corpus: Corpus,
    post_year: int,
    pre_year: int,
    cutoff_grid: Sequence[float] | None = None,
    lex: LexiconBundle | None = None,
    lemmas: Mapping[str, frozenset[str]] | None = None,
    strategy: str = "baseline",
) -> tuple[MarkerSets, list[SweepRow]]:
    """Tune rare and common sets for one year pair.

    A word selected by both sweeps stays in the common set and the rare
    differential is recomputed without it.
    """
    kw = dict(cutoff_grid=cutoff_grid, lex=lex, lemmas=lemmas, strategy=strategy)
    rare = tune_marker_set(records, corpus, "rare", post_year, pre_year, **kw)
    common = tune_marker_set(records, corpus, "common", post_year, pre_year, **kw)
    rare_words, delta_rare = rare.words, rare.delta
    if rare_words & common.words:
        rare_words = rare_words - common.words
        log.info("moved %d words from rare to common", len(rare.words & common.words))
        delta_rare = prevalence_differential(corpus, rare_words, post_year, pre_year, lex, lemmas)
    sets = MarkerSets(
        rare=rare_words,
        common=common.words,
        rare_cutoff=rare.cutoff,
        common_cutoff=common.cutoff,
        delta_rare=delta_rare,
        delta_common=common.delta,
        post_year=post_year,
        pre_year=pre_year,
    )
    return sets, rare.sweep + common.sweep


def estimate_llm_share(delta_rare: float, delta_common: float) -> float:
    """Lower-bound share: mean of the two differentials, floored at 0."""
    for d in (delta_rare, delta_common):
        if not -1.0 <= d <= 1.0:
            raise ValueError(f"differential {d} outside [-1, 1]")
    return max(0.0, (delta_rare + delta_common) / 2)


def format_percent(fraction: float, places: int = 1) -> str:
    """Half-up percent display: 0.2615 -> '26.2%'."""
    value = Decimal(repr(round(fraction * 100, 9)))
    q = Decimal(1).scaleb(-places)
    return f"{value.quantize(q, rounding=ROUND_HALF_UP)}%"


# ---------------------------------------------------------------------------
# outputs


def write_excess(records: Sequence[ExcessWordRecord], path: str | Path) -> None:
    lines = ["word,observed,expected,delta,ratio,baseline,flagged_by,label"]
    for r in records:
        lines.append(
            f"{r.word},{r.observed!r},{r.expected!r},{r.delta!r},{r.ratio!r},{r.baseline!r},{r.flagged_by},{r.label}"
        )
    atomic_write(path, "\n".join(lines) + "\n")


def write_sweep(rows: Sequence[SweepRow], path: str | Path) -> None:
    lines = ["mode,cutoff,set_size,delta"] + [f"{r.mode},{r.cutoff!r},{r.set_size},{r.delta!r}" for r in rows]
    atomic_write(path, "\n".join(lines) + "\n")


def marker_summary(sets: MarkerSets) -> dict:
    return {
        "post_year": sets.post_year,
        "pre_year": sets.pre_year,
        "rare_cutoff": sets.rare_cutoff,
        "common_cutoff": sets.common_cutoff,
        "rare_size": len(sets.rare),
        "common_size": len(sets.common),
        "delta_rare": sets.delta_rare,
        "delta_common": sets.delta_common,
        "estimate": sets.estimate,
        "estimate_display": format_percent(sets.estimate),
        "rare": sorted(sets.rare),
        "common": sorted(sets.common),
    }


def write_summary_json(summaries: list[dict], path: str | Path) -> None:
    atomic_write(path, json.dumps(summaries, indent=2, sort_keys=True) + "\n")
