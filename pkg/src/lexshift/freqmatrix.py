"""Year x lemma document-frequency matrix and linear counterfactual trends.

``f[y, w]`` is the share of year-``y`` documents whose lemma set contains
``w``. Each word gets an ordinary least-squares line through its yearly
frequencies over a fit window; the extrapolated value is the expected
frequency, clamped from below to one document's worth of frequency so the
observed/expected ratio is always finite.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import partial
from pathlib import Path
from typing import Mapping

import numpy as np

from ._io import atomic_write, parallel_map
from .corpus import Corpus
from .textproc import LexiconBundle, default_lexicon, lemma_set

DEFAULT_FIT_YEARS = (2000, 2021)


def document_lemmas(corpus: Corpus, lex: LexiconBundle | None = None, workers: int = 1) -> dict[str, frozenset[str]]:
    """Distinct lemmas per document id."""
    lex = lex or default_lexicon()
    texts = [r.text for r in corpus.records]
    sets = parallel_map(partial(lemma_set, lex=lex), texts, workers)
    return {r.id: s for r, s in zip(corpus.records, sets)}


@dataclass(frozen=True)
class YearWordMatrix:
    years: list[int]
    vocab: list[str]
    counts: np.ndarray  # (n_years, n_vocab) documents containing the word
    n_docs: np.ndarray  # (n_years,)
    min_doc_count: int = 1

    def __post_init__(self):
        object.__setattr__(self, "_year_idx", {y: i for i, y in enumerate(self.years)})
        object.__setattr__(self, "_word_idx", {w: j for j, w in enumerate(self.vocab)})

    @property
    def f(self) -> np.ndarray:
        return self.counts / self.n_docs[:, None]

    def year_index(self, year: int) -> int:
        try:
            return self._year_idx[year]
        except KeyError:
            raise KeyError(f"year {year} not in matrix") from None

    def word_index(self, word: str) -> int:
        try:
            return self._word_idx[word]
        except KeyError:
            raise KeyError(f"word {word!r} not in vocabulary") from None

    def __contains__(self, word: str) -> bool:
        return word in self._word_idx

    def freq(self, year: int, word: str) -> float:
        i = self.year_index(year)
        j = self._word_idx.get(word)
        if j is None:
            return 0.0
        return float(self.counts[i, j] / self.n_docs[i])

    def series(self, word: str) -> np.ndarray:
        return self.counts[:, self.word_index(word)] / self.n_docs


def build_matrix(
    corpus: Corpus,
    lex: LexiconBundle | None = None,
    min_doc_count: int = 1,
    workers: int = 1,
    lemmas: Mapping[str, frozenset[str]] | None = None,
) -> YearWordMatrix:
    """Document-level frequency matrix over all years with documents.

    Lemmas found in fewer than `min_doc_count` documents overall are pruned.
    Pass precomputed `lemmas` (id -> lemma set) to skip preprocessing.
    """
    if len(corpus) == 0:
        raise ValueError("empty corpus")
    if lemmas is None:
        lemmas = document_lemmas(corpus, lex, workers)
    per_year: dict[int, Counter] = {}
    n_docs: Counter = Counter()
    for rec in corpus.records:
        per_year.setdefault(rec.year, Counter()).update(lemmas[rec.id])
        n_docs[rec.year] += 1
    years = sorted(per_year)
    total: Counter = Counter()
    for c in per_year.values():
        total.update(c)
    vocab = sorted(w for w, n in total.items() if n >= min_doc_count)
    col = {w: j for j, w in enumerate(vocab)}
    counts = np.zeros((len(years), len(vocab)), dtype=np.int64)
    for i, y in enumerate(years):
        for w, n in per_year[y].items():
            j = col.get(w)
            if j is not None:
                counts[i, j] = n
    return YearWordMatrix(years, vocab, counts, np.array([n_docs[y] for y in years], dtype=np.int64), min_doc_count)


# ---------------------------------------------------------------------------
# counterfactual fits


@dataclass(frozen=True)
class TrendModel:
    slope: float
    intercept: float
    fit_years: tuple[int, int]
    floor_epsilon: float

    def predict(self, year: int) -> float:
        return max(self.slope * year + self.intercept, self.floor_epsilon)


@dataclass(frozen=True)
class DepartureRecord:
    word: str
    year: int
    observed: float
    expected: float
    delta: float
    ratio: float


def _fit_rows(m: YearWordMatrix, fit_years: tuple[int, int]) -> list[int]:
    lo, hi = fit_years
    if lo > hi:
        raise ValueError(f"inverted fit window {fit_years}")
    rows = [i for i, y in enumerate(m.years) if lo <= y <= hi]
    if len(rows) < 2:
        raise ValueError("insufficient fit window")
    return rows


def _ols_columns(x: np.ndarray, Y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Column-wise least squares of Y on x. Accumulates year by year so a
    single column and the full matrix give bitwise-identical results."""
    xm = x.mean()
    xc = x - xm
    ym = np.zeros(Y.shape[1])
    for i in range(len(x)):
        ym += Y[i]
    ym /= len(x)
    sxy = np.zeros(Y.shape[1])
    sxx = 0.0
    for i in range(len(x)):
        sxy += xc[i] * (Y[i] - ym)
        sxx += xc[i] * xc[i]
    slope = sxy / sxx
    return slope, ym - slope * xm


def floor_for(m: YearWordMatrix, fit_years: tuple[int, int]) -> float:
    rows = _fit_rows(m, fit_years)
    return 1.0 / float(m.n_docs[rows].max())


def fit_all(m: YearWordMatrix, fit_years: tuple[int, int] = DEFAULT_FIT_YEARS) -> tuple[np.ndarray, np.ndarray, float]:
    """Slopes, intercepts and floor for every vocabulary word."""
    rows = _fit_rows(m, fit_years)
    x = np.array([m.years[i] for i in rows], dtype=float)
    f = m.f[rows]
    slope, intercept = _ols_columns(x, f)
    return slope, intercept, 1.0 / float(m.n_docs[rows].max())


def fit_counterfactual(m: YearWordMatrix, word: str, fit_years: tuple[int, int] = DEFAULT_FIT_YEARS) -> TrendModel:
    rows = _fit_rows(m, fit_years)
    x = np.array([m.years[i] for i in rows], dtype=float)
    y = m.series(word)[rows][:, None]
    slope, intercept = _ols_columns(x, y)
    return TrendModel(float(slope[0]), float(intercept[0]), tuple(fit_years), 1.0 / float(m.n_docs[rows].max()))


def _expected(slope, intercept, year, floor):
    return np.maximum(slope * year + intercept, floor)


def departures(m: YearWordMatrix, word: str, target_year: int, fit_years: tuple[int, int] = DEFAULT_FIT_YEARS) -> DepartureRecord:
    model = fit_counterfactual(m, word, fit_years)
    observed = m.freq(target_year, word)
    expected = model.predict(target_year)
    return DepartureRecord(word, target_year, observed, expected, observed - expected, observed / expected)


@dataclass(frozen=True)
class DepartureTable:
    year: int
    vocab: list[str]
    observed: np.ndarray
    expected: np.ndarray
    baseline: np.ndarray | None = None

    @property
    def delta(self) -> np.ndarray:
        return self.observed - self.expected

    @property
    def ratio(self) -> np.ndarray:
        return self.observed / self.expected

    def records(self) -> list[DepartureRecord]:
        d, r = self.delta, self.ratio
        return [
            DepartureRecord(w, self.year, float(self.observed[j]), float(self.expected[j]), float(d[j]), float(r[j]))
            for j, w in enumerate(self.vocab)
        ]


def departure_table(
    m: YearWordMatrix,
    target_year: int,
    fit_years: tuple[int, int] = DEFAULT_FIT_YEARS,
    baseline_year: int | None = None,
) -> DepartureTable:
    """Departures of every word in `target_year`; `baseline_year` adds the
    clamped counterfactual at that year (used to split rare from common)."""
    i = m.year_index(target_year)
    slope, intercept, floor = fit_all(m, fit_years)
    observed = m.counts[i] / m.n_docs[i]
    expected = _expected(slope, intercept, target_year, floor)
    baseline = None if baseline_year is None else _expected(slope, intercept, baseline_year, floor)
    return DepartureTable(target_year, m.vocab, observed, expected, baseline)


def historical_departures(
    m: YearWordMatrix,
    start: int = 2005,
    end: int | None = None,
    min_fit_years: int = 5,
) -> list[DepartureTable]:
    """Trailing-window departures: each target year is fit on every earlier
    matrix year, provided at least `min_fit_years` exist."""
    end = max(m.years) if end is None else end
    out = []
    for year in m.years:
        if not start <= year <= end:
            continue
        earlier = [y for y in m.years if y < year]
        if len(earlier) < max(min_fit_years, 2):
            continue
        out.append(departure_table(m, year, (min(earlier), max(earlier))))
    return out


def write_matrix(m: YearWordMatrix, path: str | Path) -> None:
    """CSV ``year,word,frequency,n_docs``; zero cells are omitted."""
    lines = ["year,word,frequency,n_docs"]
    f = m.f
    for i, y in enumerate(m.years):
        nd = int(m.n_docs[i])
        for j in np.flatnonzero(m.counts[i]):
            lines.append(f"{y},{m.vocab[j]},{float(f[i, j])!r},{nd}")
    atomic_write(path, "\n".join(lines) + "\n")


def write_departures(tables: list[DepartureTable], path: str | Path) -> None:
    lines = ["word,year,observed,expected,delta,ratio"]
    for t in tables:
        for r in t.records():
            lines.append(f"{r.word},{r.year},{r.observed!r},{r.expected!r},{r.delta!r},{r.ratio!r}")
    atomic_write(path, "\n".join(lines) + "\n")
