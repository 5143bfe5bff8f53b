"""Synthetic corpora with known injected marker documents.

Documents are template sentences built from a background vocabulary whose
per-year inclusion probabilities follow ``base + drift * (year - first)``.
From the onset year on, the first ``round(p * n)`` document ids of each year
are injected: they receive at least one common and two rare markers and
their style is shifted (fewer passives and hedges, more commas). The
generator is the ground truth for tuning, classification and trend tests.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import AbstractRecord, Corpus
from .textproc import default_lexicon, lemmatize

JOURNALS = (
    ("Journal of Structural Engineering", "structural"),
    ("Journal of Geotechnical Engineering", "geotechnical"),
    ("Journal of Construction Engineering", "construction"),
    ("Journal of Hydrologic Engineering", "hydrological"),
    ("Journal of Transportation Engineering", "transportation"),
)
PROCEEDINGS = ("Proceedings of the Infrastructure Congress", "Proceedings of the Geo Congress")

# base, past / participle, third person
VERBS = (
    ("evaluate", "evaluated", "evaluates"),
    ("measure", "measured", "measures"),
    ("compare", "compared", "compares"),
    ("report", "reported", "reports"),
    ("test", "tested", "tests"),
    ("assess", "assessed", "assesses"),
    ("observe", "observed", "observes"),
    ("estimate", "estimated", "estimates"),
    ("monitor", "monitored", "monitors"),
    ("examine", "examined", "examines"),
)
HEDGES = ("may", "might", "could", "would", "likely")
PAD_WORDS = ("system", "method")

DEFAULT_RARE = {"underscore": 0.5, "delve": 0.5, "showcase": 0.5, "intricate": 0.5, "pivotal": 0.5, "boast": 0.5}
DEFAULT_COMMON = {"enhance": 0.9}
DEFAULT_STYLE = {
    "passive_multiplier": 0.4,
    "hedging_multiplier": 0.5,
    "first_person_multiplier": 1.0,
    "extra_commas": 2.0,
}
COMMON_BACKGROUND = 0.04
BASE_MIX = {"passive": 0.35, "first_person": 0.2, "hedge": 0.15}


def default_background_vocab(n: int = 300, seed: int = 12345, lo: float = 0.005, hi: float = 0.3) -> list[tuple[str, float, float]]:
    """Pronounceable pseudo-words with log-uniform base frequencies and a
    small linear drift. Every word is its own lemma."""
    rng = np.random.default_rng(seed)
    lex = default_lexicon()
    onsets, vowels, codas = "bdfgklmnprtvz", "aeiou", "mnrtlk"
    taken = set(lex.stopwords) | {v for triple in VERBS for v in triple} | set(PAD_WORDS)
    out = []
    while len(out) < n:
        syl = int(rng.integers(2, 4))
        w = "".join(onsets[rng.integers(len(onsets))] + vowels[rng.integers(len(vowels))] for _ in range(syl))
        w += codas[rng.integers(len(codas))]
        if w in taken or lemmatize(w, lex) != w:
            continue
        taken.add(w)
        base = float(math.exp(rng.uniform(math.log(lo), math.log(hi))))
        drift = float(rng.uniform(-0.1, 0.1) * base / 10)
        out.append((w, base, drift))
    return out


@dataclass
class SimConfig:
    seed: int = 0
    years: tuple[int, int] = (2010, 2025)
    docs_per_year: int = 2000
    background_vocab: list[tuple[str, float, float]] | None = None
    rare_markers: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_RARE))
    common_markers: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_COMMON))
    injection_rate: float = 0.2
    onset_year: int = 2023
    style_deltas: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_STYLE))
    journal_share: float = 0.6
    authors_start: float = 2.0
    authors_slope: float = 0.08

    def __post_init__(self):
        self.years = tuple(self.years)
        if self.background_vocab is None:
            vocab = default_background_vocab()
            # common markers carry a steady background presence
            vocab += [(w, COMMON_BACKGROUND, 0.0) for w in sorted(self.common_markers)]
            self.background_vocab = vocab
        else:
            self.background_vocab = [tuple(v) for v in self.background_vocab]
        self.validate()

    def validate(self) -> None:
        lo, hi = self.years
        if lo > hi:
            raise ValueError("inverted year range")
        if self.docs_per_year < 1:
            raise ValueError("docs_per_year must be positive")
        if not 0.0 <= self.injection_rate <= 1.0:
            raise ValueError("injection_rate must lie in [0, 1]")
        for w, base, _ in self.background_vocab:
            if not 0.0 < base < 1.0:
                raise ValueError(f"background frequency of {w!r} outside (0, 1)")
        for w, f in {**self.rare_markers, **self.common_markers}.items():
            if not 0.0 < f < 1.0:
                raise ValueError(f"injection frequency of {w!r} outside (0, 1)")
        if set(self.rare_markers) & set(self.common_markers):
            raise ValueError("a marker cannot be both rare and common")
        if self.injection_rate > 0 and (len(self.rare_markers) < 2 or len(self.common_markers) < 1):
            raise ValueError("injection needs at least two rare and one common marker")
        if not 0.0 <= self.journal_share <= 1.0:
            raise ValueError("journal_share must lie in [0, 1]")

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "years": list(self.years),
            "docs_per_year": self.docs_per_year,
            "background_vocab": [list(v) for v in self.background_vocab],
            "rare_markers": self.rare_markers,
            "common_markers": self.common_markers,
            "injection_rate": self.injection_rate,
            "onset_year": self.onset_year,
            "style_deltas": self.style_deltas,
            "journal_share": self.journal_share,
            "authors_start": self.authors_start,
            "authors_slope": self.authors_slope,
        }


def load_sim_config(path: str | Path, **overrides) -> SimConfig:
    """JSON key-value config; unknown keys are an error."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise ValueError("simulation config must be a JSON object")
    data.update({k: v for k, v in overrides.items() if v is not None})
    if "style_deltas" in data:
        data["style_deltas"] = {**DEFAULT_STYLE, **data["style_deltas"]}
    try:
        return SimConfig(**data)
    except TypeError as exc:
        raise ValueError(f"bad simulation config: {exc}") from None


def injected_count(rate: float, n: int) -> int:
    return int(math.floor(rate * n + 0.5))


def _pick(rng, pool: dict[str, float], minimum: int) -> list[str]:
    names = sorted(pool)
    draws = rng.random(len(names))
    chosen = [w for w, u in zip(names, draws) if u < pool[w]]
    rest = [w for w in names if w not in chosen]
    if len(chosen) < minimum:
        order = rng.permutation(len(rest))
        chosen += [rest[i] for i in order[: minimum - len(chosen)]]
    return chosen


def _sentence(kind: str, a: str, b: str, rng) -> str:
    base, past, pres = VERBS[rng.integers(len(VERBS))]
    if kind == "passive":
        be = ("was", "were", "is", "are")[rng.integers(4)]
        return f"The {a} {be} {past} with the {b}."
    if kind == "first_person":
        return f"We {past} the {a}, and the {b}."
    if kind == "hedge":
        if rng.random() < 0.2:
            return f"The {a} and the {b} tend to {base}."
        return f"The {a} {HEDGES[rng.integers(len(HEDGES))]} {base} the {b}."
    return f"The {a} {pres} the {b}."


def _mix(injected: bool, style: dict[str, float]) -> tuple[list[str], np.ndarray]:
    mix = dict(BASE_MIX)
    if injected:
        mix["passive"] *= style.get("passive_multiplier", 1.0)
        mix["hedge"] *= style.get("hedging_multiplier", 1.0)
        mix["first_person"] *= style.get("first_person_multiplier", 1.0)
    total = sum(mix.values())
    if total > 1:
        mix = {k: v / total for k, v in mix.items()}
    kinds = list(mix) + ["neutral"]
    probs = np.array(list(mix.values()) + [max(0.0, 1 - sum(mix.values()))])
    return kinds, probs / probs.sum()


def _compose(words: list[str], injected: bool, cfg: SimConfig, rng) -> str:
    words = list(words)
    rng.shuffle(words)
    for pad in PAD_WORDS:
        if len(words) >= 2:
            break
        words.append(pad)
    if len(words) % 2:
        words.append(PAD_WORDS[rng.integers(len(PAD_WORDS))])
    kinds, probs = _mix(injected, cfg.style_deltas)
    sentences = []
    for i in range(0, len(words), 2):
        kind = kinds[rng.choice(len(kinds), p=probs)]
        sentences.append(_sentence(kind, words[i], words[i + 1], rng))
    if injected:
        extra = cfg.style_deltas.get("extra_commas", 0.0)
        n_extra = int(extra) + int(rng.random() < extra - int(extra))
        for j in range(min(n_extra, len(sentences))):
            s = sentences[j]
            sentences[j] = "As such, " + s[0].lower() + s[1:]
    return " ".join(sentences)


def generate(cfg: SimConfig) -> tuple[Corpus, dict[str, bool]]:
    """Build the corpus and the id -> injected ground truth."""
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    vocab = [w for w, _, _ in cfg.background_vocab]
    base = np.array([b for _, b, _ in cfg.background_vocab])
    drift = np.array([d for _, _, d in cfg.background_vocab])
    first, last = cfg.years
    records, truth = [], {}
    for year in range(first, last + 1):
        n = cfg.docs_per_year
        k = injected_count(cfg.injection_rate, n) if year >= cfg.onset_year else 0
        probs = np.clip(base + drift * (year - first), 0.0, 1.0)
        presence = rng.random((n, len(vocab))) < probs
        mean_authors = cfg.authors_start + cfg.authors_slope * (year - first)
        for i in range(n):
            doc_id = f"sim{year}-{i:05d}"
            injected = i < k
            if rng.random() < cfg.journal_share:
                venue_name, discipline = JOURNALS[rng.integers(len(JOURNALS))]
                kind = "journal"
            else:
                venue_name, discipline, kind = PROCEEDINGS[rng.integers(len(PROCEEDINGS))], None, "proceedings"
            authors = 1 + int(rng.poisson(max(mean_authors - 1.0, 0.0)))
            words = [vocab[j] for j in np.flatnonzero(presence[i])]
            if injected:
                markers = _pick(rng, cfg.rare_markers, 2) + _pick(rng, cfg.common_markers, 1)
                words = sorted(set(words) | set(markers))
            text = _compose(words, injected, cfg, rng)
            records.append(AbstractRecord(doc_id, year, kind, venue_name, text, discipline, authors))
            truth[doc_id] = injected
    return Corpus(tuple(records)), truth


def sim_annotations(cfg: SimConfig) -> dict[str, str]:
    """Label every lemma the generator can emit: markers and hedges are
    style words, the rest is content."""
    lex = default_lexicon()
    labels = {w: "content" for w, _, _ in cfg.background_vocab}
    for triple in VERBS:
        for form in triple:
            labels[lemmatize(form, lex)] = "content"
    for w in PAD_WORDS:
        labels[w] = "content"
    # hedges are style vocabulary; injected documents use them less, so
    # they never turn up as excess
    for w in HEDGES + ("tend",):
        if w not in lex.stopwords:
            labels[lemmatize(w, lex)] = "style"
    for w in list(cfg.rare_markers) + list(cfg.common_markers):
        labels[w] = "style"
    return labels


def write_ground_truth(truth: dict[str, bool], path: str | Path) -> None:
    from ._io import atomic_write

    lines = ["id,injected"] + [f"{k},{int(v)}" for k, v in sorted(truth.items())]
    atomic_write(path, "\n".join(lines) + "\n")
