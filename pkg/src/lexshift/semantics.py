"""Per-document semantic properties: structure, complexity, voice, confidence."""
from __future__ import annotations

import csv
import io
import logging
from dataclasses import asdict, dataclass
from functools import partial
from pathlib import Path
from typing import Iterable, Mapping

from ._io import atomic_write, parallel_map

from .corpus import Corpus
from .textproc import (
    LexiconBundle,
    TokenizedAbstract,
    count_syllables,
    default_lexicon,
    is_complex_word,
    preprocess,
)

log = logging.getLogger(__name__)

# mark -> characters counted for it; "dash" merges em and en dashes since
# publishers re-encode them inconsistently
DEFAULT_PUNCTUATION: dict[str, str] = {
    ",": ",",
    ";": ";",
    ":": ":",
    "—": "—",
    "–": "–",
    "-": "-",
    "(": "(",
    ")": ")",
    "%": "%",
    '"': '"“”',
    "dash": "—–",
}

# adverbs without an -ly ending that commonly sit inside a passive
_PASSIVE_ADVERBS = frozenset({
    "also", "not", "often", "then", "still", "further", "already", "thus",
    "usually", "generally", "typically", "first", "previously", "now", "well",
})
# -en words that are not participles
_NOT_PARTICIPLES = frozenset({
    "even", "often", "then", "when", "open", "ten", "seven", "eleven", "token",
    "garden", "oxygen", "hydrogen", "nitrogen", "between", "screen", "green",
    "linen", "heaven", "kitchen", "citizen", "golden", "wooden", "sudden",
    "specimen", "abdomen", "women", "men", "children", "own", "been",
})

PROFILE_FIELDS = (
    "word_count", "sentence_count", "mean_sentence_length", "diversity", "fog",
    "fk_grade", "first_person_per_sentence", "passive_per_sentence",
    "hedging_per_sentence",
)


@dataclass(frozen=True)
class SemanticProfile:
    word_count: int
    sentence_count: int
    mean_sentence_length: float
    punctuation_per_sentence: dict[str, float]
    diversity: float
    fog: float
    fk_grade: float
    first_person_per_sentence: float
    passive_per_sentence: float
    hedging_per_sentence: float

    def as_flat_dict(self) -> dict[str, float]:
        d = asdict(self)
        punct = d.pop("punctuation_per_sentence")
        for mark, rate in punct.items():
            d[f"punct[{mark}]"] = rate
        return d


def _check(t: TokenizedAbstract) -> None:
    if t.word_count < 1 or t.sentence_count < 1:
        raise ValueError("degenerate document")


def complex_word_count(t: TokenizedAbstract) -> int:
    n = 0
    for words in t.sentence_words_raw:
        for i, w in enumerate(words):
            if is_complex_word(w, sentence_initial=(i == 0)):
                n += 1
    return n


def syllable_count(t: TokenizedAbstract) -> int:
    # purely numeric tokens are read as one syllable
    return sum(
        count_syllables(w) if any(c.isalpha() for c in w) else 1
        for words in t.sentence_tokens for w in words
    )


def fog_index(words: int, sentences: int, complex_words: int) -> float:
    return 0.4 * (words / sentences + 100.0 * complex_words / words)


def fk_grade_level(words_per_sentence: float, syllables_per_word: float) -> float:
    return 0.39 * words_per_sentence + 11.8 * syllables_per_word - 15.59


def gunning_fog(t: TokenizedAbstract) -> float:
    """Gunning Fog index, 0.4 * (W/S + 100 * C/W)."""
    _check(t)
    return fog_index(t.word_count, t.sentence_count, complex_word_count(t))


def flesch_kincaid(t: TokenizedAbstract) -> float:
    _check(t)
    return fk_grade_level(t.word_count / t.sentence_count, syllable_count(t) / t.word_count)


def word_diversity(t: TokenizedAbstract) -> float:
    """Unique lowercase word tokens over all word tokens, stop words included."""
    if t.word_count < 1:
        raise ValueError("degenerate document")
    unique = {w for words in t.sentence_tokens for w in words}
    return len(unique) / t.word_count


def _is_participle(tok: str, lex: LexiconBundle) -> bool:
    if tok in lex.irregular_participles:
        return True
    if tok in _NOT_PARTICIPLES or tok in lex.be_forms:
        return False
    return len(tok) > 3 and tok.isalpha() and (tok.endswith("ed") or tok.endswith("en"))


def _is_adverb(tok: str) -> bool:
    return (tok.endswith("ly") and len(tok) > 3) or tok in _PASSIVE_ADVERBS


def count_passive(tokens: list[str], lex: LexiconBundle) -> int:
    """be-form, optionally one adverb or "being", then a past participle."""
    n, i = 0, 0
    while i < len(tokens):
        if tokens[i] in lex.be_forms:
            j = i + 1
            if j < len(tokens) and _is_participle(tokens[j], lex):
                n += 1
                i = j + 1
                continue
            if j + 1 < len(tokens) and (tokens[j] == "being" or _is_adverb(tokens[j])) \
                    and _is_participle(tokens[j + 1], lex):
                n += 1
                i = j + 2
                continue
        i += 1
    return n


def count_hedges(tokens: list[str], lex: LexiconBundle) -> int:
    n = 0
    for i, tok in enumerate(tokens):
        for pat in lex.hedging_patterns:
            if tok == pat[0] and tuple(tokens[i:i + len(pat)]) == pat:
                n += 1
    return n


def rate_metrics(
    t: TokenizedAbstract,
    lex: LexiconBundle | None = None,
    punct_set: Mapping[str, str] | Iterable[str] | None = None,
) -> tuple[dict[str, float], float, float, float]:
    """Per-sentence rates: (punctuation by mark, first person, passive, hedging).

    Punctuation is counted on the raw sentence text so intra-word hyphens
    are included.
    """
    lex = lex or default_lexicon()
    if t.sentence_count < 1:
        raise ValueError("degenerate document")
    if punct_set is None:
        punct_set = DEFAULT_PUNCTUATION
    elif not isinstance(punct_set, Mapping):
        punct_set = {m: m for m in punct_set}
    s = t.sentence_count
    text = "".join(t.sentences)
    punct = {mark: sum(text.count(ch) for ch in chars) / s for mark, chars in punct_set.items()}
    fp = sum(1 for words in t.sentence_tokens for w in words if w in lex.first_person_pronouns)
    passive = sum(count_passive(words, lex) for words in t.sentence_tokens)
    hedges = sum(count_hedges(words, lex) for words in t.sentence_tokens)
    return punct, fp / s, passive / s, hedges / s


def profile(
    text: str,
    lex: LexiconBundle | None = None,
    punct_set: Mapping[str, str] | None = None,
) -> SemanticProfile:
    lex = lex or default_lexicon()
    t = preprocess(text, lex)
    _check(t)
    punct, fp, passive, hedges = rate_metrics(t, lex, punct_set)
    return SemanticProfile(
        word_count=t.word_count,
        sentence_count=t.sentence_count,
        mean_sentence_length=t.word_count / t.sentence_count,
        punctuation_per_sentence=punct,
        diversity=word_diversity(t),
        fog=gunning_fog(t),
        fk_grade=flesch_kincaid(t),
        first_person_per_sentence=fp,
        passive_per_sentence=passive,
        hedging_per_sentence=hedges,
    )


def _profile_or_none(text: str, lex: LexiconBundle, punct_set) -> SemanticProfile | None:
    try:
        return profile(text, lex, punct_set)
    except ValueError:
        return None


def profile_corpus(
    corpus: Corpus,
    lex: LexiconBundle | None = None,
    punct_set: Mapping[str, str] | None = None,
    workers: int = 1,
) -> dict[str, SemanticProfile]:
    """Profiles keyed by id; degenerate documents are skipped."""
    lex = lex or default_lexicon()
    texts = [r.text for r in corpus.records]
    profs = parallel_map(partial(_profile_or_none, lex=lex, punct_set=punct_set), texts, workers)
    out = {r.id: p for r, p in zip(corpus.records, profs) if p is not None}
    if len(out) < len(texts):
        log.warning("skipped %d degenerate documents", len(texts) - len(out))
    return out


def write_profiles(corpus: Corpus, profiles: Mapping[str, SemanticProfile], path: str | Path) -> None:
    """One row per profiled document; punctuation columns are ``punct:<mark>``."""
    marks = sorted({m for p in profiles.values() for m in p.punctuation_per_sentence})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "year", "venue_kind", *PROFILE_FIELDS, *(f"punct:{m}" for m in marks)])
    for r in corpus.records:
        p = profiles.get(r.id)
        if p is None:
            continue
        vals = [getattr(p, f) for f in PROFILE_FIELDS]
        w.writerow([r.id, r.year, r.venue_kind, *(repr(v) for v in vals),
                    *(repr(p.punctuation_per_sentence.get(m, 0.0)) for m in marks)])
    atomic_write(path, buf.getvalue())


def load_profiles(path: str | Path) -> dict[str, SemanticProfile]:
    out = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            punct = {k[6:]: float(v) for k, v in row.items() if k.startswith("punct:")}
            out[row["id"]] = SemanticProfile(
                word_count=int(row["word_count"]),
                sentence_count=int(row["sentence_count"]),
                mean_sentence_length=float(row["mean_sentence_length"]),
                punctuation_per_sentence=punct,
                diversity=float(row["diversity"]),
                fog=float(row["fog"]),
                fk_grade=float(row["fk_grade"]),
                first_person_per_sentence=float(row["first_person_per_sentence"]),
                passive_per_sentence=float(row["passive_per_sentence"]),
                hedging_per_sentence=float(row["hedging_per_sentence"]),
            )
    return out
