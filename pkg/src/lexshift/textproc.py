"""Deterministic text normalization.

Sentence splitting, word/punctuation tokenization, stop-word removal,
dictionary-plus-rules lemmatization, syllable counting and complex-word
detection. Nothing here depends on a tagger or a trained model, so every
function is a pure function of its input and a :class:`LexiconBundle`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

__all__ = [
    "LexiconBundle",
    "TokenizedAbstract",
    "default_lexicon",
    "load_lexicon",
    "split_sentences",
    "tokenize",
    "lemmatize",
    "lemma_set",
    "preprocess",
    "count_syllables",
    "is_complex_word",
]

DEFAULT_HEDGES = (
    "might", "may", "could", "would", "suggest", "potentially", "possibly",
    "tend to", "perhaps", "likely", "seem", "appear",
)

LEXICON_FILES = {
    "stopwords": "stopwords.txt",
    "lemma_map": "lemmas.tsv",
    "irregular_participles": "irregular_participles.txt",
    "first_person_pronouns": "first_person.txt",
    "hedging_patterns": "hedging.txt",
    "be_forms": "be_forms.txt",
}


@dataclass(frozen=True)
class LexiconBundle:
    stopwords: frozenset[str]
    lemma_map: Mapping[str, str]
    irregular_participles: frozenset[str]
    first_person_pronouns: frozenset[str]
    hedging_patterns: tuple[tuple[str, ...], ...]
    be_forms: frozenset[str]
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        words = (
            set(self.stopwords) | set(self.lemma_map) | set(self.lemma_map.values())
            | set(self.irregular_participles) | set(self.first_person_pronouns)
            | set(self.be_forms) | {t for p in self.hedging_patterns for t in p}
        )
        bad = sorted(w for w in words if w != w.lower())
        if bad:
            raise ValueError(f"lexicon entries must be lowercase: {bad[:5]}")
        if any(not 1 <= len(p) <= 2 for p in self.hedging_patterns):
            raise ValueError("hedging patterns must have one or two tokens")

    def __getstate__(self):
        # the memo is rebuilt per process
        state = dict(self.__dict__)
        state["_cache"] = {}
        return state

    def __setstate__(self, state):
        for k, v in state.items():
            object.__setattr__(self, k, v)


def _read_lines(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


def _parse_lemma_map(lines: list[str]) -> dict[str, str]:
    mapping = {}
    for n, line in enumerate(lines, 1):
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise ValueError(f"lemma map line {n}: expected 'form<TAB>lemma', got {line!r}")
        mapping[parts[0].strip()] = parts[1].strip()
    return mapping


def _bundle_from_texts(texts: Mapping[str, str]) -> LexiconBundle:
    hedges = tuple(tuple(line.lower().split()) for line in _read_lines(texts["hedging_patterns"]))
    return LexiconBundle(
        stopwords=frozenset(_read_lines(texts["stopwords"])),
        lemma_map=_parse_lemma_map(_read_lines(texts["lemma_map"])),
        irregular_participles=frozenset(_read_lines(texts["irregular_participles"])),
        first_person_pronouns=frozenset(_read_lines(texts["first_person_pronouns"])),
        hedging_patterns=hedges,
        be_forms=frozenset(_read_lines(texts["be_forms"])),
    )


def _default_texts() -> dict[str, str]:
    pkg = resources.files("lexshift") / "data"
    return {key: (pkg / name).read_text(encoding="utf-8") for key, name in LEXICON_FILES.items()}


_DEFAULT: LexiconBundle | None = None


def default_lexicon() -> LexiconBundle:
    """The shipped lexicon (about 160 stop words, twelve hedges, ...)."""
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = _bundle_from_texts(_default_texts())
    return _DEFAULT


def load_lexicon(directory: str | Path | None = None) -> LexiconBundle:
    """Load lexicon files from `directory`, falling back to the shipped
    file for any that are missing. Hedging defaults are always kept."""
    if directory is None:
        return default_lexicon()
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"lexicon directory not found: {directory}")
    texts = _default_texts()
    for key, name in LEXICON_FILES.items():
        path = directory / name
        if path.exists():
            texts[key] = path.read_text(encoding="utf-8")
    bundle = _bundle_from_texts(texts)
    missing = [h for h in DEFAULT_HEDGES if tuple(h.split()) not in bundle.hedging_patterns]
    if missing:
        hedges = bundle.hedging_patterns + tuple(tuple(h.split()) for h in missing)
        bundle = LexiconBundle(
            stopwords=bundle.stopwords,
            lemma_map=bundle.lemma_map,
            irregular_participles=bundle.irregular_participles,
            first_person_pronouns=bundle.first_person_pronouns,
            hedging_patterns=hedges,
            be_forms=bundle.be_forms,
        )
    return bundle


# ---------------------------------------------------------------------------
# sentences and tokens

ABBREVIATIONS = frozenset({
    "e.g.", "i.e.", "fig.", "figs.", "eq.", "eqs.", "al.", "vs.", "approx.",
    "no.", "nos.", "dr.", "mr.", "ms.", "mrs.", "prof.", "ref.", "refs.", "cf.",
    "st.", "ca.", "vol.", "sec.", "tab.", "ch.", "inc.", "jr.", "sr.", "u.s.",
    "resp.", "ed.", "eds.", "pp.", "p.",
})

_BOUNDARY = re.compile(r"[.!?]+[\"'”’)\]]*(\s+)(?=[A-Z“\"(\[])")
_TOKEN = re.compile(r"(?P<word>[^\W_]+(?:['’\-][^\W_]+)*)|(?P<punct>[^\w\s]|_)")
_CLOSERS = "\"'”’)]"


def _is_abbreviation(chunk: str) -> bool:
    word = chunk.rstrip(_CLOSERS).lstrip("(\"'“[")
    if word.lower() in ABBREVIATIONS:
        return True
    # initials such as "J." in "J. Smith"
    return len(word) == 2 and word[0].isupper() and word[1] == "."


def split_sentences(text: str) -> list[str]:
    """Split on . ! ? followed by whitespace and an uppercase letter."""
    text = text.strip()
    if not text:
        return []
    out = []
    start = 0
    for m in _BOUNDARY.finditer(text):
        end = m.start(1)
        chunk = text[start:end]
        last = chunk.rsplit(None, 1)[-1] if chunk.split() else ""
        if _is_abbreviation(last):
            continue
        piece = chunk.strip()
        if piece:
            out.append(piece)
        start = m.end(1)
    tail = text[start:].strip()
    if tail:
        out.append(tail)
    return out


def tokenize(sentence: str) -> tuple[list[str], list[str]]:
    """Return (word tokens with original case, punctuation tokens)."""
    words, punct = [], []
    for m in _TOKEN.finditer(sentence):
        if m.lastgroup == "word":
            words.append(m.group())
        else:
            punct.append(m.group())
    return words, punct


# ---------------------------------------------------------------------------
# lemmatization

_VOWELS = "aeiouy"
_SIBILANT_ES = re.compile(r"(?:ss|x|zz|ch|sh)es$")
_NO_S_STRIP = ("ss", "us", "is", "ous")
# stems (after -ed/-ing removal) that lost a silent e
_RESTORE_E = re.compile(
    r"(?:(?:[^aeiou]|u)at|[iy]z|v|[^aeiou]ur|c|[ae]ng|rg|dg|[^aeiou]ir|uir|[^aeiou]os|us"
    r"|ais|[^aeiouy]is|as|[^aeiou]ut|(?:[^aeiou]|u)id|[^aeiou]ud|ib|[^aeiou]in"
    r"|[^aeiou]ar|[^aeiou]ul|[bcdfgkptz]l|[^aeious]s|[^aeiou][aiou]k|[^aeiou][aiu]m"
    r"|[^aeiou]ap|yp)$"
)
_MONO_CVC = re.compile(r"^[^aeiouy]*[aiou][^aeiouwxy]$")
_KEEP_DOUBLE = set("lsfz")


def _has_vowel(s: str) -> bool:
    return any(c in _VOWELS for c in s)


def _repair_stem(stem: str) -> str:
    if len(stem) >= 2 and stem[-1] == stem[-2] and stem[-1] not in _VOWELS:
        if stem[-1] in _KEEP_DOUBLE:
            return stem
        return stem[:-1]
    if _RESTORE_E.search(stem) or _MONO_CVC.match(stem):
        return stem + "e"
    return stem


def _suffix_rules(word: str) -> str:
    n = len(word)
    if word.endswith("ies") and n > 4:
        return word[:-3] + "y"
    if word.endswith("ied") and n > 4:
        return word[:-3] + "y"
    if word.endswith("ing"):
        stem = word[:-3]
        if len(stem) >= 3 and _has_vowel(stem):
            return _repair_stem(stem)
        return word
    if word.endswith("ed") and not word.endswith("eed"):
        stem = word[:-2]
        if len(stem) >= 3 and _has_vowel(stem):
            return _repair_stem(stem)
        return word
    if word.endswith("es") and _SIBILANT_ES.search(word):
        return word[:-2]
    if word.endswith("s") and n > 3 and not word.endswith(_NO_S_STRIP):
        return word[:-1]
    return word


def lemmatize(token: str, lex: LexiconBundle) -> str:
    """Dictionary lookup, then suffix rules, else identity. `token` is
    expected lowercase."""
    cache = lex._cache
    hit = cache.get(token)
    if hit is not None:
        return hit
    word = token
    for poss in ("'s", "’s"):
        if word.endswith(poss) and len(word) > 2:
            word = word[:-2]
    if word in lex.lemma_map:
        lemma = lex.lemma_map[word]
    elif word.isalpha() and word.isascii():
        lemma = _suffix_rules(word)
    else:
        lemma = word
    cache[token] = lemma
    return lemma


def _content_lemmas(words: Iterable[str], lex: LexiconBundle) -> list[str]:
    stop = lex.stopwords
    out = []
    for w in words:
        if w in stop or not any(c.isalpha() for c in w):
            continue
        lemma = lemmatize(w, lex)
        if lemma not in stop:
            out.append(lemma)
    return out


@dataclass(frozen=True)
class TokenizedAbstract:
    sentences: list[str]
    sentence_tokens: list[list[str]]
    sentence_words_raw: list[list[str]]
    sentence_punct: list[list[str]]
    lemmas: list[str]
    word_count: int
    sentence_count: int


def preprocess(text: str, lex: LexiconBundle | None = None) -> TokenizedAbstract:
    lex = lex or default_lexicon()
    if not text or not text.strip():
        raise ValueError("empty document")
    sentences = split_sentences(text)
    raw, lower, punct = [], [], []
    for s in sentences:
        words, marks = tokenize(s)
        raw.append(words)
        lower.append([w.lower() for w in words])
        punct.append(marks)
    lemmas = _content_lemmas((w for sent in lower for w in sent), lex)
    return TokenizedAbstract(
        sentences=sentences,
        sentence_tokens=lower,
        sentence_words_raw=raw,
        sentence_punct=punct,
        lemmas=lemmas,
        word_count=sum(len(s) for s in lower),
        sentence_count=len(sentences),
    )


_WORD_ONLY = re.compile(r"[^\W_]+(?:['’\-][^\W_]+)*")


def lemma_set(text: str, lex: LexiconBundle | None = None) -> frozenset[str]:
    """Distinct lemmas of `text`; same result as ``set(preprocess(text).lemmas)``
    without building sentences."""
    lex = lex or default_lexicon()
    words = (m.group().lower() for m in _WORD_ONLY.finditer(text))
    return frozenset(_content_lemmas(words, lex))


# ---------------------------------------------------------------------------
# syllables

_VOWEL_GROUP = re.compile(r"[aeiouy]+")
_HIATUS_END = re.compile(r"[^aeiouy](?:ea|ia)$")


def count_syllables(word: str) -> int:
    """Vowel-group count with a silent-e correction, never below 1.

    A final "ea"/"ia" after another vowel group is read as two syllables
    (idea, area, media, criteria).
    """
    letters = "".join(c for c in word.lower() if c.isalpha())
    if not letters:
        raise ValueError(f"no alphabetic characters in {word!r}")
    groups = _VOWEL_GROUP.findall(letters)
    n = len(groups)
    if n > 1 and letters.endswith("e") and groups[-1] == "e" and letters[-2] not in _VOWELS:
        n -= 1
    if n > 1 and _HIATUS_END.search(letters):
        n += 1
    return max(n, 1)


_COMPLEX_SUFFIXES = ("ing", "ed", "es", "ly")


def is_complex_word(word: str, sentence_initial: bool = False) -> bool:
    """Three or more syllables after dropping one common suffix; capitalized
    words that do not start a sentence count as proper nouns."""
    if not any(c.isalpha() for c in word):
        return False
    if word[0].isupper() and not sentence_initial:
        return False
    stem = word.lower()
    for suf in _COMPLEX_SUFFIXES:
        if stem.endswith(suf) and any(c.isalpha() for c in stem[: -len(suf)]):
            stem = stem[: -len(suf)]
            break
    return count_syllables(stem) >= 3
