import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lexshift.textproc import (
    DEFAULT_HEDGES,
    LexiconBundle,
    count_syllables,
    default_lexicon,
    is_complex_word,
    lemma_set,
    lemmatize,
    load_lexicon,
    preprocess,
    split_sentences,
    tokenize,
)

LEX = default_lexicon()


def test_dog_sentence_lemmas():
    t = preprocess("The dogs were running in the park, and they chased a cat to corner it near a tree", LEX)
    assert t.lemmas == ["dog", "run", "park", "chase", "cat", "corner", "tree"]


def test_model_forms():
    assert preprocess("models modeling modeled", LEX).lemmas == ["model"] * 3


def test_all_stop_words():
    t = preprocess("The the THE.", LEX)
    assert t.lemmas == [] and t.sentence_count == 1 and t.word_count == 3


@pytest.mark.parametrize("text", ["", "   \n\t"])
def test_empty_document(text):
    with pytest.raises(ValueError, match="empty document"):
        preprocess(text, LEX)


@pytest.mark.parametrize("form,lemma", [
    ("studies", "study"), ("applied", "apply"), ("boxes", "box"), ("classes", "class"),
    ("analysis", "analysis"), ("stopped", "stop"), ("making", "make"), ("evaluated", "evaluate"),
    ("graduated", "graduate"), ("proposed", "propose"), ("used", "use"), ("agreed", "agree"), ("needed", "need"),
    ("running", "run"), ("walls", "wall"), ("was", "be"),
])
def test_lemmatize(form, lemma):
    assert lemmatize(form, LEX) == lemma


@pytest.mark.parametrize("word,n", [
    ("cat", 1), ("idea", 3), ("make", 1), ("area", 3), ("establishment", 4), ("the", 1),
    ("be", 1), ("rhythm", 1), ("beautiful", 3), ("kN", 1), ("25", None),
])
def test_count_syllables(word, n):
    if n is None:
        with pytest.raises(ValueError):
            count_syllables(word)
    else:
        assert count_syllables(word) == n


def test_complex_words():
    assert is_complex_word("establishment")
    assert not is_complex_word("Boston")
    assert not is_complex_word("Establishment", sentence_initial=False)
    assert is_complex_word("Establishment", sentence_initial=True)
    assert not is_complex_word("jumped")
    # suffix stripping: "computing" -> "comput" keeps two syllables
    assert not is_complex_word("computing")
    assert not is_complex_word("42")


def test_sentence_splitting_abbreviations():
    text = "Results were good, e.g. Fig. 3 shows it. Smith et al. Reported more. J. Doe agreed! Why? Because."
    assert split_sentences(text) == [
        "Results were good, e.g. Fig. 3 shows it.",
        "Smith et al. Reported more.",
        "J. Doe agreed!",
        "Why?",
        "Because.",
    ]


def test_tokenize_keeps_internal_hyphen_apostrophe():
    words, punct = tokenize("A well-known (author's) result: 5%.")
    assert words == ["A", "well-known", "author's", "result", "5"]
    assert punct == ["(", ")", ":", "%", "."]


def test_lexicon_defaults():
    assert {" ".join(h) for h in LEX.hedging_patterns} >= set(DEFAULT_HEDGES)
    assert len(DEFAULT_HEDGES) == 12
    assert 140 <= len(LEX.stopwords) <= 180


def test_lexicon_rejects_uppercase():
    with pytest.raises(ValueError):
        LexiconBundle(frozenset({"The"}), {}, frozenset(), frozenset(), (), frozenset())


def test_lexicon_override_keeps_hedges(tmp_path):
    (tmp_path / "stopwords.txt").write_text("the\na\n")
    (tmp_path / "hedging.txt").write_text("arguably\n")
    lex = load_lexicon(tmp_path)
    assert lex.stopwords == {"the", "a"}
    hedges = {" ".join(h) for h in lex.hedging_patterns}
    assert "arguably" in hedges and set(DEFAULT_HEDGES) <= hedges
    assert preprocess("The cats and dogs.", lex).lemmas == ["cat", "and", "dog"]


def test_lexicon_missing_dir(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_lexicon(tmp_path / "nope")


texts = st.text(alphabet=st.sampled_from(list("abcdeiouy XYZ.,!?-'\n0123")), min_size=1).filter(lambda s: s.strip())


@given(texts)
def test_preprocess_pure_and_bounded(text):
    a, b = preprocess(text, LEX), preprocess(text, LEX)
    assert a == b
    assert len(a.lemmas) <= a.word_count
    assert a.word_count == sum(len(s) for s in a.sentence_tokens)
    assert a.sentence_count == len(a.sentences) >= 1
    assert set(a.lemmas) == lemma_set(text, LEX)


@given(texts)
def test_lemmas_come_from_tokens(text):
    t = preprocess(text, LEX)
    forms = {lemmatize(w, LEX) for s in t.sentence_tokens for w in s}
    assert set(t.lemmas) <= forms
    assert not set(t.lemmas) & LEX.stopwords


@given(st.from_regex(r"[A-Za-z][A-Za-z0-9'\-]{0,15}", fullmatch=True))
def test_syllables_at_least_one(word):
    assert count_syllables(word) >= 1


@given(texts)
def test_split_preserves_characters(text):
    joined = "".join(split_sentences(text))
    assert re.sub(r"\s", "", joined) == re.sub(r"\s", "", text)
