"""
Text processing and readability
===============================

From raw abstract text to lemmas, syllables and per-document semantic
properties.
"""
from lexshift.semantics import profile
from lexshift.textproc import count_syllables, default_lexicon, is_complex_word, preprocess

lex = default_lexicon()

# lemmas drop stop words and reduce inflected forms
t = preprocess("The dogs were running in the park, and they chased a cat to corner it near a tree", lex)
print("lemmas:", " ".join(t.lemmas))
print("models modeling modeled ->", preprocess("models modeling modeled", lex).lemmas)

# syllable heuristic and the complex-word rule used by the fog index
for w in ("cat", "make", "idea", "establishment"):
    print(f"{w:>14}: {count_syllables(w)} syllables, complex={is_complex_word(w)}")
print("Boston mid-sentence complex?", is_complex_word("Boston"))

#
# A full profile: structure, readability, voice and hedging rates.
#
text = ("We analyzed the data. The results were reviewed by experts, and they may "
        "suggest improvements; costs (in USD) rose 5%.")
p = profile(text, lex)
for name, value in p.as_flat_dict().items():
    if value:
        print(f"{name:>28}: {value:.4g}")
