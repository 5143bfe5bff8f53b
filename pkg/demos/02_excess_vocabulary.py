"""
Excess vocabulary and the share estimate
========================================

A synthetic corpus receives marker words in 20% of its documents from 2023
on. We fit linear counterfactual trends on 2010-2021, flag words whose 2024
frequency departs from them, keep the style words, tune the rare and common
marker sets, and read off the lower-bound share estimate.
"""
from lexshift.excess import format_percent, preliminary_excess, style_filter, tune_markers
from lexshift.freqmatrix import build_matrix, departures, document_lemmas
from lexshift.simcorpus import SimConfig, generate, sim_annotations

cfg = SimConfig(seed=1, docs_per_year=600, injection_rate=0.2)
corpus, truth = generate(cfg)
print(f"{len(corpus)} documents, {sum(truth.values())} injected")

lemmas = document_lemmas(corpus)
m = build_matrix(corpus, lemmas=lemmas)
print(f"matrix: {len(m.years)} years x {len(m.vocab)} lemmas")

# one word in detail
d = departures(m, "delve", 2024, (2010, 2021))
print(f"delve 2024: observed {d.observed:.3f}, expected {d.expected:.4f}, gap {d.delta:.3f}, ratio {d.ratio:.1f}")

records = preliminary_excess(m, 2024, (2010, 2021))
style, unlabeled = style_filter(records, sim_annotations(cfg))
print(f"{len(records)} excess words, {len(style)} style, {len(unlabeled)} unlabeled")

sets, sweep = tune_markers(style, corpus, 2024, 2022, lemmas=lemmas)
print("rare markers:", sorted(sets.rare), f"(cutoff {sets.rare_cutoff:.4f}, diff {sets.delta_rare:.3f})")
print("common markers:", sorted(sets.common), f"(cutoff {sets.common_cutoff:.4f}, diff {sets.delta_common:.3f})")
print("estimated share:", format_percent(sets.estimate), "vs injected 20.0%")
