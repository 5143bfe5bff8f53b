"""
Semantic trends with a classified overlay
=========================================

Yearly means of a few properties, normalized to the first year, with the
classified documents pulled out into their own series.
"""
from lexshift.classify import GlobalMarkerSet, classify_corpus
from lexshift.report import trend_series
from lexshift.semantics import profile_corpus
from lexshift.simcorpus import SimConfig, generate

cfg = SimConfig(seed=4, years=(2015, 2025), docs_per_year=200, injection_rate=0.25)
corpus, _ = generate(cfg)
profiles = profile_corpus(corpus)
results = classify_corpus(corpus, GlobalMarkerSet(frozenset(cfg.rare_markers), frozenset(cfg.common_markers)))

for metric in ("passive_per_sentence", "hedging_per_sentence", "punct:,", "author_count"):
    groups = {s.group: s for s in trend_series(corpus, profiles, results, metric, base_year=2015)}
    print(f"\n{metric} (normalized to 2015)")
    print("year   all    overlay")
    for year in (2015, 2020, 2022, 2023, 2024, 2025):
        overlay = groups["llm_overlay"].normalized.get(year)
        shown = f"{overlay:.3f}" if overlay is not None else "   -"
        print(f"{year}  {groups['all'].normalized[year]:.3f}  {shown}")
