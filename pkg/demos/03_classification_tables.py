"""
Multi-marker classification
===========================

Documents with at least one common and two rare marker lemmas are counted
as likely machine-written. The sensitivity sweep shows how the false
positive rate before 2023 and the positive rate afterwards move with the
two thresholds.
"""
from lexshift.classify import GlobalMarkerSet, classify_corpus, prevalence_tables, sensitivity_sweep
from lexshift.simcorpus import SimConfig, generate

cfg = SimConfig(seed=3, docs_per_year=300, injection_rate=0.15)
corpus, truth = generate(cfg)
g = GlobalMarkerSet(frozenset(cfg.rare_markers), frozenset(cfg.common_markers))

results = classify_corpus(corpus, g)
tables = prevalence_tables(corpus, results)
print("year  classified  total  share")
for row in tables.by_year:
    print(f"{row.key[0]}  {row.classified:>10}  {row.total:>5}  {row.display:>6}")

print("\nmin_common min_rare  fp_rate  pos_rate")
for r in sensitivity_sweep(corpus, g, pre_cut_year=2023):
    if r.min_common <= 2 and r.min_rare <= 3:
        print(f"{r.min_common:>10} {r.min_rare:>8}  {r.fp_rate:7.3f}  {r.pos_rate:8.3f}")

print("\njournal disciplines, 2025:")
for row in tables.by_discipline_year:
    if row.key[1] == 2025:
        print(f"  {row.key[0]:<15} {row.display}")
