"""Command-line pipeline: summary, profile, freq, excess, tune, classify, trends, simulate.

Every stage reads its inputs from disk and writes CSV/JSON artifacts into
``--out``. Failures print one ``error: ...`` line to stderr and exit 1.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

log = logging.getLogger("lexshift")


def _add_common(p: argparse.ArgumentParser, corpus: bool = True) -> None:
    if corpus:
        p.add_argument("--corpus", required=True, help="JSON Lines corpus")
    p.add_argument("--lexicon-dir", help="directory overriding shipped lexicon files")
    p.add_argument("--out", default=".", help="output directory (created if missing)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=0, help="random seed (only simulate draws numbers)")
    p.add_argument("-v", "--verbose", action="store_true")


def _add_fit(p):
    p.add_argument("--fit-start", type=int, default=2000)
    p.add_argument("--fit-end", type=int, default=2021)
    p.add_argument("--min-docs", type=int, default=5, help="prune lemmas seen in fewer documents")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lexshift", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("summary", help="validate a corpus and count documents per year and venue kind")
    _add_common(p)
    p.add_argument("--discipline-map")

    p = sub.add_parser("profile", help="per-document semantic profiles")
    _add_common(p)

    p = sub.add_parser("freq", help="frequency matrix and post-fit departures")
    _add_common(p)
    _add_fit(p)

    p = sub.add_parser("excess", help="preliminary excess vocabulary per post year")
    _add_common(p)
    _add_fit(p)
    p.add_argument("--post-year", type=int, action="append", required=True)
    p.add_argument("--delta-thresh", type=float, default=0.03)
    p.add_argument("--annotations", help="word,label CSV used to label the output")

    p = sub.add_parser("tune", help="tune rare and common marker sets")
    _add_common(p)
    _add_fit(p)
    p.add_argument("--annotations")
    p.add_argument("--pre-year", type=int, default=2022)
    p.add_argument("--post-year", type=int, action="append", required=True)
    p.add_argument("--delta-thresh", type=float, default=0.03)
    p.add_argument("--grid-min", type=float, default=0.001)
    p.add_argument("--grid-max", type=float, default=0.1)
    p.add_argument("--grid-points", type=int, default=100)

    p = sub.add_parser("classify", help="flag documents with the multi-marker rule")
    _add_common(p)
    p.add_argument("--markers")
    p.add_argument("--min-common", type=int, default=1)
    p.add_argument("--min-rare", type=int, default=2)
    p.add_argument("--onset-year", type=int, default=2023, help="years before this count as false positives")
    p.add_argument("--discipline-map")

    p = sub.add_parser("trends", help="yearly metric trends with the classified overlay")
    _add_common(p)
    p.add_argument("--classifications", help="output of classify")
    p.add_argument("--markers", help="classify inline instead of reading --classifications")
    p.add_argument("--profiles", help="output of profile; recomputed when absent")
    p.add_argument("--metric", action="append", help="metric name; repeatable (default: all)")
    p.add_argument("--min-common", type=int, default=1)
    p.add_argument("--min-rare", type=int, default=2)
    p.add_argument("--base-year", type=int, default=2000)
    p.add_argument("--onset-year", type=int, default=2023)

    p = sub.add_parser("simulate", help="write a synthetic corpus with ground truth")
    _add_common(p, corpus=False)
    p.add_argument("--config", help="JSON simulation config")
    p.add_argument("--injection-rate", type=float)
    p.add_argument("--docs-per-year", type=int)
    return ap


def _check_inputs(args) -> None:
    for name in ("corpus", "annotations", "markers", "discipline_map", "classifications", "profiles", "config"):
        path = getattr(args, name, None)
        if path is not None and not Path(path).is_file():
            raise FileNotFoundError(f"--{name.replace('_', '-')} not found: {path}")
    lexdir = getattr(args, "lexicon_dir", None)
    if lexdir is not None and not Path(lexdir).is_dir():
        raise FileNotFoundError(f"--lexicon-dir not found: {lexdir}")
    if args.workers < 1:
        raise ValueError("--workers must be at least 1")


def _load(args):
    from .corpus import load_corpus

    corpus = load_corpus(args.corpus)
    if len(corpus) == 0:
        raise ValueError(f"no valid records in {args.corpus}")
    return corpus


def _lexicon(args):
    from .textproc import load_lexicon

    return load_lexicon(args.lexicon_dir)


def cmd_summary(args, out: Path) -> None:
    from ._io import atomic_write
    from .corpus import apply_discipline_map, load_discipline_map, summarize_corpus, write_summary

    corpus = _load(args)
    if args.discipline_map:
        corpus = apply_discipline_map(corpus, load_discipline_map(args.discipline_map))
    write_summary(summarize_corpus(corpus), out / "summary.csv")
    lines = ["line,reason"] + [f"{r.line},{r.reason}" for r in corpus.report.rejected]
    atomic_write(out / "rejections.csv", "\n".join(lines) + "\n")


def cmd_profile(args, out: Path) -> None:
    from .semantics import profile_corpus, write_profiles

    corpus = _load(args)
    profs = profile_corpus(corpus, _lexicon(args), workers=args.workers)
    write_profiles(corpus, profs, out / "profiles.csv")


def _matrix(args, corpus, lex):
    from .freqmatrix import build_matrix, document_lemmas

    lemmas = document_lemmas(corpus, lex, args.workers)
    return build_matrix(corpus, lex, args.min_docs, lemmas=lemmas), lemmas


def cmd_freq(args, out: Path) -> None:
    from .freqmatrix import departure_table, write_departures, write_matrix

    corpus = _load(args)
    m, _ = _matrix(args, corpus, _lexicon(args))
    fit = (args.fit_start, args.fit_end)
    tables = [departure_table(m, y, fit) for y in m.years if y > args.fit_end]
    write_matrix(m, out / "matrix.csv")
    write_departures(tables, out / "departures.csv")


def _excess(args, m, year):
    from .excess import preliminary_excess

    if year not in m.years:
        raise ValueError(f"post year {year} not in corpus")
    return preliminary_excess(m, year, (args.fit_start, args.fit_end), args.delta_thresh,
                              baseline_year=getattr(args, "pre_year", None))


def cmd_excess(args, out: Path) -> None:
    from dataclasses import replace

    from .excess import load_annotations, write_excess

    corpus = _load(args)
    m, _ = _matrix(args, corpus, _lexicon(args))
    labels = load_annotations(args.annotations) if args.annotations else {}
    results = {}
    for year in sorted(set(args.post_year)):
        recs = [replace(r, label=labels.get(r.word, "unlabeled")) for r in _excess(args, m, year)]
        results[year] = recs
    for year, recs in results.items():
        write_excess(recs, out / f"excess_{year}.csv")


def cmd_tune(args, out: Path) -> None:
    from .classify import build_global_markers, write_markers
    from .excess import (
        default_grid,
        load_annotations,
        marker_summary,
        style_filter,
        tune_markers,
        write_summary_json,
        write_sweep,
    )

    if not args.annotations:
        raise ValueError("missing --annotations")
    corpus = _load(args)
    m, lemmas = _matrix(args, corpus, _lexicon(args))
    labels = load_annotations(args.annotations)
    grid = default_grid(args.grid_min, args.grid_max, args.grid_points)
    sets, sweeps = [], {}
    for year in sorted(set(args.post_year)):
        style, missing = style_filter(_excess(args, m, year), labels)
        if missing:
            log.warning("%d excess words for %d lack annotations and are ignored", len(missing), year)
        s, sweep = tune_markers(style, corpus, year, args.pre_year, grid, lemmas=lemmas)
        log.info("%d: estimate %.4f (rare %d, common %d)", year, s.estimate, len(s.rare), len(s.common))
        sets.append(s)
        sweeps[year] = sweep
    write_markers(build_global_markers(sets), out / "markers.csv")
    for year, sweep in sweeps.items():
        write_sweep(sweep, out / f"sweep_{year}.csv")
    write_summary_json([marker_summary(s) for s in sets], out / "tune_summary.json")


def cmd_classify(args, out: Path) -> None:
    from .classify import (
        DEFAULT_SENSITIVITY_GRID,
        classify_corpus,
        load_markers,
        prevalence_tables,
        sensitivity_sweep,
        write_classifications,
        write_sensitivity,
        write_tables,
    )
    from .corpus import load_discipline_map
    from .freqmatrix import document_lemmas

    if not args.markers:
        raise ValueError("missing --markers")
    g = load_markers(args.markers)
    dmap = load_discipline_map(args.discipline_map) if args.discipline_map else None
    corpus = _load(args)
    lemmas = document_lemmas(corpus, _lexicon(args), args.workers)
    results = classify_corpus(corpus, g, args.min_common, args.min_rare, lemmas=lemmas)
    sens = sensitivity_sweep(corpus, g, DEFAULT_SENSITIVITY_GRID, args.onset_year, lemmas=lemmas)
    tables = prevalence_tables(corpus, results, dmap)
    write_classifications(corpus, results, out / "classifications.csv")
    write_sensitivity(sens, out / "sensitivity.csv")
    write_tables(tables, out)


def cmd_trends(args, out: Path) -> None:
    from .classify import classify_corpus, load_classifications, load_markers
    from .report import METRICS, export_distribution, export_series, trend_series
    from .semantics import DEFAULT_PUNCTUATION, load_profiles, profile_corpus

    corpus = _load(args)
    lex = _lexicon(args)
    if args.classifications:
        results = load_classifications(args.classifications)
    elif args.markers:
        results = classify_corpus(corpus, load_markers(args.markers), args.min_common, args.min_rare,
                                  lex=lex, workers=args.workers)
    else:
        raise ValueError("missing --classifications or --markers")
    unknown = [r.id for r in results if r.id not in corpus.by_id]
    if unknown:
        raise ValueError(f"classification for unknown id {unknown[0]!r}")
    profs = load_profiles(args.profiles) if args.profiles else profile_corpus(corpus, lex, workers=args.workers)
    metrics = args.metric or list(METRICS) + [f"punct:{m}" for m in DEFAULT_PUNCTUATION]
    series = []
    for metric in metrics:
        series += trend_series(corpus, profs, results, metric, args.base_year, args.onset_year)
    export_series(series, out / "trends.csv", out / "trends.json")
    export_distribution(series, out / "distribution.csv")


def cmd_simulate(args, out: Path) -> None:
    from ._io import atomic_write
    from .corpus import export_corpus
    from .excess import write_annotations
    from .simcorpus import SimConfig, generate, load_sim_config, sim_annotations, write_ground_truth

    overrides = dict(injection_rate=args.injection_rate, docs_per_year=args.docs_per_year, seed=args.seed)
    if args.config:
        cfg = load_sim_config(args.config, **overrides)
    else:
        cfg = SimConfig(**{k: v for k, v in overrides.items() if v is not None})
    corpus, truth = generate(cfg)
    export_corpus(corpus, out / "corpus.jsonl")
    write_ground_truth(truth, out / "ground_truth.csv")
    write_annotations(sim_annotations(cfg), out / "annotations.csv")
    atomic_write(out / "sim_config.json", json.dumps(cfg.to_dict(), indent=1) + "\n")


COMMANDS = {
    "summary": cmd_summary,
    "profile": cmd_profile,
    "freq": cmd_freq,
    "excess": cmd_excess,
    "tune": cmd_tune,
    "classify": cmd_classify,
    "trends": cmd_trends,
    "simulate": cmd_simulate,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    log.info("command=%s seed=%d workers=%d", args.command, args.seed, args.workers)
    try:
        _check_inputs(args)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        COMMANDS[args.command](args, out)
    except (ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {str(msg).splitlines()[0] if str(msg) else type(exc).__name__}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
