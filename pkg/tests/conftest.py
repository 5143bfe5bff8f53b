import json

import pytest
from hypothesis import HealthCheck, settings

from lexshift.corpus import AbstractRecord, Corpus

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def rec(id, year, text="Some text here.", kind="journal", venue="J1", discipline=None, authors=None):
    return AbstractRecord(id, year, kind, venue, text, discipline, authors)


def write_jsonl(path, objs):
    path.write_text("".join((o if isinstance(o, str) else json.dumps(o)) + "\n" for o in objs), encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def small_sim():
    from lexshift.simcorpus import SimConfig, generate

    cfg = SimConfig(seed=11, years=(2010, 2025), docs_per_year=200, injection_rate=0.2)
    corpus, truth = generate(cfg)
    return cfg, corpus, truth


@pytest.fixture
def make_corpus():
    def _make(*records):
        return Corpus(tuple(records))
    return _make


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[1])):
        terminalreporter.write_line(line)
