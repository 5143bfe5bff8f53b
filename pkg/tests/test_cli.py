import json
import os

import pytest

from lexshift.cli import main


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture(scope="module")
def sim(tmp_path_factory):
    d = tmp_path_factory.mktemp("sim")
    assert run("simulate", "--out", d, "--docs-per-year", 150, "--injection-rate", 0.2, "--seed", 21) == 0
    return d


def pipeline(sim, out, workers=1):
    corpus, ann = sim / "corpus.jsonl", sim / "annotations.csv"
    common = ["--corpus", corpus, "--workers", workers]
    assert run("summary", *common, "--out", out / "summary") == 0
    assert run("profile", *common, "--out", out / "profile") == 0
    assert run("freq", *common, "--out", out / "freq") == 0
    assert run("excess", *common, "--post-year", 2024, "--annotations", ann, "--out", out / "excess") == 0
    assert run("tune", *common, "--annotations", ann, "--pre-year", 2022, "--post-year", 2024,
               "--post-year", 2025, "--out", out / "tune") == 0
    assert run("classify", *common, "--markers", out / "tune" / "markers.csv", "--out", out / "classify") == 0
    assert run("trends", *common, "--classifications", out / "classify" / "classifications.csv",
               "--profiles", out / "profile" / "profiles.csv", "--base-year", 2010, "--out", out / "trends") == 0


def snapshot(root):
    return {
        str(p.relative_to(root)): p.read_bytes()
        for p in sorted(root.rglob("*")) if p.is_file()
    }


def test_help_exits_zero_without_io(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    with pytest.raises(SystemExit) as exc:
        main(["tune", "--help"])
    assert exc.value.code == 0
    assert "--grid-points" in capsys.readouterr().out
    assert list(tmp_path.iterdir()) == []


def test_unknown_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["summary", "--corpus", "x", "--sparkle"])
    assert exc.value.code != 0
    assert "usage:" in capsys.readouterr().err


def test_classify_needs_markers(sim, tmp_path, capsys):
    assert run("classify", "--corpus", sim / "corpus.jsonl", "--out", tmp_path) == 1
    err = capsys.readouterr().err
    assert err == "error: missing --markers\n"
    assert list(tmp_path.iterdir()) == []


def test_missing_input_path(tmp_path, capsys):
    assert run("summary", "--corpus", tmp_path / "nope.jsonl", "--out", tmp_path / "o") == 1
    err = capsys.readouterr().err.strip()
    assert err.startswith("error: --corpus not found") and "\n" not in err
    assert not (tmp_path / "o").exists()


def test_failed_stage_leaves_no_outputs(sim, tmp_path, capsys):
    out = tmp_path / "t"
    rc = run("tune", "--corpus", sim / "corpus.jsonl", "--annotations", sim / "annotations.csv",
             "--post-year", 2024, "--post-year", 2031, "--out", out)
    assert rc == 1
    assert "post year 2031" in capsys.readouterr().err
    assert list(out.iterdir()) == []


def test_tune_without_annotations(sim, tmp_path, capsys):
    assert run("tune", "--corpus", sim / "corpus.jsonl", "--post-year", 2024, "--out", tmp_path) == 1
    assert "missing --annotations" in capsys.readouterr().err


def test_end_to_end_estimate(sim, tmp_path):
    pipeline(sim, tmp_path)
    summary = json.loads((tmp_path / "tune" / "tune_summary.json").read_text())
    # 150 docs/year: sampling noise on the common differential is ~0.02,
    # so the band is wider than the 2000 docs/year acceptance check
    for s in summary:
        assert abs(s["estimate"] - 0.2) <= 0.05
        assert s["delta_rare"] == pytest.approx(0.2, abs=1e-12)
    markers = (tmp_path / "tune" / "markers.csv").read_text()
    assert "delve,rare" in markers and "enhance,common" in markers
    header = (tmp_path / "trends" / "trends.csv").read_text().splitlines()[0]
    assert header == "metric,group,year,mean,normalized,n_docs"
    tables = (tmp_path / "classify" / "table_year.csv").read_text()
    assert "2024,30,150,20.0" in tables and "2021,0,150,0.0" in tables
    leftovers = [p for p in tmp_path.rglob("*.tmp")]
    assert leftovers == []


def test_byte_identical_runs(sim, tmp_path):
    pipeline(sim, tmp_path / "a")
    pipeline(sim, tmp_path / "b", workers=4)
    a, b = snapshot(tmp_path / "a"), snapshot(tmp_path / "b")
    assert a.keys() == b.keys() and a == b


def test_simulate_deterministic(tmp_path):
    for d in ("x", "y"):
        assert run("simulate", "--out", tmp_path / d, "--docs-per-year", 20, "--seed", 5) == 0
    assert snapshot(tmp_path / "x") == snapshot(tmp_path / "y")


def test_simulate_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"years": [2020, 2024], "docs_per_year": 10, "injection_rate": 0.5}))
    assert run("simulate", "--config", cfg, "--out", tmp_path / "o") == 0
    lines = (tmp_path / "o" / "corpus.jsonl").read_text().splitlines()
    assert len(lines) == 50
    truth = (tmp_path / "o" / "ground_truth.csv").read_text().splitlines()
    assert sum(line.endswith(",1") for line in truth) == 10


def test_trends_inline_markers(sim, tmp_path):
    m = tmp_path / "m.csv"
    m.write_text("word,kind\ndelve,rare\nshowcase,rare\nboast,rare\nintricate,rare\npivotal,rare\nunderscore,rare\nenhance,common\n")
    assert run("trends", "--corpus", sim / "corpus.jsonl", "--markers", m, "--metric", "passive_per_sentence",
               "--base-year", 2010, "--out", tmp_path / "r") == 0
    rows = (tmp_path / "r" / "trends.csv").read_text().splitlines()
    assert any(r.startswith("passive_per_sentence,llm_overlay,2025,") for r in rows)
    assert not any(",llm_overlay,2022," in r for r in rows)


def test_module_entry_point():
    import subprocess
    import sys

    r = subprocess.run([sys.executable, "-m", "lexshift", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "simulate" in r.stdout
