"""
The command-line pipeline
=========================

Every stage is a subcommand that reads files and writes CSV/JSON into its
own output directory. This script runs them in order on a simulated corpus.
"""
import subprocess
import sys
import tempfile
from pathlib import Path

work = Path(tempfile.mkdtemp(prefix="lexshift-demo-"))
sim = work / "sim"


def lexshift(*args):
    cmd = [sys.executable, "-m", "lexshift", *map(str, args)]
    print("$ lexshift", " ".join(map(str, args)).replace(str(work), "$WORK"))
    subprocess.run(cmd, check=True)


lexshift("simulate", "--out", sim, "--docs-per-year", 300, "--injection-rate", 0.2, "--seed", 7)
corpus, ann = sim / "corpus.jsonl", sim / "annotations.csv"
lexshift("summary", "--corpus", corpus, "--out", work / "summary")
lexshift("profile", "--corpus", corpus, "--out", work / "profile")
lexshift("tune", "--corpus", corpus, "--annotations", ann, "--pre-year", 2022,
         "--post-year", 2024, "--post-year", 2025, "--out", work / "tune")
lexshift("classify", "--corpus", corpus, "--markers", work / "tune" / "markers.csv", "--out", work / "classify")
lexshift("trends", "--corpus", corpus, "--classifications", work / "classify" / "classifications.csv",
         "--profiles", work / "profile" / "profiles.csv", "--base-year", 2010, "--out", work / "trends")

print("\nmarkers.csv:")
print((work / "tune" / "markers.csv").read_text())
print("table_year.csv (tail):")
print("\n".join((work / "classify" / "table_year.csv").read_text().splitlines()[-4:]))
print(f"\nartifacts in {work}")
