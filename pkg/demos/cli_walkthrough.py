"""
The command line, end to end
============================

Everything the library does is reachable as ``nullbayes <command>``.
This script shells out the way a user would: fit a model from a CSV,
mine rules, complete a broken file, and retrieve hidden answers, all in
a temp directory it cleans up afterwards.
"""

import subprocess
import sys
import tempfile
from pathlib import Path

from nullbayes import sample_rows, save_csv, inject_nulls
from nullbayes.synth import car_demo_net


def run(*args):
    cmd = [sys.executable, "-m", "nullbayes", *args]
    print(f"$ nullbayes {' '.join(args)}")
    out = subprocess.run(cmd, capture_output=True, text=True, check=True)
    print(out.stdout, end="")
    print()


with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    full = sample_rows(car_demo_net(), 2000, seed=1)
    save_csv(full, str(tmp / "listings.csv"))
    holes = inject_nulls(full, ["Body", "Make"], 0.3, seed=2)
    save_csv(holes, str(tmp / "holes.csv"))

    run("learn", "--train", str(tmp / "listings.csv"),
        "--out", str(tmp / "cars.model"), "--restarts", "1")

    run("mine-afd", "--train", str(tmp / "listings.csv"),
        "--out", str(tmp / "cars.afd"))

    run("impute", "--model", str(tmp / "cars.model"),
        "--data", str(tmp / "holes.csv"), "--out", str(tmp / "filled.csv"),
        "--truth", str(tmp / "listings.csv"))

    run("rewrite", "--query", "Body=sedan", "--method", "bn-beam",
        "--model", str(tmp / "cars.model"),
        "--source", str(tmp / "holes.csv"),
        "--sample", str(tmp / "listings.csv"),
        "--k", "5")
