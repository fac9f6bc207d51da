#!/usr/bin/env python3
"""Multi-value analysis of the public party-ban dataset (48 cases).

Needs data/pban.csv, produced by scripts/fetch_pban.py (the dataset ships
with the R package `cna` as d.pban). Four multi-value conditions explain
the introduction of party-ban provisions; the solve step selects four
single-literal configurations whose union covers every positive case.
"""

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
PBAN = ROOT / "data" / "pban.csv"

if not PBAN.exists():
    print("data/pban.csv not found; fetch it first:")
    print("  python scripts/fetch_pban.py")
    raise SystemExit(1)

subprocess.run(
    [
        sys.executable, "-m", "scpqca.cli", "solve",
        "--data", str(PBAN), "--outcome", "PB", "--label", "1",
        "--consistency", "0.8", "--cutoff", "2", "--unique-cover", "2",
    ],
    check=True,
)
