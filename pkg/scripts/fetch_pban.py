#!/usr/bin/env python3
"""Fetch the public party-ban (pban) dataset and normalize it to data/pban.csv.

The dataset ships as `d.pban` with the R package `cna` (48 sub-Saharan
party-ban cases; multi-value conditions C, F, T, V and binary outcome PB;
original source: Hartmann & Kemmerzell 2010). This script tries, in order:

1. a local file you provide (--from-csv / --from-rda),
2. downloading d.pban.rda from a CRAN mirror on GitHub (needs network;
   parsing the .rda needs the optional `pyreadr` package),

and writes a normalized CSV with columns id,C,F,T,V,PB. If neither route is
available, run in R:

    Rscript -e 'library(cna); write.csv(d.pban, "pban_raw.csv")'

then rerun with --from-csv pban_raw.csv. The analysis acceptance test that
uses this dataset skips cleanly while data/pban.csv is absent.
"""

from __future__ import annotations

import argparse
import csv
import sys
import urllib.request
from pathlib import Path

RDA_URLS = [
    "https://raw.githubusercontent.com/cran/cna/master/data/d.pban.rda",
    "https://raw.githubusercontent.com/cran/cna/main/data/d.pban.rda",
]
COLUMNS = ["C", "F", "T", "V", "PB"]
EXPECTED_CASES = 48


def normalize_rows(header: list[str], rows: list[list[str]]) -> list[dict[str, str]]:
    """Map arbitrary raw CSV shape onto id + the five expected columns."""
    header = [h.strip() for h in header]
    missing = [c for c in COLUMNS if c not in header]
    if missing:
        raise SystemExit(f"error: raw data lacks column(s) {', '.join(missing)}; found {header}")
    id_col = None
    for cand in ("id", "ID", "", "Unnamed: 0", "case"):
        if cand in header and cand not in COLUMNS:
            id_col = cand
            break
    out = []
    for i, row in enumerate(rows):
        rec = dict(zip(header, (c.strip() for c in row)))
        for c in COLUMNS:
            float(rec[c])  # raises on non-numeric cells
        out.append(
            {
                "id": rec[id_col] if id_col is not None and rec.get(id_col) else f"c{i + 1}",
                **{c: str(int(float(rec[c]))) for c in COLUMNS},
            }
        )
    return out


def rows_from_csv(path: Path) -> list[dict[str, str]]:
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return normalize_rows(header, [r for r in reader if any(c.strip() for c in r)])


def rows_from_rda(path: Path) -> list[dict[str, str]]:
    try:
        import pyreadr
    except ImportError:
        raise SystemExit(
            "error: parsing .rda needs the optional 'pyreadr' package "
            "(pip install pyreadr), or export a CSV from R and use --from-csv"
        ) from None
    result = pyreadr.read_r(str(path))
    frame = next(iter(result.values()))
    header = ["id", *list(frame.columns)]
    rows = [[str(idx), *[str(v) for v in rec]] for idx, rec in zip(frame.index, frame.itertuples(index=False))]
    return normalize_rows(header, rows)


def download_rda(dest: Path) -> Path | None:
    for url in RDA_URLS:
        try:
            print(f"fetching {url} ...", file=sys.stderr)
            with urllib.request.urlopen(url, timeout=30) as resp:
                dest.write_bytes(resp.read())
            return dest
        except OSError as exc:
            print(f"  failed: {exc}", file=sys.stderr)
    return None


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="data/pban.csv")
    parser.add_argument("--from-csv", metavar="PATH", help="normalize a locally obtained CSV export")
    parser.add_argument("--from-rda", metavar="PATH", help="parse a locally obtained d.pban.rda")
    args = parser.parse_args()

    if args.from_csv:
        rows = rows_from_csv(Path(args.from_csv))
    elif args.from_rda:
        rows = rows_from_rda(Path(args.from_rda))
    else:
        tmp = Path(args.out).with_suffix(".rda.tmp")
        fetched = download_rda(tmp)
        if fetched is None:
            print(
                "error: could not download the dataset (no network?); "
                "see --from-csv / --from-rda in --help for offline routes",
                file=sys.stderr,
            )
            return 1
        try:
            rows = rows_from_rda(fetched)
        finally:
            fetched.unlink(missing_ok=True)

    if len(rows) != EXPECTED_CASES:
        print(f"warning: expected {EXPECTED_CASES} cases, got {len(rows)}", file=sys.stderr)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=["id", *COLUMNS], lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {out} ({len(rows)} cases)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
