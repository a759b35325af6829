#!/usr/bin/env python3
"""Fetch current TLE sets from CelesTrak for the modeled constellations.

Network utility, deliberately outside the tested surface: the bundled
scenarios run against the synthetic Walker element sets in ``data/tle/``
so that results are reproducible offline.  Use this script to pull live
catalogs when studying present-day geometry instead.

Usage:
    python3 scripts/fetch_tles.py [--out-dir data/tle-live]
"""

from __future__ import annotations

import argparse
import sys
import urllib.error
import urllib.request
from pathlib import Path

BASE = "https://celestrak.org/NORAD/elements/gp.php?GROUP={group}&FORMAT=tle"

GROUPS = {
    "starlink": "starlink",
    "oneweb": "oneweb",
    "iridium": "iridium-NEXT",
    "orbcomm": "orbcomm",
    "galileo": "galileo",
}


def fetch(group: str) -> str:
    url = BASE.format(group=group)
    with urllib.request.urlopen(url, timeout=60) as resp:
        return resp.read().decode("ascii", errors="replace")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", type=Path, default=Path("data/tle-live"))
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    status = 0
    for stem, group in GROUPS.items():
        try:
            text = fetch(group)
        except (urllib.error.URLError, OSError) as exc:
            print(f"{stem}: fetch failed: {exc}", file=sys.stderr)
            status = 1
            continue
        path = args.out_dir / f"{stem}.tle"
        path.write_text(text)
        n = sum(1 for line in text.splitlines() if line.startswith("1 "))
        print(f"wrote {path} ({n} records)")
    return status


if __name__ == "__main__":
    raise SystemExit(main())
