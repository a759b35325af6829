#!/usr/bin/env python3
"""Synthesize Walker-constellation TLE files for the bundled scenarios.

Each constellation is a set of Walker shells (inclination, altitude,
planes x satellites-per-plane, phasing factor).  Elements are written as
standard two-line element sets with near-zero eccentricity, zero drag and
a common epoch in the middle of the bundled 24 h scenario window, so the
propagated geometry is effectively the ideal shell.

The shells approximate the public layouts of the modeled systems at the
fidelity that matters here (visibility counts and GDOP statistics), not
any particular operator ephemeris snapshot.

Usage:
    python3 scripts/make_constellations.py [--out-dir data/tle]
"""

from __future__ import annotations

import argparse
import math
from pathlib import Path

# wgs72 gravitational parameter, km^3/s^2 (consistent with the propagator)
MU_KM3_S2 = 398600.8
EARTH_RADIUS_KM = 6371.0

#: Common element-set epoch: 2024 day 110.5 = 2024-04-19 12:00:00 UTC,
#: the midpoint of the bundled scenario day.
EPOCH_FIELD = "24110.50000000"

ECCENTRICITY = 0.0001


def tle_checksum(line: str) -> int:
    total = 0
    for ch in line[:68]:
        if ch.isdigit():
            total += int(ch)
        elif ch == "-":
            total += 1
    return total % 10


def mean_motion_revday(altitude_km: float) -> float:
    a = EARTH_RADIUS_KM + altitude_km
    n_rad_s = math.sqrt(MU_KM3_S2 / a**3)
    return n_rad_s * 86400.0 / (2.0 * math.pi)


def tle_pair(satnum: int, incl_deg: float, raan_deg: float, ma_deg: float,
             mm_revday: float) -> tuple[str, str]:
    line1 = (f"1 {satnum:05d}U          {EPOCH_FIELD}  .00000000"
             f"  00000-0  00000-0 0  999")
    line1 += str(tle_checksum(line1))
    ecc_field = f"{ECCENTRICITY:.7f}"[2:]
    line2 = (f"2 {satnum:05d} {incl_deg:8.4f} {raan_deg % 360.0:8.4f} "
             f"{ecc_field} {0.0:8.4f} {ma_deg % 360.0:8.4f} "
             f"{mm_revday:11.8f}    1")
    line2 += str(tle_checksum(line2))
    for line in (line1, line2):
        if len(line) != 69:
            raise AssertionError(f"bad TLE line length {len(line)}: {line!r}")
    return line1, line2


def walker_shell(altitude_km: float, incl_deg: float, planes: int,
                 per_plane: int, phasing: int, raan_span_deg: float = 360.0,
                 raan0_deg: float = 0.0) -> list[tuple[float, float]]:
    """(raan_deg, in-plane anomaly deg) for each satellite of one shell."""
    total = planes * per_plane
    out = []
    for p in range(planes):
        raan = raan0_deg + raan_span_deg * p / planes
        for s in range(per_plane):
            anomaly = 360.0 * s / per_plane + 360.0 * phasing * p / total
            out.append((raan, anomaly))
    return out


#: (filename stem, [(alt_km, incl_deg, planes, per_plane, phasing,
#:                   raan_span_deg, raan0_deg)])
CONSTELLATIONS = [
    ("starlink", [
        (550.0, 53.0, 72, 22, 17, 360.0, 0.0),
        (540.0, 53.2, 72, 22, 17, 360.0, 2.5),
        (570.0, 70.0, 36, 20, 11, 360.0, 0.0),
        (560.0, 97.6, 10, 52, 3, 360.0, 0.0),
        (530.0, 43.0, 28, 36, 5, 360.0, 0.0),
    ]),
    ("oneweb", [
        (1200.0, 87.9, 12, 53, 1, 360.0, 0.0),
    ]),
    ("iridium", [
        (780.0, 86.4, 6, 11, 1, 180.0, 0.0),
    ]),
    ("orbcomm", [
        (750.0, 47.0, 4, 8, 1, 360.0, 0.0),
    ]),
    ("galileo", [
        (23222.0, 56.0, 3, 9, 1, 360.0, 0.0),
    ]),
]

#: First satellite number per constellation (five-digit NORAD-style ids).
SATNUM_BASE = {
    "starlink": 10000,
    "oneweb": 20000,
    "iridium": 30000,
    "orbcomm": 40000,
    "galileo": 45000,
}


def build(out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    for stem, shells in CONSTELLATIONS:
        satnum = SATNUM_BASE[stem]
        lines = []
        for alt, incl, planes, per_plane, f, span, raan0 in shells:
            mm = mean_motion_revday(alt)
            for raan, anomaly in walker_shell(alt, incl, planes, per_plane,
                                              f, span, raan0):
                l1, l2 = tle_pair(satnum, incl, raan, anomaly, mm)
                lines.append(l1)
                lines.append(l2)
                satnum += 1
        path = out_dir / f"{stem}.tle"
        path.write_text("\n".join(lines) + "\n")
        print(f"wrote {path} ({len(lines) // 2} satellites)")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", type=Path,
                        default=Path(__file__).resolve().parent.parent
                        / "data" / "tle")
    args = parser.parse_args()
    build(args.out_dir)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
