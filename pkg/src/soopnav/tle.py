"""Two-line element set parsing and validation.

Accepts standard NORAD 2-line element sets, optionally preceded by a name
line (3-line format).  Each record is validated for line structure and the
modulo-10 checksum rule (digits sum with '-' counting as 1); records that
fail validation are rejected and reported in the diagnostics list with
their line numbers, while valid records are returned in order.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from typing import Iterator, List, Sequence, Tuple

__all__ = ["OrbitalElements", "TleParseResult", "parse_tle",
           "tle_checksum", "julian_date"]


@dataclass(frozen=True)
class OrbitalElements:
    """Mean orbital elements of one TLE record."""

    satellite_id: int
    epoch: datetime
    mean_motion_revday: float
    eccentricity: float
    inclination_deg: float
    raan_deg: float
    arg_perigee_deg: float
    mean_anomaly_deg: float
    bstar: float
    line_checksums_ok: bool = True

    def __post_init__(self) -> None:
        if not 0.0 <= self.eccentricity < 1.0:
            raise ValueError("eccentricity must lie in [0, 1)")
        if not 0.0 <= self.inclination_deg <= 180.0:
            raise ValueError("inclination must lie in [0, 180] degrees")
        if self.mean_motion_revday <= 0.0:
            raise ValueError("mean motion must be positive")
        if self.epoch.tzinfo is None:
            raise ValueError("epoch must be timezone-aware UTC")


class TleParseResult(Sequence):
    """Ordered collection of parsed elements plus parse diagnostics.

    Behaves as a sequence of :class:`OrbitalElements`; ``diagnostics``
    holds human-readable messages (with input line numbers) for every
    rejected or suspicious record.
    """

    def __init__(self, elements: List[OrbitalElements],
                 diagnostics: List[str]) -> None:
        self._elements = list(elements)
        self.diagnostics = list(diagnostics)

    def __len__(self) -> int:
        return len(self._elements)

    def __getitem__(self, idx):
        return self._elements[idx]

    def __iter__(self) -> Iterator[OrbitalElements]:
        return iter(self._elements)

    def __repr__(self) -> str:
        return (f"TleParseResult({len(self._elements)} elements, "
                f"{len(self.diagnostics)} diagnostics)")


def tle_checksum(line: str) -> int:
    """Modulo-10 checksum of a TLE line body (all but the last column)."""
    total = 0
    for ch in line[:68]:
        if ch.isdigit():
            total += int(ch)
        elif ch == "-":
            total += 1
    return total % 10


def _implied_decimal(field: str) -> float:
    """Parse the TLE implied-decimal exponent notation, e.g. ' 13844-3'."""
    field = field.strip()
    if not field:
        return 0.0
    sign = 1.0
    if field[0] in "+-":
        if field[0] == "-":
            sign = -1.0
        field = field[1:]
    # Split mantissa digits from a trailing exponent (sign + digit).
    if len(field) >= 2 and field[-2] in "+-":
        mantissa, exp = field[:-2], field[-2:]
        exponent = int(exp)
    else:
        mantissa, exp = field, ""
        exponent = 0
    mantissa = mantissa.strip() or "0"
    return sign * float(f"0.{mantissa}") * 10.0 ** exponent


def _epoch_to_datetime(year2: int, day_of_year: float) -> datetime:
    year = 1900 + year2 if year2 >= 57 else 2000 + year2
    base = datetime(year, 1, 1, tzinfo=timezone.utc)
    return base + timedelta(days=day_of_year - 1.0)


def julian_date(epoch: datetime) -> float:
    """Julian date of a timezone-aware UTC datetime."""
    if epoch.tzinfo is None:
        raise ValueError("epoch must be timezone-aware UTC")
    epoch = epoch.astimezone(timezone.utc)
    year, month, day = epoch.year, epoch.month, epoch.day
    jd = (367.0 * year
          - int(7 * (year + int((month + 9) / 12.0)) * 0.25)
          + int(275 * month / 9.0) + day + 1721013.5)
    frac = (epoch.hour * 3600.0 + epoch.minute * 60.0 + epoch.second
            + epoch.microsecond * 1e-6) / 86400.0
    return jd + frac


def _parse_pair(line1: str, line2: str, lineno1: int,
                diagnostics: List[str]) -> OrbitalElements:
    for lineno, line, lead in ((lineno1, line1, "1"), (lineno1 + 1, line2, "2")):
        if len(line) < 69:
            raise ValueError(f"line {lineno}: too short for a TLE line "
                             f"({len(line)} < 69 columns)")
        if line[0] != lead:
            raise ValueError(f"line {lineno}: expected line number {lead!r}")
        if not line[68].isdigit():
            raise ValueError(f"line {lineno}: checksum column is not a digit")
        if tle_checksum(line) != int(line[68]):
            raise ValueError(f"line {lineno}: checksum mismatch "
                             f"(computed {tle_checksum(line)}, "
                             f"recorded {line[68]})")
    sat1 = line1[2:7].strip()
    sat2 = line2[2:7].strip()
    if sat1 != sat2:
        raise ValueError(f"line {lineno1}: satellite number differs between "
                         f"lines ({sat1!r} vs {sat2!r})")
    try:
        return OrbitalElements(
            satellite_id=int(sat1),
            epoch=_epoch_to_datetime(int(line1[18:20]),
                                     float(line1[20:32])),
            mean_motion_revday=float(line2[52:63]),
            eccentricity=float(f"0.{line2[26:33].strip() or '0'}"),
            inclination_deg=float(line2[8:16]),
            raan_deg=float(line2[17:25]),
            arg_perigee_deg=float(line2[34:42]),
            mean_anomaly_deg=float(line2[43:51]),
            bstar=_implied_decimal(line1[53:61]),
            line_checksums_ok=True,
        )
    except ValueError as exc:
        raise ValueError(f"line {lineno1}: {exc}") from None


def parse_tle(text: str) -> TleParseResult:
    """Parse 2-line (or named 3-line) element sets from ``text``.

    Returns every valid record in input order together with a diagnostics
    list describing rejected records.  Raises ``ValueError`` when the input
    contains candidate records but none parse.
    """
    elements: List[OrbitalElements] = []
    diagnostics: List[str] = []
    lines = text.splitlines()

    idx = 0
    candidates = 0
    while idx < len(lines):
        raw = lines[idx].rstrip("\r\n")
        stripped = raw.strip()
        if not stripped:
            idx += 1
            continue
        if raw.startswith("1 "):
            candidates += 1
            if idx + 1 >= len(lines):
                diagnostics.append(f"line {idx + 1}: dangling first line "
                                   "with no second line")
                idx += 1
                continue
            try:
                elements.append(_parse_pair(raw, lines[idx + 1].rstrip("\r\n"),
                                            idx + 1, diagnostics))
            except ValueError as exc:
                diagnostics.append(str(exc))
            idx += 2
        else:
            # Name line of a 3-line set, or stray text; skip it.
            if not raw.startswith("2 "):
                idx += 1
            else:
                candidates += 1
                diagnostics.append(f"line {idx + 1}: second line without a "
                                   "preceding first line")
                idx += 1

    if not lines or candidates == 0 and not elements:
        diagnostics.append("no records found in input")
    if candidates > 0 and not elements:
        raise ValueError("no valid TLE records: " + "; ".join(diagnostics))
    return TleParseResult(elements, diagnostics)
