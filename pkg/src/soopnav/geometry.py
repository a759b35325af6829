"""Ground-site geometry: ENU look angles, off-nadir angle, visibility.

Sites are geodetic WGS-84 coordinates.  Visibility combines a receiver
masking angle (minimum elevation) with a transmit-beam constraint
modeled as a nadir-pointed cone of half-angle equal to the beamwidth
parameter: a site is illuminated only while it sits inside the cone.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .constants import WGS84_ECC2, WGS84_SEMIMAJOR_M


@dataclass(frozen=True)
class GroundSite:
    """Geodetic receiver location (WGS-84)."""

    name: str
    latitude_deg: float
    longitude_deg: float
    altitude_m: float = 0.0

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("site name must be non-empty")
        if not -90.0 <= self.latitude_deg <= 90.0:
            raise ValueError(
                f"latitude {self.latitude_deg} out of [-90, 90] degrees"
            )
        if not math.isfinite(self.longitude_deg):
            raise ValueError("longitude must be finite")
        # Normalize longitude into (-180, 180].
        lon = math.fmod(self.longitude_deg, 360.0)
        if lon <= -180.0:
            lon += 360.0
        elif lon > 180.0:
            lon -= 360.0
        object.__setattr__(self, "longitude_deg", lon)

    def ecef_m(self) -> np.ndarray:
        """WGS-84 geodetic to ECEF, meters, shape (3,)."""
        lat = math.radians(self.latitude_deg)
        lon = math.radians(self.longitude_deg)
        slat, clat = math.sin(lat), math.cos(lat)
        n = WGS84_SEMIMAJOR_M / math.sqrt(1.0 - WGS84_ECC2 * slat * slat)
        return np.array(
            [
                (n + self.altitude_m) * clat * math.cos(lon),
                (n + self.altitude_m) * clat * math.sin(lon),
                (n * (1.0 - WGS84_ECC2) + self.altitude_m) * slat,
            ]
        )

    def enu_basis(self) -> np.ndarray:
        """Rows are the local east, north, up unit vectors (geodetic)."""
        lat = math.radians(self.latitude_deg)
        lon = math.radians(self.longitude_deg)
        slat, clat = math.sin(lat), math.cos(lat)
        slon, clon = math.sin(lon), math.cos(lon)
        return np.array(
            [
                [-slon, clon, 0.0],
                [-slat * clon, -slat * slon, clat],
                [clat * clon, clat * slon, slat],
            ]
        )


@dataclass(frozen=True)
class VisibilityRule:
    """Receiver masking angle plus transmitter beamwidth constraint."""

    masking_angle_deg: float
    beamwidth_deg: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.masking_angle_deg < 90.0:
            raise ValueError(
                f"masking angle {self.masking_angle_deg} out of [0, 90) degrees"
            )
        if not 0.0 < self.beamwidth_deg <= 90.0:
            raise ValueError(
                f"beamwidth {self.beamwidth_deg} out of (0, 90] degrees"
            )


def look_angles(site: GroundSite, sat_ecef_m) -> tuple[float, float, float]:
    """Elevation, azimuth, slant range of a satellite from a site.

    Azimuth is measured clockwise from north, in [0, 360).  Raises if
    the satellite coincides with the site.
    """
    los = np.asarray(sat_ecef_m, dtype=float) - site.ecef_m()
    slant = float(np.linalg.norm(los))
    if slant == 0.0:
        raise ValueError("satellite position coincides with the site")
    e, n, u = site.enu_basis() @ los
    elevation = math.degrees(math.asin(max(-1.0, min(1.0, u / slant))))
    azimuth = math.degrees(math.atan2(e, n)) % 360.0
    return elevation, azimuth, slant


def off_nadir_angle(sat_ecef_m, site_ecef_m) -> float:
    """Angle at the satellite between nadir and the site direction, degrees.

    Nadir is the direction toward Earth's center (the negated satellite
    position vector).  Zero when the site is directly beneath the
    satellite.  Raises on degenerate zero vectors.
    """
    sat = np.asarray(sat_ecef_m, dtype=float)
    to_site = np.asarray(site_ecef_m, dtype=float) - sat
    r_sat = float(np.linalg.norm(sat))
    r_los = float(np.linalg.norm(to_site))
    if r_sat == 0.0 or r_los == 0.0:
        raise ValueError("degenerate geometry: zero-length vector")
    cosang = float(np.dot(to_site, -sat)) / (r_sat * r_los)
    return math.degrees(math.acos(max(-1.0, min(1.0, cosang))))


def is_visible(
    elevation_deg: float, off_nadir_deg: float, rule: VisibilityRule
) -> bool:
    """True iff elevation clears the mask and the site is in the beam."""
    return (
        elevation_deg >= rule.masking_angle_deg
        and off_nadir_deg <= rule.beamwidth_deg
    )


def elevation_offnadir_many(
    site_ecef_m: np.ndarray,
    enu: np.ndarray,
    sat_ecef_m: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized elevation and off-nadir angles for many satellites.

    ``sat_ecef_m`` has shape (n, 3); returns two (n,) arrays in degrees.
    Rows containing NaN (failed propagations) yield NaN angles, which
    compare false against any threshold.
    """
    los = sat_ecef_m - site_ecef_m
    slant = np.linalg.norm(los, axis=1)
    up = los @ enu[2]
    with np.errstate(invalid="ignore", divide="ignore"):
        elevation = np.degrees(np.arcsin(np.clip(up / slant, -1.0, 1.0)))
        r_sat = np.linalg.norm(sat_ecef_m, axis=1)
        # angle between nadir (-sat) and the satellite-to-site direction
        # (-los): their dot product is +dot(los, sat).
        cosang = np.einsum("ij,ij->i", los, sat_ecef_m) / (slant * r_sat)
        off_nadir = np.degrees(np.arccos(np.clip(cosang, -1.0, 1.0)))
    return elevation, off_nadir


def load_sites(path: str | Path) -> list[GroundSite]:
    """Read ground sites from a CSV with columns name,lat_deg,lon_deg,alt_m."""
    sites: list[GroundSite] = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"name", "lat_deg", "lon_deg", "alt_m"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(
                f"{path}: site CSV must have columns name,lat_deg,lon_deg,alt_m"
            )
        for i, row in enumerate(reader, start=2):
            try:
                sites.append(
                    GroundSite(
                        name=row["name"].strip(),
                        latitude_deg=float(row["lat_deg"]),
                        longitude_deg=float(row["lon_deg"]),
                        altitude_m=float(row["alt_m"]),
                    )
                )
            except (TypeError, ValueError) as exc:
                raise ValueError(f"{path}: line {i}: {exc}") from exc
    if not sites:
        raise ValueError(f"{path}: no sites found")
    return sites
