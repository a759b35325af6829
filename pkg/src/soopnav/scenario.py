"""Visibility and GDOP Monte Carlo campaigns over TLE constellations.

A campaign propagates every satellite of one or more constellations
over a regular epoch grid, applies the masking-angle/beamwidth
visibility rule at each ground site, and records per-epoch in-view
counts and GDOP.  Summary products are the empirical CCDF of the
in-view count, the empirical CDF of GDOP, and mean/std tables.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timedelta
from pathlib import Path

import numpy as np

from . import _sgp4_core as _core
from ._sgp4_vec import sgp4_array
from .gdop import GdopSample, gdop_or_none
from .geometry import GroundSite, VisibilityRule, elevation_offnadir_many
from .orbits import DEFAULT_MAX_STALENESS_DAYS, _satrec_for
from .tle import julian_date, parse_tle

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScenarioConfig:
    """One campaign: constellations, sites, epoch grid, visibility rule."""

    constellation_tle_paths: tuple[str, ...]
    sites: tuple[GroundSite, ...]
    start: datetime
    end: datetime
    step_s: float
    rule: VisibilityRule
    rng_seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "constellation_tle_paths", tuple(self.constellation_tle_paths)
        )
        object.__setattr__(self, "sites", tuple(self.sites))
        if not self.constellation_tle_paths:
            raise ValueError("need at least one constellation TLE path")
        if not self.sites:
            raise ValueError("need at least one ground site")
        if self.start.tzinfo is None or self.end.tzinfo is None:
            raise ValueError("start and end must be timezone-aware UTC")
        if not self.start < self.end:
            raise ValueError("start must precede end")
        if not self.step_s > 0:
            raise ValueError("step_s must be positive")

    def epochs(self) -> list[datetime]:
        """The inclusive regular epoch grid."""
        out = []
        k = 0
        while True:
            ep = self.start + timedelta(seconds=self.step_s * k)
            if ep > self.end:
                break
            out.append(ep)
            k += 1
        return out


def constellation_name(path: str | Path) -> str:
    """Constellation label derived from the TLE file name."""
    return Path(path).stem


def _positions_ecef(
    tle_path: str | Path, epochs: list[datetime]
) -> np.ndarray:
    """ECEF positions (n_sats, n_epochs, 3) in meters; NaN rows on failure."""
    text = Path(tle_path).read_text()
    records = parse_tle(text)
    for diag in records.diagnostics:
        logger.warning("%s: %s", tle_path, diag)
    jd = np.array([julian_date(ep) for ep in epochs])
    gmst = np.array([_core.gstime(j) for j in jd])
    cg, sg = np.cos(gmst), np.sin(gmst)
    n_ep = len(epochs)
    pos = np.full((len(records), n_ep, 3), np.nan)
    stale_days = 0.0
    for i, el in enumerate(records):
        try:
            rec = _satrec_for(el)
        except RuntimeError as exc:
            logger.warning("%s: skipped: %s", tle_path, exc)
            continue
        tsince = (jd - julian_date(el.epoch)) * 1440.0
        stale_days = max(stale_days, np.abs(tsince).max() / 1440.0)
        if rec.method == "d":
            r_km = np.full((n_ep, 3), np.nan)
            for j, tm in enumerate(tsince):
                rj, _ = _core.sgp4(rec, float(tm))
                if rec.error == 0:
                    r_km[j] = rj
                else:
                    logger.warning(
                        "%s: sat %s epoch %s: %s",
                        tle_path,
                        el.satellite_id,
                        epochs[j].isoformat(),
                        rec.error_message,
                    )
        else:
            r_km, _ = sgp4_array(rec, tsince)
        x, y, z = r_km[:, 0], r_km[:, 1], r_km[:, 2]
        pos[i, :, 0] = (cg * x + sg * y) * 1000.0
        pos[i, :, 1] = (-sg * x + cg * y) * 1000.0
        pos[i, :, 2] = z * 1000.0
    if stale_days > DEFAULT_MAX_STALENESS_DAYS:
        logger.warning(
            "%s: campaign epochs reach %.1f days from the element epoch",
            tle_path,
            stale_days,
        )
    n_dead = int(np.isnan(pos[:, :, 0]).all(axis=1).sum())
    if n_dead:
        logger.warning(
            "%s: %d of %d satellites produced no usable states",
            tle_path,
            n_dead,
            len(records),
        )
    return pos


def _samples_for_constellation(
    tle_path: str | Path,
    config: ScenarioConfig,
    epochs: list[datetime],
) -> list[GdopSample]:
    name = constellation_name(tle_path)
    pos = _positions_ecef(tle_path, epochs)
    theta = config.rule.masking_angle_deg
    phi = config.rule.beamwidth_deg
    samples: list[GdopSample] = []
    for site in config.sites:
        site_ecef = site.ecef_m()
        enu = site.enu_basis()
        n_sats = pos.shape[0]
        flat = pos.reshape(n_sats * len(epochs), 3)
        el, off = elevation_offnadir_many(site_ecef, enu, flat)
        el = el.reshape(n_sats, len(epochs))
        off = off.reshape(n_sats, len(epochs))
        # NaN angles (failed propagations) compare false on both sides.
        with np.errstate(invalid="ignore"):
            vis = (el >= theta) & (off <= phi)
        counts = vis.sum(axis=0)
        for j, ep in enumerate(epochs):
            g = None
            if counts[j] >= 4:
                g = gdop_or_none(site_ecef, pos[vis[:, j], j, :])
            samples.append(
                GdopSample(
                    epoch=ep,
                    site=site.name,
                    constellation=name,
                    visible_count=int(counts[j]),
                    gdop=g,
                )
            )
    return samples


def run_scenario(
    config: ScenarioConfig, threads: int | None = None
) -> list[GdopSample]:
    """Run the campaign; returns samples sorted by constellation, site, epoch.

    Per-satellite propagation failures are logged and skipped; the
    campaign itself never aborts on them.
    """
    epochs = config.epochs()
    results: list[GdopSample] = []
    if threads is not None and threads < 1:
        raise ValueError("threads must be at least 1")
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [
            pool.submit(_samples_for_constellation, path, config, epochs)
            for path in config.constellation_tle_paths
        ]
        for fut in futures:
            results.extend(fut.result())
    results.sort(key=lambda s: (s.constellation, s.site, s.epoch))
    return results


def ccdf(counts) -> list[tuple[int, float]]:
    """Empirical complementary CDF of integer counts: rows (N, P(n > N)).

    N runs from 0 to max(counts); P is non-increasing with P(n > max) = 0.
    """
    counts = np.asarray(list(counts), dtype=int)
    if counts.size == 0:
        raise ValueError("ccdf needs at least one count")
    return [
        (n, float(np.mean(counts > n))) for n in range(int(counts.max()) + 1)
    ]


def cdf(values) -> list[tuple[float, float]]:
    """Empirical CDF over sorted values: rows (x, P(v <= x)); CDF(max) = 1."""
    vals = np.asarray(list(values), dtype=float)
    if vals.size == 0:
        raise ValueError("cdf needs at least one value")
    xs, counts = np.unique(vals, return_counts=True)
    cum = np.cumsum(counts) / vals.size
    return [(float(x), float(p)) for x, p in zip(xs, cum)]


def summarize(values) -> tuple[float, float]:
    """Mean and unbiased (n-1) standard deviation; std 0 for one value."""
    vals = np.asarray(list(values), dtype=float)
    if vals.size == 0:
        raise ValueError("summarize needs at least one value")
    mean = float(np.mean(vals))
    std = 0.0 if vals.size == 1 else float(np.std(vals, ddof=1))
    if not (math.isfinite(mean) and math.isfinite(std)):
        raise ValueError("summarize produced a non-finite statistic")
    return mean, std


def fix_availability(samples: list[GdopSample]) -> float:
    """Fraction of samples with at least 4 satellites in view, in [0, 1]."""
    if not samples:
        raise ValueError("no samples")
    return float(np.mean([s.visible_count >= 4 for s in samples]))


def group_samples(
    samples: list[GdopSample],
) -> dict[tuple[str, str], list[GdopSample]]:
    """Group samples by (site, constellation), preserving epoch order."""
    groups: dict[tuple[str, str], list[GdopSample]] = {}
    for s in samples:
        groups.setdefault((s.site, s.constellation), []).append(s)
    return groups
