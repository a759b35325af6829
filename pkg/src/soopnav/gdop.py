"""Geometric dilution of precision from satellite line-of-sight sets.

Standard GNSS construction: each visible satellite contributes a row
[-u, 1] built from the unit line-of-sight u and a clock column, and
GDOP = sqrt(trace((H^T H)^{-1})).  GDOP is invariant under a common
orthonormal change of the position axes, so rows may be expressed in
any fixed local frame.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from datetime import datetime

import numpy as np

logger = logging.getLogger(__name__)

# Condition number of H beyond which the normal matrix is treated as
# numerically singular.
_COND_LIMIT = 1.0e12


@dataclass(frozen=True)
class GdopSample:
    """One (epoch, site, constellation) visibility and geometry record."""

    epoch: datetime
    site: str
    constellation: str
    visible_count: int
    gdop: float | None = None

    def __post_init__(self) -> None:
        if self.visible_count < 0:
            raise ValueError("visible_count must be non-negative")
        if self.gdop is not None and not self.gdop > 0.0:
            raise ValueError("gdop, when present, must be positive")


def geometry_matrix(site_ecef_m, sats_ecef_m, frame=None) -> np.ndarray:
    """Build the k-by-4 geometry matrix for one site and k satellites.

    Row i is [-u_i, 1] with u_i the unit line-of-sight from the site to
    satellite i.  ``frame`` optionally supplies a 3x3 orthonormal basis
    (rows east/north/up) in which to express the line-of-sight vectors;
    the default keeps Earth-fixed axes, which leaves GDOP unchanged.
    Raises if any satellite coincides with the site.
    """
    site = np.asarray(site_ecef_m, dtype=float)
    sats = np.atleast_2d(np.asarray(sats_ecef_m, dtype=float))
    if sats.shape[0] < 1 or sats.shape[1] != 3:
        raise ValueError("need at least one satellite position of dimension 3")
    los = sats - site
    norms = np.linalg.norm(los, axis=1)
    if np.any(norms == 0.0):
        raise ValueError("satellite position coincides with the site")
    u = los / norms[:, None]
    if frame is not None:
        u = u @ np.asarray(frame, dtype=float).T
    h = np.empty((sats.shape[0], 4))
    h[:, :3] = -u
    h[:, 3] = 1.0
    return h


def gdop(h: np.ndarray) -> float:
    """GDOP of a geometry matrix: sqrt(trace((H^T H)^{-1})).

    Computed from the singular values of H (trace of the inverse normal
    matrix is the sum of inverse squared singular values), which avoids
    forming and inverting H^T H.  Raises a "singular geometry" error
    when H is rank-deficient beyond condition number 1e12.
    """
    h = np.asarray(h, dtype=float)
    if h.ndim != 2 or h.shape[0] < 4 or h.shape[1] != 4:
        raise ValueError("geometry matrix must have shape (k >= 4, 4)")
    s = np.linalg.svd(h, compute_uv=False)
    if s[-1] == 0.0 or s[0] / s[-1] > _COND_LIMIT:
        raise ValueError(
            f"singular geometry: condition number "
            f"{math.inf if s[-1] == 0.0 else s[0] / s[-1]:.3e}"
        )
    logger.debug("geometry condition number %.3e", s[0] / s[-1])
    return float(np.sqrt(np.sum(1.0 / (s * s))))


def gdop_or_none(site_ecef_m, sats_ecef_m) -> float | None:
    """GDOP for a satellite set, or None when under 4 or singular."""
    sats = np.atleast_2d(np.asarray(sats_ecef_m, dtype=float))
    if sats.shape[0] < 4:
        return None
    try:
        return gdop(geometry_matrix(site_ecef_m, sats))
    except ValueError as exc:
        if "singular geometry" in str(exc):
            logger.debug("gdop dropped: %s", exc)
            return None
        raise
