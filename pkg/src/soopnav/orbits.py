"""SGP4 propagation and Earth-fixed frame conversion.

Thin wrapper around the vendored SGP4 propagator (see ``_sgp4_core``).
Element sets parsed from TLEs are propagated in the TEME frame and
rotated into an Earth-fixed frame using the IAU-1982 GMST model, which
is the standard pairing for TLE-derived ephemerides (Vallado,
"Fundamentals of Astrodynamics and Applications", 4th ed., ch. 3 and 8).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from datetime import datetime, timezone
from types import SimpleNamespace

import numpy as np

from . import _sgp4_core as _core
from .tle import OrbitalElements, julian_date

_TWOPI = 2.0 * math.pi

# Gravity model used to initialize the propagator.  WGS-72 is the model
# the TLE fitting process assumes (Spacetrack Report #3), so element
# sets round-trip correctly only with these constants.
_GRAVITY_MODEL = "wgs72"
_WHICHCONST = _core.getgravconst(_GRAVITY_MODEL)
_EARTH_RADIUS_KM = _WHICHCONST[2]

# Epoch offset used by the propagator core: days since 1949 December 31
# 00:00 UT (julian date 2433281.5).
_SGP4_EPOCH_JD = 2433281.5

# Minimum altitude considered a live orbit; below this the object has
# reentered for any practical visibility purpose.
_MIN_ALTITUDE_KM = 100.0

DEFAULT_MAX_STALENESS_DAYS = 14.0


class PropagationError(RuntimeError):
    """Raised when the propagator cannot produce a usable state."""


class StalenessWarning(UserWarning):
    """Issued when propagating far from the element set epoch."""


@dataclass(frozen=True)
class SatelliteState:
    """Inertial (TEME) state at a single epoch, in SI units."""

    satellite_id: int
    epoch: datetime
    position_eci_m: tuple[float, float, float]
    velocity_eci_mps: tuple[float, float, float]
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if self.epoch.tzinfo is None:
            raise ValueError("state epoch must be timezone-aware UTC")
        r = math.sqrt(sum(c * c for c in self.position_eci_m))
        if not 6.6e6 <= r <= 5.0e7:
            raise ValueError(
                f"position magnitude {r:.3e} m outside the plausible "
                "range for an Earth-orbiting transmitter"
            )


def _build_satrec(elements: OrbitalElements) -> SimpleNamespace:
    satrec = SimpleNamespace()
    epoch_days = julian_date(elements.epoch) - _SGP4_EPOCH_JD
    no_kozai = elements.mean_motion_revday * _TWOPI / 1440.0
    _core.sgp4init(
        _WHICHCONST,
        "i",
        int(elements.satellite_id),
        epoch_days,
        elements.bstar,
        0.0,
        0.0,
        elements.eccentricity,
        math.radians(elements.arg_perigee_deg),
        math.radians(elements.inclination_deg),
        math.radians(elements.mean_anomaly_deg),
        no_kozai,
        math.radians(elements.raan_deg),
        satrec,
    )
    return satrec


# The init step dominates when the same element set is queried at many
# epochs, so initialized records are cached per element set.
_SATREC_CACHE: dict[OrbitalElements, SimpleNamespace] = {}


def _satrec_for(elements: OrbitalElements) -> SimpleNamespace:
    rec = _SATREC_CACHE.get(elements)
    if rec is None:
        rec = _build_satrec(elements)
        if rec.error != 0:
            raise PropagationError(
                f"{elements.satellite_id}: decayed or unpropagatable "
                f"element set ({rec.error_message})"
            )
        _SATREC_CACHE[elements] = rec
    return rec


def _check_state(
    elements: OrbitalElements, satrec: SimpleNamespace, r_km, v_kmps
) -> None:
    if satrec.error != 0:
        raise PropagationError(
            f"{elements.satellite_id}: decayed ({satrec.error_message})"
        )
    alt_km = math.sqrt(sum(c * c for c in r_km)) - _EARTH_RADIUS_KM
    if alt_km < _MIN_ALTITUDE_KM:
        raise PropagationError(
            f"{elements.satellite_id}: decayed (altitude "
            f"{alt_km:.1f} km below {_MIN_ALTITUDE_KM:.0f} km)"
        )


def propagate(
    elements: OrbitalElements,
    epoch: datetime,
    max_staleness_days: float = DEFAULT_MAX_STALENESS_DAYS,
) -> SatelliteState:
    """Propagate one element set to ``epoch`` (timezone-aware UTC).

    Propagating further than ``max_staleness_days`` from the element
    set epoch succeeds but attaches a staleness warning to the returned
    state, and also issues a :class:`StalenessWarning`.  A decayed or
    numerically failed propagation raises :class:`PropagationError`.
    """
    if epoch.tzinfo is None:
        raise ValueError("propagation epoch must be timezone-aware UTC")
    satrec = _satrec_for(elements)
    dt_min = (julian_date(epoch) - julian_date(elements.epoch)) * 1440.0
    notes: tuple[str, ...] = ()
    if abs(dt_min) > max_staleness_days * 1440.0:
        msg = (
            f"{elements.satellite_id}: propagating {abs(dt_min) / 1440.0:.1f} "
            f"days from epoch exceeds the {max_staleness_days:.1f} day "
            "staleness limit; accuracy is degraded"
        )
        warnings.warn(msg, StalenessWarning, stacklevel=2)
        notes = (msg,)
    r_km, v_kmps = _core.sgp4(satrec, dt_min)
    _check_state(elements, satrec, r_km, v_kmps)
    return SatelliteState(
        satellite_id=elements.satellite_id,
        epoch=epoch,
        position_eci_m=tuple(1000.0 * c for c in r_km),
        velocity_eci_mps=tuple(1000.0 * c for c in v_kmps),
        warnings=notes,
    )


def propagate_many(
    elements: OrbitalElements,
    epochs: list[datetime] | np.ndarray,
    max_staleness_days: float = DEFAULT_MAX_STALENESS_DAYS,
) -> tuple[np.ndarray, np.ndarray]:
    """Propagate one element set to many epochs.

    Returns ``(positions_m, velocities_mps)`` with shape (n, 3).  Any
    epoch that fails (decay, numerical trouble) yields NaN rows rather
    than aborting the batch; callers that need hard failures should use
    :func:`propagate`.
    """
    satrec = _satrec_for(elements)
    epoch_jd0 = julian_date(elements.epoch)
    n = len(epochs)
    pos = np.full((n, 3), np.nan)
    vel = np.full((n, 3), np.nan)
    stale_limit_min = max_staleness_days * 1440.0
    stale = False
    for i, ep in enumerate(epochs):
        dt_min = (julian_date(ep) - epoch_jd0) * 1440.0
        if abs(dt_min) > stale_limit_min:
            stale = True
        r_km, v_kmps = _core.sgp4(satrec, dt_min)
        if satrec.error != 0:
            continue
        alt_km = math.sqrt(sum(c * c for c in r_km)) - _EARTH_RADIUS_KM
        if alt_km < _MIN_ALTITUDE_KM:
            continue
        pos[i] = r_km
        vel[i] = v_kmps
    if stale:
        warnings.warn(
            f"{elements.satellite_id}: some epochs exceed the "
            f"{max_staleness_days:.1f} day staleness limit",
            StalenessWarning,
            stacklevel=2,
        )
    return pos * 1000.0, vel * 1000.0


def gmst_rad(epoch: datetime) -> float:
    """Greenwich mean sidereal time (IAU-1982 model), radians."""
    return _core.gstime(julian_date(epoch))


def eci_to_ecef(state: SatelliteState) -> np.ndarray:
    """Earth-fixed position of a propagated state, shape (3,), meters.

    Rotates the TEME position about the pole by GMST at the state's
    epoch (UT1 approximated by UTC; polar motion neglected):
    ``x' = cos(g) x + sin(g) y``, ``y' = -sin(g) x + cos(g) y``.
    """
    return rotate_teme_to_ecef(state.position_eci_m, state.epoch)


def rotate_teme_to_ecef(position_eci_m, epoch: datetime) -> np.ndarray:
    """Rotate TEME position(s) into the Earth-fixed frame at one epoch.

    Accepts a single vector of shape (3,) or a batch of shape (n, 3).
    """
    g = gmst_rad(epoch)
    cg, sg = math.cos(g), math.sin(g)
    p = np.asarray(position_eci_m, dtype=float)
    single = p.ndim == 1
    p = np.atleast_2d(p)
    out = np.empty_like(p)
    out[:, 0] = cg * p[:, 0] + sg * p[:, 1]
    out[:, 1] = -sg * p[:, 0] + cg * p[:, 1]
    out[:, 2] = p[:, 2]
    return out[0] if single else out


def eci_to_ecef_batch(positions_eci_m: np.ndarray, gmst: np.ndarray) -> np.ndarray:
    """Rotate positions of shape (n, 3) by per-row GMST angles (n,)."""
    cg = np.cos(gmst)
    sg = np.sin(gmst)
    p = np.asarray(positions_eci_m, dtype=float)
    out = np.empty_like(p)
    out[:, 0] = cg * p[:, 0] + sg * p[:, 1]
    out[:, 1] = -sg * p[:, 0] + cg * p[:, 1]
    out[:, 2] = p[:, 2]
    return out
