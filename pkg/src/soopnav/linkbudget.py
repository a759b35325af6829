"""Free-space path loss and maximum achievable C/N0 per system.

The budget is deliberately minimal: EIRP, receiver G/T, free-space path
loss at the minimum (nadir) distance and Boltzmann's constant.
Atmospheric, polarization and pointing losses are explicitly zero, so the
resulting C/N0 is the geometric maximum for each downlink.

Per-system default budgets carry an effective EIRP + G/T sum
reverse-solved from the published maximum C/N0 and path-loss figures
(sum = C/N0 + FSPL - 228.601); only the sum is observable from those
figures, so it is stored lumped into ``eirp_dbw`` with ``g_over_t_dbk``
zero.  The independently reported literature C/N0 measurements (much lower
than the geometric maximum) are carried alongside without reconciliation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .catalog import SYSTEM_IDS, catalog_get
from .constants import BOLTZMANN_DBW_PER_K_HZ, SPEED_OF_LIGHT_MPS

__all__ = [
    "LinkBudgetSpec",
    "fspl_db",
    "cn0_max_dbhz",
    "builtin_budget",
    "literature_cn0_dbhz",
    "LINKBUDGET_CSV_HEADER",
    "linkbudget_rows",
]


@dataclass(frozen=True)
class LinkBudgetSpec:
    """Inputs of the all-dB link budget."""

    eirp_dbw: float
    g_over_t_dbk: float
    slant_range_m: float
    carrier_hz: float
    boltzmann_dbwkhz: float = BOLTZMANN_DBW_PER_K_HZ

    def __post_init__(self) -> None:
        if self.slant_range_m <= 0.0:
            raise ValueError("slant_range_m must be positive")
        if self.carrier_hz <= 0.0:
            raise ValueError("carrier_hz must be positive")


def fspl_db(range_m: float, carrier_hz: float,
            c_mps: float = SPEED_OF_LIGHT_MPS) -> float:
    """Free-space path loss 20*log10(4 pi d f / c) in dB."""
    if range_m <= 0.0 or carrier_hz <= 0.0:
        raise ValueError("range and carrier frequency must be positive")
    return 20.0 * math.log10(4.0 * math.pi * range_m * carrier_hz / c_mps)


def cn0_max_dbhz(spec: LinkBudgetSpec,
                 c_mps: float = SPEED_OF_LIGHT_MPS) -> float:
    """Maximum achievable C/N0 in dB-Hz.

    EIRP + G/T - FSPL - 10*log10(k), the all-dB form of the linear budget
    C/N0 = EIRP * (G/T) * L_P / k.
    """
    loss = fspl_db(spec.slant_range_m, spec.carrier_hz, c_mps=c_mps)
    return (spec.eirp_dbw + spec.g_over_t_dbk - loss - spec.boltzmann_dbwkhz)


# Effective EIRP + G/T per system, reverse-solved from the published
# maximum C/N0 and path loss (sum = C/N0 + FSPL + boltzmann constant,
# e.g. Starlink 109.3 + 168.5 - 228.601 = 49.199 dB).
_EFFECTIVE_EIRP_PLUS_GT_DB = {
    "Starlink": 49.199,
    "OneWeb": 51.829,
    "Iridium": 6.499,
    "Orbcomm": -16.301,
}

# Independently measured C/N0 figures from the literature, where reported.
_LITERATURE_CN0_DBHZ = {
    "Starlink": 42.6,
    "OneWeb": 31.9,
}


def builtin_budget(system_id: str,
                   slant_range_m: Optional[float] = None) -> LinkBudgetSpec:
    """Default link budget for a cataloged system.

    The path-loss distance defaults to the orbit altitude (the minimum
    possible distance, satellite at zenith); pass ``slant_range_m`` to
    evaluate an arbitrary geometry.
    """
    spec = catalog_get(system_id)
    return LinkBudgetSpec(
        eirp_dbw=_EFFECTIVE_EIRP_PLUS_GT_DB[system_id],
        g_over_t_dbk=0.0,
        slant_range_m=spec.altitude_m if slant_range_m is None else slant_range_m,
        carrier_hz=spec.carrier_frequency_hz,
    )


def literature_cn0_dbhz(system_id: str) -> Optional[float]:
    """Reported measured C/N0 for a system, or None where unavailable."""
    if system_id not in SYSTEM_IDS:
        raise ValueError(f"unknown system_id {system_id!r}")
    return _LITERATURE_CN0_DBHZ.get(system_id)


#: Column order of the link-budget CSV dump.
LINKBUDGET_CSV_HEADER = ("system,altitude_m,carrier_hz,fspl_db,"
                         "cn0_max_dbhz,cn0_literature_dbhz")


def linkbudget_rows() -> list:
    """One CSV row per cataloged system at the zenith (minimum) distance."""
    rows = []
    for system_id in SYSTEM_IDS:
        spec = catalog_get(system_id)
        budget = builtin_budget(system_id)
        rows.append((
            system_id,
            spec.altitude_m,
            spec.carrier_frequency_hz,
            fspl_db(budget.slant_range_m, budget.carrier_hz),
            cn0_max_dbhz(budget),
            literature_cn0_dbhz(system_id),
        ))
    return rows
