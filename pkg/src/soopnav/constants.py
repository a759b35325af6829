"""Physical constants and unit helpers shared across the toolkit.

Conventions
-----------
* Link-budget and bound-conversion arithmetic uses the round value
  ``c = 3.0e8 m/s``, which is the convention the reference tables were
  computed with.  The exact SI value is available as
  :data:`SPEED_OF_LIGHT_SI_MPS` for callers that want it; every function
  that multiplies by ``c`` accepts an override.
* Boltzmann's constant enters dB link budgets as ``10*log10(k)`` in
  dBW/(K·Hz).  The fixed value -228.601 dBW/(K·Hz) is used throughout.
* Earth models: WGS-84 ellipsoid for geodetic ground-site work, the
  mean spherical radius only for rough horizon sanity checks.
"""

from __future__ import annotations

import math

# Speed of light. The round value is the working convention; the exact SI
# value is provided for callers that need it.
SPEED_OF_LIGHT_MPS = 3.0e8
SPEED_OF_LIGHT_SI_MPS = 299_792_458.0

# 10*log10(k_B) in dBW/(K Hz); classic link-budget constant.
BOLTZMANN_DBW_PER_K_HZ = -228.601

# WGS-84 defining parameters (NIMA TR8350.2).
WGS84_SEMIMAJOR_M = 6_378_137.0
WGS84_FLATTENING = 1.0 / 298.257223563
WGS84_ECC2 = WGS84_FLATTENING * (2.0 - WGS84_FLATTENING)

# Mean spherical Earth radius, used only for order-of-magnitude checks.
EARTH_MEAN_RADIUS_M = 6_371_000.0


def db_to_linear(value_db: float) -> float:
    """Convert a dB quantity to its linear ratio."""
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    """Convert a positive linear ratio to dB."""
    if value <= 0.0:
        raise ValueError("linear value must be positive to convert to dB")
    return 10.0 * math.log10(value)
