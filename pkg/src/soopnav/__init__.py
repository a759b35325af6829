"""Signals-of-opportunity LEO navigation analysis toolkit.

Modules:

- ``catalog``      transmitter catalog and spectral shape models
- ``bounds``       modified Cramér-Rao lower bounds and the spectral
                   curvature factor behind the delay bound
- ``linkbudget``   free-space path loss and maximum C/N0
- ``tle``          two-line element parsing
- ``orbits``       SGP4 propagation and Earth-fixed frame rotation
- ``geometry``     ground sites, look angles, visibility rules
- ``gdop``         geometry matrices and dilution of precision
- ``scenario``     multi-constellation visibility/GDOP campaigns
- ``acquisition``  OFDM sync burst acquisition Monte Carlo
- ``cli``          the ``soop`` command-line entry point
"""

from .bounds import (
    ArrayGeometry,
    BoundResult,
    CnDensity,
    mcrlb_aoa,
    mcrlb_delay,
    mcrlb_freq,
    mcrlb_phase,
    nmsb_numeric,
    nmsb_ofdm_closed_form,
    position_accuracy,
)
from .catalog import (
    OfdmSpec,
    SignalSpec,
    SpectrumModel,
    catalog_get,
    psd_model,
)
from .geometry import (
    GroundSite,
    VisibilityRule,
    is_visible,
    look_angles,
    off_nadir_angle,
)
from .gdop import GdopSample, gdop, geometry_matrix
from .linkbudget import LinkBudgetSpec, cn0_max_dbhz, fspl_db
from .orbits import SatelliteState, eci_to_ecef, propagate
from .scenario import ScenarioConfig, ccdf, cdf, run_scenario, summarize
from .tle import OrbitalElements, parse_tle

__version__ = "0.1.0"

__all__ = [
    "ArrayGeometry",
    "BoundResult",
    "CnDensity",
    "GdopSample",
    "GroundSite",
    "LinkBudgetSpec",
    "OfdmSpec",
    "OrbitalElements",
    "SatelliteState",
    "ScenarioConfig",
    "SignalSpec",
    "SpectrumModel",
    "VisibilityRule",
    "catalog_get",
    "ccdf",
    "cdf",
    "cn0_max_dbhz",
    "eci_to_ecef",
    "fspl_db",
    "gdop",
    "geometry_matrix",
    "is_visible",
    "look_angles",
    "mcrlb_aoa",
    "mcrlb_delay",
    "mcrlb_freq",
    "mcrlb_phase",
    "nmsb_numeric",
    "nmsb_ofdm_closed_form",
    "off_nadir_angle",
    "parse_tle",
    "position_accuracy",
    "propagate",
    "psd_model",
    "run_scenario",
    "summarize",
    "__version__",
]
