"""Physical-layer parameter catalog for the four LEO signal systems.

The catalog stores, as compile-time constants, the downlink parameters of
the Starlink, OneWeb, Iridium-NEXT and Orbcomm systems used throughout the
toolkit: carrier frequency, channel bandwidth and count, symbol timing,
orbit altitude, beacon duration and transmit duty cycle.  It also exposes
evaluable baseband power-spectral-density shapes for each system, which the
bound computations integrate.

Spectral shapes are unnormalized: every consumer uses ratios of spectral
moments, which are invariant to the overall scale, so no power convention
is imposed here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

#: Systems covered by the catalog.
SYSTEM_IDS = ("Starlink", "OneWeb", "Iridium", "Orbcomm")

#: Modulation labels used by :class:`SignalSpec`.
MODULATIONS = ("OFDM", "QPSK", "SD-QPSK", "FlatSpectrum")


@dataclass(frozen=True)
class OfdmSpec:
    """OFDM numerology: subcarrier count/spacing and symbol/chip timing.

    ``symbol_period_s`` includes the cyclic prefix.  The useful part of the
    symbol is ``subcarrier_count * chip_period_s``; the cyclic prefix is
    whatever remains.
    """

    subcarrier_count: int
    symbol_period_s: float
    chip_period_s: float
    subcarrier_spacing_hz: float

    def __post_init__(self) -> None:
        n = self.subcarrier_count
        if n < 2 or n % 2 != 0:
            raise ValueError("inconsistent OFDM parameters: subcarrier count "
                             "must be an even integer >= 2")
        if (self.symbol_period_s <= 0.0 or self.chip_period_s <= 0.0
                or self.subcarrier_spacing_hz <= 0.0):
            raise ValueError("inconsistent OFDM parameters: timing and "
                             "spacing must be positive")
        # The cyclic prefix duration T_sym - 1/F must not be negative.
        if self.symbol_period_s * self.subcarrier_spacing_hz < 1.0 - 1e-12:
            raise ValueError("inconsistent OFDM parameters: symbol period "
                             "shorter than the useful part 1/F")

    @property
    def cyclic_prefix_s(self) -> float:
        """Cyclic prefix duration in seconds."""
        return self.symbol_period_s - 1.0 / self.subcarrier_spacing_hz

    @property
    def occupied_bandwidth_hz(self) -> float:
        """Nominal occupied bandwidth N*F in Hz."""
        return self.subcarrier_count * self.subcarrier_spacing_hz


@dataclass(frozen=True)
class SignalSpec:
    """Downlink physical-layer parameters of one signal system."""

    system_id: str
    modulation: str
    carrier_frequency_hz: float
    channel_bandwidth_hz: float
    channel_count: int
    symbol_period_s: float
    altitude_m: float
    beacon_length_s: float
    max_duty_cycle: float
    rolloff: Optional[float] = None
    ofdm: Optional[OfdmSpec] = None
    notes: str = ""

    def __post_init__(self) -> None:
        if self.system_id not in SYSTEM_IDS:
            raise ValueError(f"unknown system_id {self.system_id!r}")
        if self.modulation not in MODULATIONS:
            raise ValueError(f"unknown modulation {self.modulation!r}")
        if self.carrier_frequency_hz <= 0.0:
            raise ValueError("carrier_frequency_hz must be positive")
        if self.channel_bandwidth_hz <= 0.0:
            raise ValueError("channel_bandwidth_hz must be positive")
        if self.altitude_m <= 0.0:
            raise ValueError("altitude_m must be positive")
        if self.symbol_period_s <= 0.0:
            raise ValueError("symbol_period_s must be positive")
        if not 0.0 < self.max_duty_cycle <= 1.0:
            raise ValueError("max_duty_cycle must lie in (0, 1]")
        if (self.modulation == "OFDM") != (self.ofdm is not None):
            raise ValueError("ofdm block present if and only if the "
                             "modulation is OFDM")
        if (self.modulation in ("QPSK", "SD-QPSK")) != (self.rolloff is not None):
            raise ValueError("rolloff present if and only if the modulation "
                             "is a PSK variant")
        if self.rolloff is not None and not 0.0 <= self.rolloff <= 1.0:
            raise ValueError("rolloff must lie in [0, 1]")


@dataclass(frozen=True)
class SpectrumModel:
    """Evaluable baseband magnitude-squared spectral shape |G(f)|^2.

    ``evaluator`` maps baseband frequency in Hz (vectorized over numpy
    arrays) to the unnormalized magnitude-squared spectrum.  Outside
    ``support_hint`` the shape is treated as zero by consumers that need a
    finite integration domain; shapes with slowly decaying tails (the OFDM
    sub-pulse) keep meaningful mass near the hint edge, and integrators
    handle the tail explicitly.

    For multicarrier shapes built as a sum of one sub-pulse spectrum
    shifted to each subcarrier, ``subpulse`` and ``shifts_hz`` expose that
    structure so that integrators can exploit the exact linearity of
    spectral moments in the shifts instead of summing hundreds of terms per
    quadrature node.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    support_hint: Tuple[float, float]
    subpulse: Optional[Callable[[np.ndarray], np.ndarray]] = None
    shifts_hz: Optional[np.ndarray] = field(default=None, repr=False)
    subpulse_timescales_s: Optional[Tuple[float, float]] = None


def catalog_get(system_id: str) -> SignalSpec:
    """Return the built-in parameter set for one of the four systems."""
    try:
        return _CATALOG[system_id]
    except KeyError:
        raise ValueError(f"unknown system_id {system_id!r}; expected one of "
                         f"{SYSTEM_IDS}") from None


def _make_catalog() -> dict:
    starlink_ofdm = OfdmSpec(
        subcarrier_count=1024,
        symbol_period_s=4.4e-6,
        chip_period_s=4.167e-9,
        subcarrier_spacing_hz=234_375.0,
    )
    starlink = SignalSpec(
        system_id="Starlink",
        modulation="OFDM",
        carrier_frequency_hz=11.57e9,
        channel_bandwidth_hz=240e6,
        channel_count=8,
        symbol_period_s=4.4e-6,
        altitude_m=550e3,
        beacon_length_s=1.33e-3,
        max_duty_cycle=0.997,
        ofdm=starlink_ofdm,
        notes=("Ku downlink, 4th of 8 channels. Also radiates unmodulated "
               "carriers near 11.325 GHz spaced 44 kHz with C/N0 observed "
               "between 24 and 36 dB-Hz; see starlink_tone_grid()."),
    )
    oneweb = SignalSpec(
        system_id="OneWeb",
        modulation="FlatSpectrum",
        carrier_frequency_hz=11.075e9,
        channel_bandwidth_hz=250e6,
        channel_count=8,
        # The flat shape has no symbol structure; 1/B is the natural time
        # scale and cancels out of every bound that consumes this spec.
        symbol_period_s=1.0 / 250e6,
        altitude_m=1200e3,
        beacon_length_s=10e-3,
        max_duty_cycle=1.0,
        notes=("Ku downlink. Inner OFDM numerology not public; modeled as a "
               "flat spectrum across the 250 MHz channel."),
    )
    iridium = SignalSpec(
        system_id="Iridium",
        modulation="QPSK",
        carrier_frequency_hz=1.621e9,
        channel_bandwidth_hz=31.5e3,
        channel_count=240,
        symbol_period_s=40e-6,
        altitude_m=780e3,
        beacon_length_s=90e-3,
        max_duty_cycle=0.368,
        rolloff=0.40,
        notes="L-band TDMA downlink, 120th of 240 channels.",
    )
    orbcomm = SignalSpec(
        system_id="Orbcomm",
        modulation="SD-QPSK",
        carrier_frequency_hz=137.5e6,
        channel_bandwidth_hz=4.8e3,
        channel_count=1,
        symbol_period_s=208.33e-6,
        altitude_m=750e3,
        beacon_length_s=1.0,
        max_duty_cycle=0.5,
        rolloff=0.40,
        notes=("VHF downlink, single channel. Duty cycle up to 50%, "
               "commonly 6-10% in operation."),
    )
    return {s.system_id: s for s in (starlink, oneweb, iridium, orbcomm)}


_CATALOG = _make_catalog()


def starlink_tone_grid(tone_count: int = 9,
                       center_hz: float = 11.325e9,
                       spacing_hz: float = 44e3) -> np.ndarray:
    """Frequencies of the unmodulated Starlink carrier grid.

    Returns ``tone_count`` tone frequencies centered on ``center_hz`` and
    spaced ``spacing_hz`` apart.  Used only by angle-of-arrival examples;
    no spectral-density model is built for the tones.
    """
    if tone_count < 1:
        raise ValueError("tone_count must be at least 1")
    idx = np.arange(tone_count, dtype=float) - (tone_count - 1) / 2.0
    return center_hz + idx * spacing_hz


def _ofdm_subpulse_sq(ofdm: OfdmSpec) -> Callable[[np.ndarray], np.ndarray]:
    """Magnitude-squared spectrum of the trapezoidal sub-pulse.

    The per-subcarrier pulse is modeled as a trapezoid with plateau
    ``T_sym - T_C`` and rise/fall time ``T_C`` (the convolution of a
    ``T_sym`` rectangle with a ``T_C`` rectangle), whose spectrum is

        G0(f) = sin(pi f T_sym) sin(pi f T_C) / (pi^2 f^2 T_C)
              = T_sym sinc(f T_sym) sinc(f T_C)

    with the removable singularity G0(0) = T_sym.  This trapezoid has
    integral of g^2 equal to T_sym - T_C/3 and integral of g'^2 equal to
    2/T_C, which is exactly the pair of time-domain moments the closed-form
    spectral-width expression is built from.
    """
    t_sym = ofdm.symbol_period_s
    t_c = ofdm.chip_period_s

    def subpulse_sq(f: np.ndarray) -> np.ndarray:
        f = np.asarray(f, dtype=float)
        g0 = t_sym * np.sinc(f * t_sym) * np.sinc(f * t_c)
        return g0 * g0

    return subpulse_sq


def psd_model(spec: SignalSpec) -> SpectrumModel:
    """Evaluable |G(f)|^2 shape for a cataloged signal.

    * OFDM: sum over the N subcarriers of a common trapezoidal sub-pulse
      spectrum shifted by integer multiples of the subcarrier spacing,
      i*F for i = -N/2+1 .. N/2.
    * QPSK / SD-QPSK: squared raised-cosine shape with ``spec.rolloff``
      and ``spec.symbol_period_s``.
    * FlatSpectrum: constant over [-B/2, +B/2], zero outside.
    """
    if spec.modulation == "OFDM":
        ofdm = spec.ofdm
        if ofdm is None:
            raise ValueError("OFDM spec without an ofdm block")
        n = ofdm.subcarrier_count
        f_sp = ofdm.subcarrier_spacing_hz
        shifts = (np.arange(-n // 2 + 1, n // 2 + 1, dtype=float)) * f_sp
        subpulse_sq = _ofdm_subpulse_sq(ofdm)

        def evaluator(f: np.ndarray) -> np.ndarray:
            f = np.atleast_1d(np.asarray(f, dtype=float))
            out = np.zeros_like(f)
            # Chunk over evaluation points to bound the broadcast size.
            step = max(1, int(2e6 // max(n, 1)))
            for lo in range(0, f.size, step):
                chunk = f[lo:lo + step]
                out[lo:lo + step] = subpulse_sq(
                    chunk[:, None] - shifts[None, :]).sum(axis=1)
            return out

        half = (n / 2 + 1) * f_sp
        return SpectrumModel(
            evaluator=evaluator,
            support_hint=(-half, half),
            subpulse=subpulse_sq,
            shifts_hz=shifts,
            subpulse_timescales_s=(ofdm.symbol_period_s, ofdm.chip_period_s),
        )

    if spec.modulation in ("QPSK", "SD-QPSK"):
        alpha = float(spec.rolloff)  # presence enforced by SignalSpec
        t_sym = spec.symbol_period_s
        edge = (1.0 + alpha) / (2.0 * t_sym)
        flat_edge = (1.0 - alpha) / (2.0 * t_sym)

        def evaluator(f: np.ndarray) -> np.ndarray:
            f = np.asarray(f, dtype=float)
            af = np.abs(f)
            h = np.zeros_like(af)
            h = np.where(af <= flat_edge, 1.0, h)
            if alpha > 0.0:
                in_roll = (af > flat_edge) & (af <= edge)
                arg = np.pi * t_sym / alpha * (af - flat_edge)
                h = np.where(in_roll, 0.5 * (1.0 + np.cos(arg)), h)
            return h * h

        return SpectrumModel(evaluator=evaluator, support_hint=(-edge, edge))

    if spec.modulation == "FlatSpectrum":
        half_bw = spec.channel_bandwidth_hz / 2.0

        def evaluator(f: np.ndarray) -> np.ndarray:
            f = np.asarray(f, dtype=float)
            return np.where(np.abs(f) <= half_bw, 1.0, 0.0)

        return SpectrumModel(evaluator=evaluator,
                             support_hint=(-half_bw, half_bw))

    raise ValueError(f"no spectral model for modulation {spec.modulation!r}")


#: Column order of the catalog CSV dump.
CATALOG_CSV_HEADER = ("system,carrier_hz,bandwidth_hz,channels,"
                      "symbol_period_s,rolloff,altitude_m,beacon_s,max_duty")


def catalog_rows() -> Sequence[SignalSpec]:
    """All cataloged systems in fixed order."""
    return tuple(_CATALOG[s] for s in SYSTEM_IDS)
