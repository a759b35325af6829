"""Batch command-line front door.

Subcommands wire the analysis modules to CSV artifacts:

- ``soop catalog``    transmitter catalog table
- ``soop linkbudget`` path loss and max C/N0 table
- ``soop mcrlb``      bound sweeps over C/N0 / observation time
- ``soop scenario``   visibility + GDOP Monte Carlo campaign
- ``soop acqsim``     OFDM acquisition Monte Carlo

Every run writes a ``manifest.json`` recording inputs (SHA-256 of the
exact bytes), resolved configuration, outputs, seed, and duration.
Exit codes: 0 success, 1 runtime failure, 2 configuration/usage error.
"""

from __future__ import annotations

import argparse
import configparser
import logging
import math
import os
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

from .acquisition import AcqConfig, run_acq_montecarlo
from .bounds import (
    ArrayGeometry,
    CnDensity,
    mcrlb_aoa,
    mcrlb_delay,
    mcrlb_freq,
    mcrlb_phase,
    nmsb_numeric,
)
from .catalog import (
    CATALOG_CSV_HEADER,
    SYSTEM_IDS,
    catalog_get,
    catalog_rows,
    psd_model,
)
from .csvio import write_csv
from .geometry import VisibilityRule, load_sites
from .linkbudget import LINKBUDGET_CSV_HEADER, linkbudget_rows
from .manifest import RunManifest
from .scenario import (
    ScenarioConfig,
    ccdf,
    cdf,
    constellation_name,
    group_samples,
    run_scenario,
    summarize,
)

logger = logging.getLogger(__name__)

_REQUIRED = object()

OBSERVABLES = ("delay", "phase", "freq", "aoa")

MCRLB_CSV_HEADER = (
    "observable,system,cn0_dbhz,obs_time_s,variance,std_native,std_converted"
)
SAMPLES_CSV_HEADER = "epoch_utc,site,constellation,visible_count,gdop"
CCDF_CSV_HEADER = "site,constellation,N,p_exceed"
GDOP_CDF_CSV_HEADER = "site,constellation,gdop,p_le"
SUMMARY_CSV_HEADER = "site,constellation,mean_gdop,std_gdop,pct_epochs_with_fix"
AVAILABILITY_CSV_HEADER = (
    "site,constellation,phi_deg,theta_deg,pct_epochs_with_fix"
)
ACQ_CSV_HEADER = "cn0_dbhz,trials,bias_s,std_s,std_m,mcrlb_std_s,mcrlb_std_m"
ACQ_TRIALS_CSV_HEADER = "cn0_dbhz,true_delay_s,est_delay_s,peak_metric,seed"


class ConfigError(ValueError):
    """Configuration or usage problem; maps to exit code 2."""


def _parse_epoch(text: str) -> datetime:
    try:
        dt = datetime.fromisoformat(text.replace("Z", "+00:00"))
    except ValueError as exc:
        raise ValueError(f"not an ISO-8601 timestamp: {exc}") from exc
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt


def _parse_range(text: str) -> list[float]:
    """'lo:hi:step' inclusive grid, or a comma list of values."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError("range must be lo:hi:step")
        lo, hi, step = (float(p) for p in parts)
        if step <= 0 or hi < lo:
            raise ValueError("range needs hi >= lo and step > 0")
        out = []
        k = 0
        while True:
            v = lo + k * step
            if v > hi + 1e-9:
                break
            out.append(v)
            k += 1
        return out
    return [float(p) for p in text.split(",") if p.strip()]


def _load_ini(path: Path, section: str) -> configparser.ConfigParser:
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if not parser.has_section(section):
        raise ConfigError(f"{path}: missing required section [{section}]")
    return parser


def _field(parser, path: Path, section: str, name: str, cast, default=_REQUIRED):
    if not parser.has_option(section, name):
        if default is _REQUIRED:
            raise ConfigError(
                f"{path}: missing required field '{name}' in [{section}]"
            )
        return default
    raw = parser.get(section, name)
    try:
        return cast(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(
            f"{path}: field '{name}' in [{section}] = {raw!r}: {exc}"
        ) from exc


def _csv_list(text: str) -> list[str]:
    items = [p.strip() for p in text.split(",")]
    return [p for p in items if p]


def _new_manifest(subcommand: str, config: dict, seed: int) -> RunManifest:
    return RunManifest(subcommand=subcommand, config=config, master_seed=seed)


def cmd_catalog(out_dir: Path, seed: int) -> int:
    t0 = time.perf_counter()
    manifest = _new_manifest("catalog", {}, seed)
    rows = [
        (
            s.system_id,
            s.carrier_frequency_hz,
            s.channel_bandwidth_hz,
            s.channel_count,
            s.symbol_period_s,
            s.rolloff,
            s.altitude_m,
            s.beacon_length_s,
            s.max_duty_cycle,
        )
        for s in catalog_rows()
    ]
    out = write_csv(out_dir / "catalog.csv", CATALOG_CSV_HEADER, rows)
    manifest.add_output(out)
    manifest.duration_s = time.perf_counter() - t0
    manifest.write(out_dir)
    print(f"wrote {out}")
    return 0


def cmd_linkbudget(out_dir: Path, seed: int) -> int:
    t0 = time.perf_counter()
    manifest = _new_manifest("linkbudget", {}, seed)
    out = write_csv(
        out_dir / "linkbudget.csv", LINKBUDGET_CSV_HEADER, linkbudget_rows()
    )
    manifest.add_output(out)
    manifest.duration_s = time.perf_counter() - t0
    manifest.write(out_dir)
    print(f"wrote {out}")
    return 0


def _xi_for_system(system_id: str) -> float:
    spec = catalog_get(system_id)
    return nmsb_numeric(psd_model(spec), spec.symbol_period_s)


def cmd_mcrlb(
    out_dir: Path,
    seed: int,
    observable: str,
    systems: list[str],
    cn0_grid: list[float],
    t0_grid: list[float],
    elements: int,
    length_m: float,
    beta_deg: float,
) -> int:
    if observable not in OBSERVABLES:
        raise ConfigError(
            f"invalid observable {observable!r}; choose from {OBSERVABLES}"
        )
    start = time.perf_counter()
    config = {
        "observable": observable,
        "systems": systems,
        "cn0_dbhz": cn0_grid,
        "obs_time_s": t0_grid,
        "elements": elements,
        "length_m": length_m,
        "beta_deg": beta_deg,
    }
    manifest = _new_manifest("mcrlb", config, seed)
    xi_cache = {s: _xi_for_system(s) for s in systems} if observable == "delay" else {}
    rows = []
    for system in systems:
        spec = catalog_get(system)
        for t0 in t0_grid:
            for cn0_db in cn0_grid:
                cn0 = CnDensity(cn0_db)
                if observable == "delay":
                    res = mcrlb_delay(
                        xi_cache[system], spec.symbol_period_s, t0, cn0
                    )
                    converted = res.std_range_m
                elif observable == "phase":
                    res = mcrlb_phase(t0, cn0)
                    converted = res.std_native
                elif observable == "freq":
                    res = mcrlb_freq(t0, cn0, carrier_hz=spec.carrier_frequency_hz)
                    converted = res.std_rangerate_mps
                else:
                    array = ArrayGeometry.from_length(elements, length_m)
                    res = mcrlb_aoa(
                        array,
                        spec.carrier_frequency_hz,
                        math.radians(beta_deg),
                        t0,
                        cn0,
                    )
                    converted = math.degrees(res.std_native)
                rows.append(
                    (
                        observable,
                        system,
                        cn0_db,
                        t0,
                        res.variance,
                        res.std_native,
                        converted,
                    )
                )
    out = write_csv(out_dir / "mcrlb_sweep.csv", MCRLB_CSV_HEADER, rows)
    manifest.add_output(out)
    manifest.duration_s = time.perf_counter() - start
    manifest.write(out_dir)
    print(f"wrote {out} ({len(rows)} rows)")
    return 0


def _resolve_path(base: Path, text: str) -> Path:
    p = Path(text)
    return p if p.is_absolute() else (base / p)


def _epoch_str(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _write_campaign_csvs(
    out_dir: Path, config: ScenarioConfig, samples, manifest: RunManifest
) -> None:
    """Write the per-campaign samples/ccdf/gdop-cdf/summary CSV set."""
    rows = [
        (
            _epoch_str(s.epoch),
            s.site,
            s.constellation,
            s.visible_count,
            s.gdop,
        )
        for s in samples
    ]
    manifest.add_output(
        write_csv(out_dir / "samples.csv", SAMPLES_CSV_HEADER, rows)
    )

    groups = group_samples(samples)
    site_order = [s.name for s in config.sites]
    con_order = [constellation_name(p) for p in config.constellation_tle_paths]
    keys = [
        (site, con)
        for site in site_order
        for con in con_order
        if (site, con) in groups
    ]

    ccdf_rows = []
    cdf_rows = []
    summary_rows = []
    for site, con in keys:
        group = groups[(site, con)]
        counts = [s.visible_count for s in group]
        for n, p in ccdf(counts):
            ccdf_rows.append((site, con, n, p))
        gdops = [s.gdop for s in group if s.gdop is not None]
        if gdops:
            for x, p in cdf(gdops):
                cdf_rows.append((site, con, x, p))
            mean, std = summarize(gdops)
        else:
            mean, std = None, None
        pct_fix = 100.0 * sum(c >= 4 for c in counts) / len(counts)
        summary_rows.append((site, con, mean, std, pct_fix))
    manifest.add_output(
        write_csv(out_dir / "ccdf.csv", CCDF_CSV_HEADER, ccdf_rows)
    )
    manifest.add_output(
        write_csv(out_dir / "gdop_cdf.csv", GDOP_CDF_CSV_HEADER, cdf_rows)
    )
    manifest.add_output(
        write_csv(out_dir / "summary.csv", SUMMARY_CSV_HEADER, summary_rows)
    )


def cmd_scenario(
    config_path: Path, out_dir: Path, seed: int | None, threads: int | None
) -> int:
    start = time.perf_counter()
    parser = _load_ini(config_path, "scenario")
    base = config_path.parent
    tle_paths = _field(parser, config_path, "scenario", "tles", _csv_list)
    sites_path = _field(parser, config_path, "scenario", "sites", str)
    start_ep = _field(parser, config_path, "scenario", "start", _parse_epoch)
    end_ep = _field(parser, config_path, "scenario", "end", _parse_epoch)
    step_s = _field(parser, config_path, "scenario", "step_s", float, 60.0)
    theta = _field(
        parser, config_path, "scenario", "masking_angle_deg", float
    )
    phis = _field(
        parser, config_path, "scenario", "beamwidth_deg",
        lambda s: [float(x) for x in _csv_list(s)],
    )
    cfg_seed = _field(parser, config_path, "scenario", "seed", int, 0)
    if seed is None:
        seed = cfg_seed

    resolved_tles = []
    for t in tle_paths:
        p = _resolve_path(base, t)
        if not p.is_file():
            raise ConfigError(
                f"{config_path}: field 'tles' in [scenario]: "
                f"TLE file not found: {p}"
            )
        resolved_tles.append(p)
    sites_file = _resolve_path(base, sites_path)
    if not sites_file.is_file():
        raise ConfigError(
            f"{config_path}: field 'sites' in [scenario]: "
            f"site CSV not found: {sites_file}"
        )
    try:
        sites = load_sites(sites_file)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    config_snapshot = {
        "tles": [str(p) for p in resolved_tles],
        "sites": str(sites_file),
        "start": _epoch_str(start_ep),
        "end": _epoch_str(end_ep),
        "step_s": step_s,
        "masking_angle_deg": theta,
        "beamwidth_deg": phis,
        "seed": seed,
        "threads": threads,
    }
    manifest = _new_manifest("scenario", config_snapshot, seed)
    manifest.add_input(config_path)
    for p in resolved_tles:
        manifest.add_input(p)
    manifest.add_input(sites_file)

    try:
        availability_rows = []
        for phi in phis:
            rule = VisibilityRule(masking_angle_deg=theta, beamwidth_deg=phi)
            sc = ScenarioConfig(
                constellation_tle_paths=tuple(str(p) for p in resolved_tles),
                sites=tuple(sites),
                start=start_ep,
                end=end_ep,
                step_s=step_s,
                rule=rule,
                rng_seed=seed,
            )
            samples = run_scenario(sc, threads=threads)
            sub_dir = out_dir if len(phis) == 1 else out_dir / f"phi{phi:g}"
            sub_dir.mkdir(parents=True, exist_ok=True)
            _write_campaign_csvs(sub_dir, sc, samples, manifest)
            groups = group_samples(samples)
            site_order = [s.name for s in sc.sites]
            con_order = [
                constellation_name(t) for t in sc.constellation_tle_paths
            ]
            for site in site_order:
                for con in con_order:
                    group = groups.get((site, con))
                    if not group:
                        continue
                    pct = 100.0 * sum(
                        s.visible_count >= 4 for s in group
                    ) / len(group)
                    availability_rows.append((site, con, phi, theta, pct))
        if len(phis) > 1:
            manifest.add_output(
                write_csv(
                    out_dir / "availability.csv",
                    AVAILABILITY_CSV_HEADER,
                    availability_rows,
                )
            )
    except ValueError as exc:
        raise ConfigError(f"{config_path}: {exc}") from exc
    manifest.duration_s = time.perf_counter() - start
    manifest.write(out_dir)
    print(f"scenario complete: {len(manifest.outputs)} files in {out_dir}")
    return 0


def cmd_acqsim(config_path: Path, out_dir: Path, seed: int | None) -> int:
    start = time.perf_counter()
    parser = _load_ini(config_path, "acqsim")
    p = config_path
    cn0_grid = _field(
        parser, p, "acqsim", "cn0_grid_dbhz", _parse_range,
        [float(x) for x in range(40, 91)],
    )
    trials = _field(parser, p, "acqsim", "trials_per_point", int, 300)
    window = _field(parser, p, "acqsim", "search_window_s", float, 20.83e-6)
    window_mode = _field(parser, p, "acqsim", "window_mode", str, "centered")
    refinement = _field(parser, p, "acqsim", "refinement", str, "parabolic")
    fs = _field(parser, p, "acqsim", "sample_rate_hz", float, 240.0e6)
    sync_count = _field(parser, p, "acqsim", "sync_symbol_count", int, 2)
    cfg_seed = _field(parser, p, "acqsim", "seed", int, 0)
    keep_trials = _field(
        parser, p, "acqsim", "keep_trials",
        lambda s: s.strip().lower() in ("1", "true", "yes"), False,
    )
    if seed is None:
        seed = cfg_seed
    try:
        config = AcqConfig(
            sync_symbol_count=sync_count,
            sample_rate_hz=fs,
            cn0_grid_dbhz=tuple(cn0_grid),
            trials_per_point=trials,
            search_window_s=window,
            window_mode=window_mode,
            refinement=refinement,
            rng_seed=seed,
        )
    except ValueError as exc:
        raise ConfigError(f"{config_path}: {exc}") from exc
    snapshot = {
        "cn0_grid_dbhz": list(config.cn0_grid_dbhz),
        "trials_per_point": config.trials_per_point,
        "search_window_s": config.search_window_s,
        "window_mode": config.window_mode,
        "refinement": config.refinement,
        "sample_rate_hz": config.sample_rate_hz,
        "sync_symbol_count": config.sync_symbol_count,
        "seed": seed,
        "keep_trials": keep_trials,
    }
    manifest = _new_manifest("acqsim", snapshot, seed)
    manifest.add_input(config_path)
    stats, trials_list = run_acq_montecarlo(config, keep_trials=keep_trials)
    rows = [
        (
            s.cn0_dbhz,
            s.trials,
            s.bias_s,
            s.std_s,
            s.std_m,
            s.mcrlb_std_s,
            s.mcrlb_std_m,
        )
        for s in stats
    ]
    manifest.add_output(
        write_csv(out_dir / "acq_results.csv", ACQ_CSV_HEADER, rows)
    )
    if keep_trials:
        trial_rows = [
            (t.cn0_dbhz, t.true_delay_s, t.est_delay_s, t.peak_metric, t.seed)
            for t in trials_list
        ]
        manifest.add_output(
            write_csv(
                out_dir / "acq_trials.csv", ACQ_TRIALS_CSV_HEADER, trial_rows
            )
        )
    manifest.duration_s = time.perf_counter() - start
    manifest.write(out_dir)
    print(f"acqsim complete: {len(stats)} grid points in {out_dir}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="soop",
        description="Signals-of-opportunity LEO navigation analysis toolkit",
    )
    parser.add_argument("--version", action="version", version="%(prog)s 0.1.0")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(sp):
        sp.add_argument(
            "--out-dir", type=Path, default=Path("out"),
            help="output directory (default: ./out)",
        )
        sp.add_argument("--seed", type=int, default=None, help="master seed")
        sp.add_argument(
            "--threads", type=int, default=None,
            help="worker pool size (default: machine parallelism)",
        )
        sp.add_argument("--config", type=Path, default=None, help="config file")

    sp = sub.add_parser("catalog", help="dump the transmitter catalog")
    common(sp)
    sp = sub.add_parser("linkbudget", help="dump path loss and max C/N0")
    common(sp)
    sp = sub.add_parser("mcrlb", help="sweep Cramér-Rao bounds")
    common(sp)
    sp.add_argument(
        "--observable", required=True,
        help="one of delay, phase, freq, aoa",
    )
    sp.add_argument(
        "--system", default="all",
        help="system id or 'all' (default all)",
    )
    sp.add_argument(
        "--cn0", default="20:80:1", help="C/N0 grid lo:hi:step dB-Hz"
    )
    sp.add_argument(
        "--t0", default="1.33e-3", help="observation times, comma list (s)"
    )
    sp.add_argument("--elements", type=int, default=2, help="array elements")
    sp.add_argument(
        "--length", type=float, default=0.5, help="array length (m)"
    )
    sp.add_argument(
        "--beta", type=float, default=50.0, help="arrival angle (deg)"
    )
    sp = sub.add_parser("scenario", help="run a visibility/GDOP campaign")
    common(sp)
    sp = sub.add_parser("acqsim", help="run the acquisition Monte Carlo")
    common(sp)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(
        level=os.environ.get("SOOP_LOGLEVEL", "WARNING"),
        format="%(levelname)s %(name)s: %(message)s",
    )
    parser = _build_parser()
    args = parser.parse_args(argv)
    out_dir = args.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    threads = args.threads if args.threads else (os.cpu_count() or 1)
    try:
        if args.subcommand == "catalog":
            return cmd_catalog(out_dir, args.seed or 0)
        if args.subcommand == "linkbudget":
            return cmd_linkbudget(out_dir, args.seed or 0)
        if args.subcommand == "mcrlb":
            systems = (
                list(SYSTEM_IDS)
                if args.system == "all"
                else [args.system]
            )
            for system in systems:
                if system not in SYSTEM_IDS:
                    raise ConfigError(
                        f"unknown system {system!r}; expected one of "
                        f"{tuple(SYSTEM_IDS)} or 'all'"
                    )
            try:
                cn0_grid = _parse_range(args.cn0)
                t0_grid = [float(x) for x in args.t0.split(",")]
            except ValueError as exc:
                raise ConfigError(f"bad sweep range: {exc}") from exc
            return cmd_mcrlb(
                out_dir,
                args.seed or 0,
                args.observable,
                systems,
                cn0_grid,
                t0_grid,
                args.elements,
                args.length,
                args.beta,
            )
        if args.subcommand == "scenario":
            if args.config is None:
                raise ConfigError("scenario requires --config <file>")
            return cmd_scenario(args.config, out_dir, args.seed, threads)
        if args.subcommand == "acqsim":
            if args.config is None:
                raise ConfigError("acqsim requires --config <file>")
            return cmd_acqsim(args.config, out_dir, args.seed)
        raise ConfigError(f"unknown subcommand {args.subcommand!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except KeyError as exc:
        print(f"config error: unknown system {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        logger.exception("run failed")
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
