"""Command line interface: subcommands, exit codes, manifests."""

import csv
import json
import math

import pytest

from soopnav.cli import main
from oracles.linkbudget_exact import BUDGETS, cn0_max_exact, fspl_db_exact


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def run(argv):
    return main([str(a) for a in argv])


class TestCatalogCommand:
    def test_writes_table_and_manifest(self, tmp_path):
        assert run(["catalog", "--out-dir", tmp_path]) == 0
        rows = read_csv(tmp_path / "catalog.csv")
        systems = [r["system"] for r in rows]
        assert systems == ["Starlink", "OneWeb", "Iridium", "Orbcomm"]
        starlink = rows[0]
        assert float(starlink["carrier_hz"]) == 11.57e9
        assert float(starlink["bandwidth_hz"]) == 240.0e6
        body = json.loads((tmp_path / "manifest.json").read_text())
        assert body["subcommand"] == "catalog"
        assert str(tmp_path / "catalog.csv") in body["outputs"]


class TestLinkbudgetCommand:
    def test_matches_oracle(self, tmp_path):
        assert run(["linkbudget", "--out-dir", tmp_path]) == 0
        rows = {r["system"]: r for r in read_csv(tmp_path / "linkbudget.csv")}
        for system in ("Starlink", "OneWeb", "Iridium", "Orbcomm"):
            row = rows[system]
            _, dist, carrier = BUDGETS[system]
            assert float(row["fspl_db"]) == pytest.approx(
                fspl_db_exact(dist, carrier), abs=1e-9)
            assert float(row["cn0_max_dbhz"]) == pytest.approx(
                cn0_max_exact(system), abs=1e-9)
        assert float(rows["Starlink"]["cn0_literature_dbhz"]) == 42.6
        assert rows["Iridium"]["cn0_literature_dbhz"] == ""


class TestMcrlbCommand:
    def test_delay_sweep(self, tmp_path):
        assert run(["mcrlb", "--out-dir", tmp_path, "--observable", "delay",
                    "--system", "Starlink", "--cn0", "40:60:10",
                    "--t0", "1.33e-3"]) == 0
        rows = read_csv(tmp_path / "mcrlb_sweep.csv")
        assert [float(r["cn0_dbhz"]) for r in rows] == [40.0, 50.0, 60.0]
        for r in rows:
            assert r["observable"] == "delay"
            assert r["system"] == "Starlink"
            var = float(r["variance"])
            assert float(r["std_native"]) == pytest.approx(math.sqrt(var),
                                                           rel=1e-12)
            # converted column is the range std in meters
            assert float(r["std_converted"]) == pytest.approx(
                math.sqrt(var) * 3.0e8, rel=1e-12)

    def test_all_observables_all_systems(self, tmp_path):
        for obs in ("delay", "phase", "freq", "aoa"):
            out = tmp_path / obs
            assert run(["mcrlb", "--out-dir", out, "--observable", obs,
                        "--cn0", "50:50:1", "--t0", "1e-2"]) == 0
            rows = read_csv(out / "mcrlb_sweep.csv")
            assert {r["system"] for r in rows} == {
                "Starlink", "OneWeb", "Iridium", "Orbcomm"}

    def test_unknown_observable_is_config_error(self, tmp_path, capsys):
        assert run(["mcrlb", "--out-dir", tmp_path,
                    "--observable", "doppler"]) == 2
        assert "config error" in capsys.readouterr().err

    def test_unknown_system_is_config_error(self, tmp_path):
        assert run(["mcrlb", "--out-dir", tmp_path, "--observable", "delay",
                    "--system", "GPS"]) == 2


class TestScenarioCommand:
    def _write_cfg(self, tmp_path, tle_path, extra=""):
        sites = tmp_path / "sites.csv"
        sites.write_text("name,lat_deg,lon_deg,alt_m\n"
                         "Padova,45.409,11.894,0\n")
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "[scenario]\n"
            f"tles = {tle_path}\n"
            f"sites = {sites}\n"
            "start = 2024-04-19T00:00:00Z\n"
            "end = 2024-04-19T02:00:00Z\n"
            "step_s = 300\n"
            "masking_angle_deg = 10\n"
            "beamwidth_deg = 90\n"
            + extra)
        return cfg

    def test_smoke_and_outputs(self, tmp_path, tiny_tle_file):
        cfg = self._write_cfg(tmp_path, tiny_tle_file)
        out = tmp_path / "out"
        assert run(["scenario", "--config", cfg, "--out-dir", out]) == 0
        for name in ("samples.csv", "ccdf.csv", "gdop_cdf.csv",
                     "summary.csv", "manifest.json"):
            assert (out / name).exists(), name
        samples = read_csv(out / "samples.csv")
        assert len(samples) == 25  # inclusive 2 h grid at 300 s
        assert {r["constellation"] for r in samples} == {"tiny"}
        body = json.loads((out / "manifest.json").read_text())
        assert str(tiny_tle_file) in body["input_sha256"]

    def test_byte_identical_rerun(self, tmp_path, tiny_tle_file):
        cfg = self._write_cfg(tmp_path, tiny_tle_file)
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        assert run(["scenario", "--config", cfg, "--out-dir", out1,
                    "--threads", "1"]) == 0
        assert run(["scenario", "--config", cfg, "--out-dir", out2,
                    "--threads", "3"]) == 0
        for name in ("samples.csv", "ccdf.csv", "gdop_cdf.csv",
                     "summary.csv"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_multi_phi_layout(self, tmp_path, tiny_tle_file):
        cfg = self._write_cfg(tmp_path, tiny_tle_file)
        text = cfg.read_text().replace("beamwidth_deg = 90",
                                       "beamwidth_deg = 60, 90")
        cfg.write_text(text)
        out = tmp_path / "multi"
        assert run(["scenario", "--config", cfg, "--out-dir", out]) == 0
        assert (out / "availability.csv").exists()
        assert (out / "phi60" / "samples.csv").exists()
        assert (out / "phi90" / "samples.csv").exists()
        rows = read_csv(out / "availability.csv")
        assert {r["phi_deg"] for r in rows} == {
            "6.0000000000000000e+01", "9.0000000000000000e+01"}

    def test_missing_config_file(self, tmp_path):
        assert run(["scenario", "--config", tmp_path / "nope.cfg",
                    "--out-dir", tmp_path]) == 2

    def test_missing_tle_names_field(self, tmp_path, capsys):
        cfg = self._write_cfg(tmp_path, tmp_path / "ghost.tle")
        assert run(["scenario", "--config", cfg,
                    "--out-dir", tmp_path / "o"]) == 2
        err = capsys.readouterr().err
        assert "tles" in err

    def test_bad_field_value_named(self, tmp_path, tiny_tle_file, capsys):
        cfg = self._write_cfg(tmp_path, tiny_tle_file,
                              extra="").read_text().replace(
            "step_s = 300", "step_s = sixty")
        path = tmp_path / "bad.cfg"
        path.write_text(cfg)
        assert run(["scenario", "--config", path,
                    "--out-dir", tmp_path / "o"]) == 2
        assert "step_s" in capsys.readouterr().err

    def test_missing_required_field(self, tmp_path, tiny_tle_file, capsys):
        cfg = self._write_cfg(tmp_path, tiny_tle_file).read_text().replace(
            "start = 2024-04-19T00:00:00Z\n", "")
        path = tmp_path / "nostart.cfg"
        path.write_text(cfg)
        assert run(["scenario", "--config", path,
                    "--out-dir", tmp_path / "o"]) == 2
        assert "start" in capsys.readouterr().err


class TestAcqsimCommand:
    def _cfg(self, tmp_path, keep="false"):
        cfg = tmp_path / "acq.cfg"
        cfg.write_text(
            "[acqsim]\n"
            "cn0_grid_dbhz = 55, 85\n"
            "trials_per_point = 6\n"
            "seed = 0\n"
            f"keep_trials = {keep}\n")
        return cfg

    def test_smoke(self, tmp_path):
        out = tmp_path / "out"
        assert run(["acqsim", "--config", self._cfg(tmp_path),
                    "--out-dir", out]) == 0
        rows = read_csv(out / "acq_results.csv")
        assert [float(r["cn0_dbhz"]) for r in rows] == [55.0, 85.0]
        assert all(int(r["trials"]) == 6 for r in rows)
        assert not (out / "acq_trials.csv").exists()

    def test_keep_trials(self, tmp_path):
        out = tmp_path / "keep"
        assert run(["acqsim", "--config", self._cfg(tmp_path, keep="true"),
                    "--out-dir", out]) == 0
        trials = read_csv(out / "acq_trials.csv")
        assert len(trials) == 12

    def test_seed_flag_overrides(self, tmp_path):
        cfg = self._cfg(tmp_path)
        out1, out2, out3 = (tmp_path / n for n in ("s0", "s1", "s0b"))
        assert run(["acqsim", "--config", cfg, "--out-dir", out1]) == 0
        assert run(["acqsim", "--config", cfg, "--out-dir", out2,
                    "--seed", "1"]) == 0
        assert run(["acqsim", "--config", cfg, "--out-dir", out3,
                    "--seed", "0"]) == 0
        a = (out1 / "acq_results.csv").read_bytes()
        b = (out2 / "acq_results.csv").read_bytes()
        c = (out3 / "acq_results.csv").read_bytes()
        assert a != b
        assert a == c


class TestTopLevel:
    def test_version(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run(["--version"])
        assert exc.value.code == 0
        assert "0.1.0" in capsys.readouterr().out

    def test_no_subcommand_exits_nonzero(self):
        with pytest.raises(SystemExit):
            run([])
