"""Two-line element parsing: fields, checksums, diagnostics."""

from pathlib import Path

import pytest

from soopnav.tle import OrbitalElements, parse_tle, tle_checksum

from conftest import TLE_88888


class TestParse88888:
    def test_fields(self, tle_88888_text):
        result = parse_tle(tle_88888_text)
        assert len(result) == 1
        el = result[0]
        assert el.satellite_id == 88888
        assert el.inclination_deg == 72.8435
        assert el.raan_deg == 115.9689
        assert el.eccentricity == pytest.approx(0.0086731, abs=1e-10)
        assert el.arg_perigee_deg == 52.6988
        assert el.mean_anomaly_deg == 110.5714
        assert el.mean_motion_revday == 16.05824518
        assert el.bstar == pytest.approx(0.66816e-4, rel=1e-9)
        assert el.epoch.year == 1980
        # day 275.98708465 of 1980
        assert el.epoch.timetuple().tm_yday == 275
        assert el.line_checksums_ok

    def test_checksum_values(self):
        assert tle_checksum(TLE_88888[0]) == 7
        assert tle_checksum(TLE_88888[1]) == 8

    def test_corrupted_checksum_rejected(self, tle_88888_text):
        bad = tle_88888_text.replace("  1058", "  1059")
        with pytest.raises(ValueError, match="checksum"):
            parse_tle(bad)

    def test_short_line_rejected(self):
        with pytest.raises(ValueError, match="too short"):
            parse_tle(TLE_88888[0][:50] + "\n" + TLE_88888[1])

    def test_named_three_line_set(self, tle_88888_text):
        result = parse_tle("TEST OBJECT\n" + tle_88888_text)
        assert len(result) == 1
        assert not result.diagnostics


class TestDiagnostics:
    def test_dangling_first_line(self, tle_88888_text):
        result = parse_tle(tle_88888_text + TLE_88888[0] + "\n")
        assert len(result) == 1
        assert any("dangling" in d for d in result.diagnostics)

    def test_orphan_second_line(self, tle_88888_text):
        result = parse_tle(TLE_88888[1] + "\n" + tle_88888_text)
        assert len(result) == 1
        assert any("second line without" in d for d in result.diagnostics)

    def test_all_invalid_raises(self):
        with pytest.raises(ValueError, match="no valid TLE records"):
            parse_tle(TLE_88888[0] + "\n" + TLE_88888[0] + "\n")

    def test_mismatched_satnums(self, tle_88888_text):
        bad = TLE_88888[1].replace("2 88888", "2 88889")
        # fix the checksum after the digit swap: 8 -> 9 adds 1 mod 10
        bad = bad[:68] + str((int(bad[68]) + 1) % 10)
        result = parse_tle(TLE_88888[0] + "\n" + bad + "\n" + tle_88888_text)
        assert len(result) == 1
        assert any("differs" in d for d in result.diagnostics)


class TestBundledConstellations:
    @pytest.mark.parametrize("stem,count", [
        ("starlink", 5416), ("oneweb", 636), ("iridium", 66),
        ("orbcomm", 32), ("galileo", 27),
    ])
    def test_bundled_files_parse_clean(self, data_dir, stem, count):
        text = (data_dir / "tle" / f"{stem}.tle").read_text()
        result = parse_tle(text)
        assert len(result) == count
        assert not result.diagnostics
        ids = [el.satellite_id for el in result]
        assert len(set(ids)) == count
        for el in result:
            assert el.epoch.year == 2024
            assert 0.0 <= el.raan_deg < 360.0
            assert 0.0 <= el.mean_anomaly_deg < 360.0
            assert el.eccentricity == pytest.approx(1e-4, abs=1e-9)

    def test_iridium_is_a_star_pattern(self, data_dir):
        result = parse_tle((data_dir / "tle" / "iridium.tle").read_text())
        raans = sorted({el.raan_deg for el in result})
        assert len(raans) == 6
        assert max(raans) - min(raans) == pytest.approx(150.0)  # 5/6 of 180


class TestElementsValidation:
    def test_sequence_interface(self, tle_88888_text):
        result = parse_tle(tle_88888_text)
        assert isinstance(result[0], OrbitalElements)
        assert list(result)[0] is result[0]
