"""Ground sites, look angles, off-nadir angles, visibility rules."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from soopnav.geometry import (
    GroundSite,
    VisibilityRule,
    elevation_offnadir_many,
    is_visible,
    load_sites,
    look_angles,
    off_nadir_angle,
)

WGS84_A = 6378137.0
WGS84_B = 6356752.314245179


class TestGroundSite:
    def test_equator_prime_meridian(self):
        site = GroundSite("eq", 0.0, 0.0, 0.0)
        np.testing.assert_allclose(site.ecef_m(), [WGS84_A, 0.0, 0.0],
                                   atol=1e-6)

    def test_north_pole(self):
        site = GroundSite("np", 90.0, 0.0, 0.0)
        ecef = site.ecef_m()
        assert abs(ecef[0]) < 1e-6
        assert abs(ecef[1]) < 1e-6
        assert ecef[2] == pytest.approx(WGS84_B, abs=1e-5)

    def test_altitude_adds_along_normal(self):
        lo = GroundSite("a", 45.0, 7.0, 0.0)
        hi = GroundSite("b", 45.0, 7.0, 1000.0)
        d = np.asarray(hi.ecef_m()) - np.asarray(lo.ecef_m())
        assert np.linalg.norm(d) == pytest.approx(1000.0, rel=1e-9)

    def test_enu_basis_orthonormal(self):
        site = GroundSite("x", 45.409, 11.894, 0.0)
        enu = site.enu_basis()
        np.testing.assert_allclose(enu @ enu.T, np.eye(3), atol=1e-12)
        # up is the outward ellipsoid normal: +z component at north lat
        assert enu[2] @ np.array([0.0, 0.0, 1.0]) > 0.0

    def test_longitude_normalized(self):
        site = GroundSite("w", 10.0, 270.0, 0.0)
        assert site.longitude_deg == pytest.approx(-90.0)

    def test_invalid_latitude(self):
        with pytest.raises(ValueError):
            GroundSite("bad", 91.0, 0.0, 0.0)


class TestLookAngles:
    def test_zenith_satellite(self):
        site = GroundSite("eq", 0.0, 0.0, 0.0)
        sat = np.array([WGS84_A + 550e3, 0.0, 0.0])
        el, az, slant = look_angles(site, sat)
        assert el == pytest.approx(90.0, abs=1e-9)
        assert slant == pytest.approx(550e3, rel=1e-12)

    def test_cardinal_azimuths(self):
        site = GroundSite("eq", 0.0, 0.0, 0.0)
        r = site.ecef_m()
        north = r + np.array([0.0, 0.0, 1e6])
        east = r + np.array([0.0, 1e6, 0.0])
        assert look_angles(site, north)[1] == pytest.approx(0.0, abs=1e-9)
        assert look_angles(site, east)[1] == pytest.approx(90.0, abs=1e-9)

    def test_coincident_raises(self):
        site = GroundSite("eq", 0.0, 0.0, 0.0)
        with pytest.raises(ValueError):
            look_angles(site, site.ecef_m())


class TestOffNadir:
    def test_site_at_nadir(self):
        site = GroundSite("eq", 0.0, 0.0, 0.0)
        sat = np.array([WGS84_A + 550e3, 0.0, 0.0])
        assert off_nadir_angle(sat, site.ecef_m()) == pytest.approx(0.0,
                                                                    abs=1e-9)

    def test_right_triangle_case(self):
        # satellite on +x, site on +y at the same geocentric distance:
        # the nadir-to-site angle of the isoceles triangle is 45 deg.
        sat = np.array([7e6, 0.0, 0.0])
        site = np.array([0.0, 7e6, 0.0])
        assert off_nadir_angle(sat, site) == pytest.approx(45.0, rel=1e-12)

    def test_zero_vector_raises(self):
        with pytest.raises(ValueError):
            off_nadir_angle(np.zeros(3), np.array([1e6, 0.0, 0.0]))


class TestVisibilityRule:
    def test_boundaries_inclusive(self):
        rule = VisibilityRule(masking_angle_deg=10.0, beamwidth_deg=60.0)
        assert is_visible(10.0, 60.0, rule)
        assert not is_visible(9.999, 60.0, rule)
        assert not is_visible(10.0, 60.001, rule)

    def test_validation(self):
        with pytest.raises(ValueError):
            VisibilityRule(masking_angle_deg=-1.0, beamwidth_deg=60.0)
        with pytest.raises(ValueError):
            VisibilityRule(masking_angle_deg=10.0, beamwidth_deg=0.0)
        with pytest.raises(ValueError):
            VisibilityRule(masking_angle_deg=10.0, beamwidth_deg=90.5)


class TestVectorizedAngles:
    @given(lat=st.floats(min_value=-89.0, max_value=89.0),
           lon=st.floats(min_value=-180.0, max_value=180.0),
           seed=st.integers(min_value=0, max_value=2**31 - 1))
    def test_matches_scalar_path(self, lat, lon, seed):
        site = GroundSite("h", lat, lon, 0.0)
        rng = np.random.default_rng(seed)
        sats = rng.normal(size=(8, 3))
        sats = (sats / np.linalg.norm(sats, axis=1, keepdims=True)
                * rng.uniform(6.8e6, 3e7, size=(8, 1)))
        el_v, off_v = elevation_offnadir_many(site.ecef_m(),
                                              site.enu_basis(), sats)
        for i in range(sats.shape[0]):
            el_s, _, _ = look_angles(site, sats[i])
            off_s = off_nadir_angle(sats[i], site.ecef_m())
            assert el_v[i] == pytest.approx(el_s, abs=1e-9)
            assert off_v[i] == pytest.approx(off_s, abs=1e-9)

    def test_nan_rows_compare_false(self):
        site = GroundSite("x", 45.0, 11.0, 0.0)
        sats = np.array([[7e6, 0.0, 0.0], [np.nan, np.nan, np.nan]])
        el, off = elevation_offnadir_many(site.ecef_m(), site.enu_basis(),
                                          sats)
        assert np.isnan(el[1]) and np.isnan(off[1])
        assert not (el[1] >= 0.0)
        assert not (off[1] <= 90.0)


class TestLoadSites:
    def test_bundled_sites(self, data_dir):
        sites = load_sites(data_dir / "sites.csv")
        names = [s.name for s in sites]
        assert names == ["Padova", "Svalbard", "ESTEC", "LaReunion"]
        padova = sites[0]
        assert padova.latitude_deg == 45.409
        assert padova.longitude_deg == 11.894

    def test_bad_latitude_names_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("name,lat_deg,lon_deg,alt_m\nX,95.0,0.0,0\n")
        with pytest.raises(ValueError, match="line 2"):
            load_sites(path)

    def test_missing_column(self, tmp_path):
        path = tmp_path / "cols.csv"
        path.write_text("name,lat_deg\nX,10.0\n")
        with pytest.raises(ValueError):
            load_sites(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("name,lat_deg,lon_deg,alt_m\n")
        with pytest.raises(ValueError):
            load_sites(path)
