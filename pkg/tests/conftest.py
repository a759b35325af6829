"""Shared fixtures: repo paths and a tiny deterministic TLE corpus."""

from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = REPO_ROOT / "data"
CONFIG_DIR = REPO_ROOT / "configs"

#: Published SGP4 verification elements (high-drag near-earth test case).
TLE_88888 = (
    "1 88888U          80275.98708465  .00073094  13844-3  66816-4 0    87",
    "2 88888  72.8435 115.9689 0086731  52.6988 110.5714 16.05824518  1058",
)


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def config_dir() -> Path:
    return CONFIG_DIR


@pytest.fixture(scope="session")
def tle_88888_text() -> str:
    return "\n".join(TLE_88888) + "\n"


@pytest.fixture()
def tiny_tle_file(tmp_path) -> Path:
    """Two near-polar LEO satellites, epoch 2024-04-19 12:00 UTC."""
    lines = [
        "1 90001U          24110.50000000  .00000000  00000-0  00000-0 0  9993",
        "2 90001  86.4000   0.0000 0001000   0.0000   0.0000 14.35663933    15",
        "1 90002U          24110.50000000  .00000000  00000-0  00000-0 0  9994",
        "2 90002  86.4000  90.0000 0001000   0.0000 180.0000 14.35663933    14",
    ]
    path = tmp_path / "tiny.tle"
    path.write_text("\n".join(lines) + "\n")
    return path
