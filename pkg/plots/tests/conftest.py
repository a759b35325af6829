from pathlib import Path

import pytest

PLOTS_ROOT = Path(__file__).resolve().parents[1]
RECIPE_DIR = PLOTS_ROOT / "recipes"
DATA_DIR = PLOTS_ROOT / "data"


@pytest.fixture
def recipe_dir():
    return RECIPE_DIR


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def sweep_csv(tmp_path):
    """A miniature delay-sweep CSV in the documented schema."""
    path = tmp_path / "sweep.csv"
    path.write_text(
        "observable,system,cn0_dbhz,obs_time_s,variance,std_native,"
        "std_converted\n"
        "delay,Starlink,4.0000000000000000e+01,1.3300000000000000e-03,"
        "1.0000000000000000e-18,1.0000000000000000e-09,"
        "3.0000000000000001e-01\n"
        "delay,Starlink,5.0000000000000000e+01,1.3300000000000000e-03,"
        "1.0000000000000001e-19,3.1622776601683792e-10,"
        "9.4868329805051381e-02\n"
        "delay,OneWeb,4.0000000000000000e+01,1.3300000000000000e-03,"
        "4.0000000000000000e-18,2.0000000000000000e-09,"
        "5.9999999999999998e-01\n"
        "delay,OneWeb,5.0000000000000000e+01,1.3300000000000000e-03,"
        "4.0000000000000002e-19,6.3245553203367583e-10,"
        "1.8973665961010276e-01\n"
    )
    return path


@pytest.fixture
def sweep_recipe_file(tmp_path, sweep_csv):
    path = tmp_path / "mini.cfg"
    path.write_text(
        "[figure]\n"
        f"id = mini\n"
        f"inputs = {sweep_csv.name}\n"
        "x_column = cn0_dbhz\n"
        "y_columns = std_native\n"
        "group_by = system\n"
        "y_scale = log\n"
        "right_meters_column = std_converted\n"
        "output = mini.png\n"
    )
    return path
