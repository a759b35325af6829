"""The six bundled recipes against the bundled CSV products."""

import csv
from collections import Counter

import pytest

from soopplots.recipe import load_recipe
from soopplots.render import render

FIGURES = ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6"]


@pytest.mark.parametrize("figure_id", FIGURES)
def test_bundled_recipe_renders(figure_id, recipe_dir, tmp_path):
    recipe = load_recipe(recipe_dir / f"{figure_id}.cfg")
    assert recipe.figure_id == figure_id
    out = render(recipe, out_dir=tmp_path)
    assert out.exists()
    assert out.stat().st_size > 1000


@pytest.mark.parametrize("figure_id", FIGURES)
def test_bundled_roundtrip_lossless(figure_id, recipe_dir, tmp_path):
    recipe = load_recipe(recipe_dir / f"{figure_id}.cfg")
    render(recipe, out_dir=tmp_path, debug_dump=True)
    dump_path = tmp_path / f"{figure_id}_points.csv"
    with open(dump_path, newline="") as fh:
        dump = list(csv.DictReader(fh))
    assert dump

    columns = set(recipe.y_columns)
    if recipe.right_meters_column:
        columns.add(recipe.right_meters_column)

    # every plotted point must appear in the source CSVs with the exact
    # same value, and the per-column point counts must match the number
    # of populated source rows.
    source_pairs: Counter = Counter()
    source_counts: Counter = Counter()
    for path in recipe.input_csvs:
        with open(path, newline="") as fh:
            for row in csv.DictReader(fh):
                if row[recipe.x_column] == "":
                    continue
                x = float(row[recipe.x_column])
                for col in columns:
                    if row[col] == "":
                        continue
                    source_pairs[(col, x, float(row[col]))] += 1
                    source_counts[col] += 1

    dump_counts: Counter = Counter()
    for row in dump:
        key = (row["column"], float(row["x"]), float(row["y"]))
        assert source_pairs[key] > 0, f"dumped point not in source: {key}"
        dump_counts[row["column"]] += 1
    for col in columns:
        assert dump_counts[col] == source_counts[col], col


def test_fig6_overlays_std_and_bound(recipe_dir):
    recipe = load_recipe(recipe_dir / "fig6.cfg")
    assert set(recipe.y_columns) == {"std_m", "mcrlb_std_m"}
    assert recipe.y_scale == "log"


def test_delay_recipes_carry_meters_axis(recipe_dir):
    for figure_id in ("fig1", "fig2"):
        recipe = load_recipe(recipe_dir / f"{figure_id}.cfg")
        assert recipe.right_meters_column == "std_converted"


def test_renders_are_deterministic(recipe_dir, tmp_path):
    recipe = load_recipe(recipe_dir / "fig4.cfg")
    a = render(recipe, out_dir=tmp_path / "a").read_bytes()
    b = render(recipe, out_dir=tmp_path / "b").read_bytes()
    assert a == b
