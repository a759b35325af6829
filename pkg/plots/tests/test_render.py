"""Rendering behavior on miniature CSVs: files, errors, dumps, CLI."""

import csv

import pytest

from soopplots.cli import main
from soopplots.recipe import FigureRecipe, load_recipe
from soopplots.render import RecipeError, render


def read_dump(path):
    with open(path, newline="") as fh:
        return [(r["series"], r["column"], float(r["x"]), float(r["y"]))
                for r in csv.DictReader(fh)]


class TestRender:
    def test_writes_png(self, sweep_recipe_file, tmp_path):
        out = render(load_recipe(sweep_recipe_file), out_dir=tmp_path)
        assert out == tmp_path / "mini.png"
        assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_byte_identical_rerun(self, sweep_recipe_file, tmp_path):
        recipe = load_recipe(sweep_recipe_file)
        a = render(recipe, out_dir=tmp_path / "a").read_bytes()
        b = render(recipe, out_dir=tmp_path / "b").read_bytes()
        assert a == b

    def test_missing_column_named(self, tmp_path):
        data = tmp_path / "d.csv"
        data.write_text("site,constellation,p_le\nPadova,starlink,0.5\n")
        recipe = FigureRecipe(
            figure_id="cdf", input_csvs=(str(data),), x_column="gdop",
            y_columns=("p_le",), output="f.png")
        with pytest.raises(RecipeError, match="'gdop'"):
            render(recipe, out_dir=tmp_path)

    def test_missing_input_file(self, tmp_path):
        recipe = FigureRecipe(
            figure_id="f", input_csvs=(str(tmp_path / "ghost.csv"),),
            x_column="x", y_columns=("y",), output="f.png")
        with pytest.raises(RecipeError, match="not found"):
            render(recipe, out_dir=tmp_path)

    def test_empty_cells_dropped(self, tmp_path):
        data = tmp_path / "d.csv"
        data.write_text("x,y,s\n1.0,2.0,a\n2.0,,a\n3.0,4.0,a\n")
        recipe = FigureRecipe(
            figure_id="f", input_csvs=(str(data),), x_column="x",
            y_columns=("y",), group_by=("s",), output="f.png")
        render(recipe, out_dir=tmp_path, debug_dump=True)
        dump = read_dump(tmp_path / "f_points.csv")
        assert [(x, y) for _, _, x, y in dump] == [(1.0, 2.0), (3.0, 4.0)]

    def test_all_rows_empty_raises(self, tmp_path):
        data = tmp_path / "d.csv"
        data.write_text("x,y\n1.0,\n2.0,\n")
        recipe = FigureRecipe(
            figure_id="f", input_csvs=(str(data),), x_column="x",
            y_columns=("y",), output="f.png")
        with pytest.raises(RecipeError, match="no plottable rows"):
            render(recipe, out_dir=tmp_path)

    def test_dump_roundtrip_lossless(self, sweep_recipe_file, sweep_csv,
                                     tmp_path):
        recipe = load_recipe(sweep_recipe_file)
        render(recipe, out_dir=tmp_path, debug_dump=True)
        dump = read_dump(tmp_path / "mini_points.csv")
        with open(sweep_csv, newline="") as fh:
            source = list(csv.DictReader(fh))
        for column in ("std_native", "std_converted"):
            dumped = sorted((x, y) for _, c, x, y in dump if c == column)
            expect = sorted((float(r["cn0_dbhz"]), float(r[column]))
                            for r in source)
            assert len(dumped) == len(expect)
            for (xd, yd), (xe, ye) in zip(dumped, expect):
                assert xd == pytest.approx(xe, rel=1e-12)
                assert yd == pytest.approx(ye, rel=1e-12)

    def test_series_split_by_group(self, sweep_recipe_file, tmp_path):
        recipe = load_recipe(sweep_recipe_file)
        render(recipe, out_dir=tmp_path, debug_dump=True)
        dump = read_dump(tmp_path / "mini_points.csv")
        assert {s for s, _, _, _ in dump} == {"Starlink", "OneWeb"}

    def test_multiple_inputs_concatenate(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        a.write_text("x,y\n1.0,1.0\n")
        b.write_text("x,y\n2.0,4.0\n")
        recipe = FigureRecipe(
            figure_id="f", input_csvs=(str(a), str(b)), x_column="x",
            y_columns=("y",), output="f.png")
        render(recipe, out_dir=tmp_path, debug_dump=True)
        dump = read_dump(tmp_path / "f_points.csv")
        assert [(x, y) for _, _, x, y in dump] == [(1.0, 1.0), (2.0, 4.0)]


class TestCli:
    def test_render_subcommand(self, sweep_recipe_file, tmp_path, capsys):
        out = tmp_path / "cli"
        assert main(["render", "--recipe", str(sweep_recipe_file),
                     "--out", str(out)]) == 0
        assert (out / "mini.png").exists()
        assert "mini.png" in capsys.readouterr().out

    def test_debug_dump_flag(self, sweep_recipe_file, tmp_path):
        out = tmp_path / "dump"
        assert main(["render", "--recipe", str(sweep_recipe_file),
                     "--out", str(out), "--debug-dump"]) == 0
        assert (out / "mini_points.csv").exists()

    def test_bad_recipe_exit_code(self, tmp_path, capsys):
        missing = tmp_path / "none.cfg"
        assert main(["render", "--recipe", str(missing),
                     "--out", str(tmp_path)]) == 2
        assert "recipe error" in capsys.readouterr().err

    def test_schema_error_exit_code(self, tmp_path, capsys):
        data = tmp_path / "d.csv"
        data.write_text("a,b\n1,2\n")
        cfg = tmp_path / "r.cfg"
        cfg.write_text("[figure]\nid = f\ninputs = d.csv\nx_column = gdop\n"
                       "y_columns = b\noutput = f.png\n")
        assert main(["render", "--recipe", str(cfg),
                     "--out", str(tmp_path)]) == 2
        assert "gdop" in capsys.readouterr().err
