"""Figure recipes: what to plot from which CSV, declared in INI files.

A recipe names its input CSVs, the x and y columns, optional series
grouping columns, axis scales, and the output image file.  Recipes use
the same INI dialect as the analysis CLI configs (one section,
``#``/``;`` inline comments).
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

_VALID_SCALES = ("linear", "log")


@dataclass(frozen=True)
class FigureRecipe:
    """One figure: inputs, column selection, scales, output."""

    figure_id: str
    input_csvs: tuple[str, ...]
    x_column: str
    y_columns: tuple[str, ...]
    output: str
    group_by: tuple[str, ...] = ()
    x_scale: str = "linear"
    y_scale: str = "linear"
    x_label: str = ""
    y_label: str = ""
    right_meters_column: str = ""
    right_label: str = ""
    title: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "input_csvs", tuple(self.input_csvs))
        object.__setattr__(self, "y_columns", tuple(self.y_columns))
        object.__setattr__(self, "group_by", tuple(self.group_by))
        if not self.figure_id:
            raise ValueError("figure_id must be non-empty")
        if not self.input_csvs:
            raise ValueError("recipe needs at least one input CSV")
        if not self.x_column:
            raise ValueError("x_column must be non-empty")
        if not self.y_columns:
            raise ValueError("recipe needs at least one y column")
        if not self.output:
            raise ValueError("output path must be non-empty")
        for scale, name in ((self.x_scale, "x_scale"),
                            (self.y_scale, "y_scale")):
            if scale not in _VALID_SCALES:
                raise ValueError(
                    f"{name} must be one of {_VALID_SCALES}, not {scale!r}"
                )


def _split_list(raw: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in raw.split(",") if x.strip())


def load_recipe(path: str | Path) -> FigureRecipe:
    """Load one recipe from an INI file with a [figure] section.

    Relative input CSV paths are resolved against the recipe file's
    directory, so recipe bundles are relocatable.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"recipe file not found: {path}")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.read(path)
    if not parser.has_section("figure"):
        raise ValueError(f"{path}: missing [figure] section")
    sec = parser["figure"]

    def need(name: str) -> str:
        if name not in sec:
            raise ValueError(
                f"{path}: missing required field '{name}' in [figure]"
            )
        return sec[name]

    base = path.parent
    inputs = tuple(
        str((base / p).resolve()) if not Path(p).is_absolute() else p
        for p in _split_list(need("inputs"))
    )
    return FigureRecipe(
        figure_id=need("id"),
        input_csvs=inputs,
        x_column=need("x_column"),
        y_columns=_split_list(need("y_columns")),
        output=need("output"),
        group_by=_split_list(sec.get("group_by", "")),
        x_scale=sec.get("x_scale", "linear"),
        y_scale=sec.get("y_scale", "linear"),
        x_label=sec.get("x_label", ""),
        y_label=sec.get("y_label", ""),
        right_meters_column=sec.get("right_meters_column", ""),
        right_label=sec.get("right_label", ""),
        title=sec.get("title", ""),
    )
