"""Deterministic figure rendering from CSV products.

The renderer never computes: it selects columns, groups rows into
series, and hands the numbers to matplotlib unchanged.  A debug dump
mode writes every plotted point back out as CSV at full precision so
the figure's contents can be diffed against the analysis products.
"""

from __future__ import annotations

import csv
import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .recipe import FigureRecipe

logger = logging.getLogger(__name__)

#: PNG metadata pinned so identical recipes produce identical bytes.
_PNG_METADATA = {"Software": "soopplots"}

_FIGSIZE = (6.4, 4.2)
_DPI = 120


class RecipeError(ValueError):
    """A recipe referenced data its input CSVs do not provide."""


def _read_rows(path: str) -> tuple[list[str], list[dict]]:
    p = Path(path)
    if not p.is_file():
        raise RecipeError(f"input CSV not found: {p}")
    with open(p, newline="") as fh:
        reader = csv.DictReader(fh)
        header = list(reader.fieldnames or [])
        rows = list(reader)
    if not header:
        raise RecipeError(f"{p}: empty CSV, no header line")
    return header, rows


def _check_columns(recipe: FigureRecipe, path: str,
                   header: list[str]) -> None:
    needed = [recipe.x_column, *recipe.y_columns, *recipe.group_by]
    if recipe.right_meters_column:
        needed.append(recipe.right_meters_column)
    for col in needed:
        if col not in header:
            raise RecipeError(
                f"{path}: missing column '{col}' "
                f"(needed by recipe {recipe.figure_id})"
            )


def _series_key(row: dict, group_by: tuple[str, ...]) -> str:
    if not group_by:
        return ""
    return "/".join(row[c] for c in group_by)


def _collect(recipe: FigureRecipe) -> dict[str, dict[str, list]]:
    """series -> {"x": [...], y_column: [...], ...} in file order.

    Rows with an empty x cell or empty cells in every selected y column
    are dropped (the CSV writers use empty cells for not-available);
    a row with some y columns present keeps NaN-free lists per column
    by skipping only the empty columns.
    """
    value_columns = list(recipe.y_columns)
    if recipe.right_meters_column:
        value_columns.append(recipe.right_meters_column)
    series: dict[str, dict[str, list]] = {}
    for path in recipe.input_csvs:
        header, rows = _read_rows(path)
        _check_columns(recipe, path, header)
        for row in rows:
            if row[recipe.x_column] == "":
                continue
            key = _series_key(row, recipe.group_by)
            bucket = series.setdefault(
                key, {col: [] for col in ("x", *value_columns)}
            )
            x = float(row[recipe.x_column])
            kept = False
            for col in value_columns:
                if row[col] == "":
                    continue
                bucket[col].append((x, float(row[col])))
                kept = True
            if kept:
                bucket["x"].append(x)
    series = {k: v for k, v in series.items() if v["x"]}
    if not series:
        raise RecipeError(
            f"recipe {recipe.figure_id}: no plottable rows in "
            f"{', '.join(recipe.input_csvs)}"
        )
    return series


def _dump_path(image_path: Path) -> Path:
    return image_path.with_name(image_path.stem + "_points.csv")


def _write_dump(path: Path, series: dict[str, dict[str, list]]) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write("series,column,x,y\n")
        for key, buckets in series.items():
            for col, pairs in buckets.items():
                if col == "x":
                    continue
                for x, y in pairs:
                    fh.write(f"{key},{col},{x:.16e},{y:.16e}\n")


def render(recipe: FigureRecipe, out_dir: str | Path | None = None,
           debug_dump: bool = False) -> Path:
    """Render one recipe to its output image; returns the image path.

    Relative output paths resolve under ``out_dir`` (default: the
    current directory).  With ``debug_dump`` every plotted point is
    also written to ``<output stem>_points.csv`` beside the image.
    """
    series = _collect(recipe)
    out = Path(recipe.output)
    if not out.is_absolute():
        out = Path(out_dir or ".") / out
    out.parent.mkdir(parents=True, exist_ok=True)

    fig, ax = plt.subplots(figsize=_FIGSIZE, dpi=_DPI)
    try:
        for key, buckets in series.items():
            for col in recipe.y_columns:
                pairs = buckets[col]
                if not pairs:
                    continue
                label = key if len(recipe.y_columns) == 1 else (
                    f"{key} {col}".strip()
                )
                ax.plot([p[0] for p in pairs], [p[1] for p in pairs],
                        label=label or None, linewidth=1.2)
        ax.set_xscale(recipe.x_scale)
        ax.set_yscale(recipe.y_scale)
        ax.set_xlabel(recipe.x_label or recipe.x_column)
        ax.set_ylabel(recipe.y_label or ", ".join(recipe.y_columns))
        if recipe.title:
            ax.set_title(recipe.title)
        ax.grid(True, which="both", alpha=0.3)
        if any(k for k in series) or len(recipe.y_columns) > 1:
            ax.legend(fontsize=7)
        if recipe.right_meters_column:
            ax2 = ax.twinx()
            for buckets in series.values():
                pairs = buckets[recipe.right_meters_column]
                if pairs:
                    # invisible twin plot: its only job is to autoscale
                    # the right-hand meters axis to the converted data.
                    ax2.plot([p[0] for p in pairs], [p[1] for p in pairs],
                             linestyle="none")
            ax2.set_yscale(recipe.y_scale)
            ax2.set_ylabel(
                recipe.right_label or recipe.right_meters_column
            )
        fig.tight_layout()
        fig.savefig(out, metadata=_PNG_METADATA)
    finally:
        plt.close(fig)
    logger.info("wrote %s", out)
    if debug_dump:
        _write_dump(_dump_path(out), series)
    return out
