"""Command line interface: ``soopplots render --recipe <file> --out <dir>``."""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .recipe import load_recipe
from .render import RecipeError, render


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="soopplots",
        description="Regenerate figures from soopnav CSV products",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)
    p_render = sub.add_parser("render", help="render one figure recipe")
    p_render.add_argument("--recipe", required=True,
                          help="recipe INI file")
    p_render.add_argument("--out", default=".",
                          help="output directory for relative paths")
    p_render.add_argument("--debug-dump", action="store_true",
                          help="also write every plotted point as CSV")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        recipe = load_recipe(args.recipe)
        out = render(recipe, out_dir=args.out, debug_dump=args.debug_dump)
    except (RecipeError, FileNotFoundError, ValueError) as exc:
        print(f"recipe error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
