"""Figure regeneration from soopnav CSV products.

Modules:

- ``recipe``: the FigureRecipe description and its INI loader.
- ``render``: deterministic matplotlib rendering plus the debug dump
  of plotted points.
- ``cli``: the ``soopplots render`` command.
"""

from .recipe import FigureRecipe, load_recipe
from .render import RecipeError, render

__version__ = "0.1.0"

__all__ = [
    "FigureRecipe",
    "RecipeError",
    "load_recipe",
    "render",
    "__version__",
]
