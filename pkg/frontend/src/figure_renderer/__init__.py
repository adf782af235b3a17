"""Deterministic figure rendering for hheat CSV outputs.

All numerical content comes from the CSV files; this package computes
nothing mathematical. Identical input bytes produce identical images.
"""

from .renderer import FigureRecipe, SchemaError, load_recipes, render

__version__ = "0.1.0"

__all__ = ["FigureRecipe", "SchemaError", "load_recipes", "render"]
