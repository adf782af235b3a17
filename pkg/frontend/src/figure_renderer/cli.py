"""`render_figures <recipe.toml>`: render every figure in a recipe file."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .renderer import SchemaError, load_recipes, render


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="render_figures",
        description="Render hheat CSV outputs into figures.",
    )
    parser.add_argument("recipe", type=Path, help="recipe TOML file")
    parser.add_argument(
        "--base", type=Path, default=None,
        help="directory that input/output paths resolve against "
             "(default: the recipe file's own `base` key)",
    )
    args = parser.parse_args(argv)
    try:
        recipes = load_recipes(args.recipe, args.base)
        for recipe in recipes:
            out = render(recipe)
            print(out)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
