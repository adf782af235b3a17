"""Figure rendering as a pure function of CSV bytes.

Four figure kinds, each bound to one CSV schema:

- ``lines``:   cov_density.csv (x, r, lam, f) -> two-panel line plot
- ``heatmap``: field.csv (t, x, value, replicate) -> one realization as a
  pseudocolor map
- ``surface``: field.csv (t, x, value, replicate) -> the same realization
  as a 3-D surface
- ``sweep``:   cov_theory.csv (m, t, tprime, x, xprime, value) -> one curve
  per order m with a legend

Determinism: the Agg backend with pinned fonts and dpi; no timestamps or
environment-dependent metadata reach the output file.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

KINDS = ("lines", "heatmap", "surface", "sweep")

SCHEMAS = {
    "lines": ["x", "r", "lam", "f"],
    "heatmap": ["t", "x", "value", "replicate"],
    "surface": ["t", "x", "value", "replicate"],
    "sweep": ["m", "t", "tprime", "x", "xprime", "value"],
}

SWEEP_AXES = {
    "time_sum": ("t + t'", lambda c: c["t"] + c["tprime"]),
    "time_diff": ("t - t'", lambda c: c["t"] - c["tprime"]),
    "space": ("x - x'", lambda c: c["x"] - c["xprime"]),
}

_RC = {
    "font.family": "DejaVu Sans",
    "font.size": 10,
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "image.cmap": "viridis",
    "svg.hashsalt": "figure-renderer",
}


class SchemaError(Exception):
    """The input CSV does not match the figure kind's schema."""


@dataclass(frozen=True)
class FigureRecipe:
    kind: str
    input: Path
    output: Path
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    sweep_axis: str = "time_sum"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "sweep" and self.sweep_axis not in SWEEP_AXES:
            raise SchemaError(
                f"sweep_axis must be one of {tuple(SWEEP_AXES)}, got {self.sweep_axis!r}"
            )


def _read_columns(path: Path, expected: list[str]) -> dict[str, np.ndarray]:
    if not path.exists():
        raise SchemaError(f"input CSV does not exist: {path}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file")
        rows = list(reader)
    if header != expected:
        raise SchemaError(
            f"{path}: header {header} does not match the schema {expected}"
        )
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    data = np.array(rows, dtype=float)
    return {name: data[:, i] for i, name in enumerate(expected)}


def _save(fig, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    # Strip the version-bearing Software chunk so images depend only on
    # the CSV bytes and the recipe, not on the matplotlib build.
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)


def _render_lines(recipe: FigureRecipe, cols) -> None:
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))
    ax1.plot(cols["x"], cols["r"], color="tab:blue", lw=1.2)
    ax1.set_xlabel(recipe.xlabel or "x")
    ax1.set_ylabel("r(x)")
    ax1.set_title("covariance of the initial condition")
    ax2.plot(cols["lam"], cols["f"], color="tab:red", lw=1.2)
    ax2.set_xlabel("lambda")
    ax2.set_ylabel("f(lambda)")
    ax2.set_yscale("log")
    ax2.set_title("spectral density")
    if recipe.title:
        fig.suptitle(recipe.title)
    fig.tight_layout()
    _save(fig, recipe.output)


def _first_replicate_grid(cols):
    mask = cols["replicate"] == cols["replicate"].min()
    t, x, v = cols["t"][mask], cols["x"][mask], cols["value"][mask]
    tg = np.unique(t)
    xg = np.unique(x)
    if tg.size * xg.size != v.size:
        raise SchemaError("field rows do not form a full (t, x) grid")
    grid = np.full((tg.size, xg.size), np.nan)
    ti = np.searchsorted(tg, t)
    xi = np.searchsorted(xg, x)
    grid[ti, xi] = v
    return tg, xg, grid


def _render_heatmap(recipe: FigureRecipe, cols) -> None:
    tg, xg, grid = _first_replicate_grid(cols)
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    mesh = ax.pcolormesh(xg, tg, grid, shading="nearest")
    fig.colorbar(mesh, ax=ax)
    ax.set_xlabel(recipe.xlabel or "x")
    ax.set_ylabel(recipe.ylabel or "t")
    ax.set_title(recipe.title or "field realization")
    fig.tight_layout()
    _save(fig, recipe.output)


def _render_surface(recipe: FigureRecipe, cols) -> None:
    tg, xg, grid = _first_replicate_grid(cols)
    fig = plt.figure(figsize=(5.6, 4.4))
    ax = fig.add_subplot(projection="3d")
    xx, tt = np.meshgrid(xg, tg)
    ax.plot_surface(xx, tt, grid, cmap="viridis", linewidth=0)
    ax.set_xlabel(recipe.xlabel or "x")
    ax.set_ylabel(recipe.ylabel or "t")
    ax.set_title(recipe.title or "field realization")
    _save(fig, recipe.output)


def _render_sweep(recipe: FigureRecipe, cols) -> None:
    label, axis_fn = SWEEP_AXES[recipe.sweep_axis]
    axis = axis_fn(cols)
    fig, ax = plt.subplots(figsize=(5.2, 3.8))
    for m in np.unique(cols["m"]):
        mask = cols["m"] == m
        order = np.argsort(axis[mask], kind="stable")
        ax.plot(axis[mask][order], cols["value"][mask][order],
                lw=1.2, label=f"m = {int(m)}")
    ax.set_xlabel(recipe.xlabel or label)
    ax.set_ylabel(recipe.ylabel or "covariance")
    ax.set_title(recipe.title or "covariance sweep")
    ax.legend()
    fig.tight_layout()
    _save(fig, recipe.output)


_RENDERERS = {
    "lines": _render_lines,
    "heatmap": _render_heatmap,
    "surface": _render_surface,
    "sweep": _render_sweep,
}


def render(recipe: FigureRecipe) -> Path:
    cols = _read_columns(recipe.input, SCHEMAS[recipe.kind])
    with plt.rc_context(_RC):
        _RENDERERS[recipe.kind](recipe, cols)
    return recipe.output


def load_recipes(path: Path, base: Path | None = None) -> list[FigureRecipe]:
    """Parse a recipe TOML file: optional `base` key plus [[figure]] entries.

    Input and output paths resolve against `base` (CLI override wins over
    the file's own `base`, which resolves against the recipe's directory).
    """
    try:
        doc = tomllib.loads(path.read_text())
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise SchemaError(f"cannot load recipe {path}: {exc}")
    if base is None:
        base = path.parent / doc.get("base", ".")
    figures = doc.get("figure", [])
    if not figures:
        raise SchemaError(f"{path}: no [[figure]] entries")
    recipes = []
    for entry in figures:
        for key in ("kind", "input", "output"):
            if key not in entry:
                raise SchemaError(f"{path}: [[figure]] entry missing {key!r}")
        recipes.append(
            FigureRecipe(
                kind=entry["kind"],
                input=base / entry["input"],
                output=base / entry["output"],
                title=entry.get("title", ""),
                xlabel=entry.get("xlabel", ""),
                ylabel=entry.get("ylabel", ""),
                sweep_axis=entry.get("sweep_axis", "time_sum"),
            )
        )
    return recipes


def bundled_recipe(name: str) -> Path:
    p = Path(__file__).parent / "recipes" / f"{name}.toml"
    if not p.exists():
        raise SchemaError(f"no bundled recipe named {name!r}")
    return p
