"""Render population curves and intensity heatmaps from mirrorqed CSVs.

Pure file consumer: reads the documented CSV formats (``population.csv``
with columns t,re_ce,im_ce,re_cs,im_cs,pe,ps and long-form ``intensity.csv``
with columns t,x,intensity) and writes an image.  No physics here.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

KINDS = ("population-vs-time", "multi-panel-population", "intensity-heatmap")

#: relative tolerance when checking that a heatmap grid is uniform
_GRID_RTOL = 1e-6


class FigureDataError(ValueError):
    """Missing or ill-formed input CSV."""


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    csv_paths: tuple[str, ...]
    out_path: str
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    xlim: tuple[float, float] | None = None
    ylim: tuple[float, float] | None = None
    dpi: int = 100

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise FigureDataError(
                f"unknown figure kind {self.kind!r}; expected one of {KINDS}"
            )
        if not self.csv_paths:
            raise FigureDataError("at least one input CSV is required")


@dataclass(frozen=True)
class RenderResult:
    path: Path
    n_rows: int
    n_cols: int
    size_px: tuple[int, int]


def _read_columns(path: str, required: tuple[str, ...]) -> dict[str, np.ndarray]:
    p = Path(path)
    if not p.is_file():
        raise FigureDataError(f"input CSV not found: {p}")
    with open(p, newline="") as fh:
        reader = csv.DictReader(fh)
        headers = reader.fieldnames or []
        for col in required:
            if col not in headers:
                raise FigureDataError(f"{p}: missing column {col!r}")
        rows = list(reader)
    if not rows:
        raise FigureDataError(f"{p}: no data rows")
    out: dict[str, np.ndarray] = {}
    for col in required:
        try:
            out[col] = np.array([float(r[col]) for r in rows])
        except (TypeError, ValueError) as exc:
            raise FigureDataError(f"{p}: non-numeric value in column {col!r}") from exc
    return out


def _uniform_axis(values: np.ndarray, path: str, name: str) -> np.ndarray:
    axis = np.unique(values)
    if len(axis) < 2:
        raise FigureDataError(f"{path}: column {name!r} spans a single value")
    steps = np.diff(axis)
    if np.max(steps) - np.min(steps) > _GRID_RTOL * np.max(steps):
        raise FigureDataError(f"{path}: column {name!r} is not a uniform grid")
    return axis


def _pivot_intensity(path: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    cols = _read_columns(path, ("t", "x", "intensity"))
    t_axis = _uniform_axis(cols["t"], path, "t")
    x_axis = _uniform_axis(cols["x"], path, "x")
    if len(cols["t"]) != len(t_axis) * len(x_axis):
        raise FigureDataError(
            f"{path}: {len(cols['t'])} rows do not fill a "
            f"{len(t_axis)}x{len(x_axis)} grid"
        )
    it = np.searchsorted(t_axis, cols["t"])
    ix = np.searchsorted(x_axis, cols["x"])
    grid = np.full((len(t_axis), len(x_axis)), np.nan)
    grid[it, ix] = cols["intensity"]
    if np.any(np.isnan(grid)):
        raise FigureDataError(f"{path}: grid has missing (t, x) cells")
    return t_axis, x_axis, grid


def _apply_limits(ax, spec: FigureSpec) -> None:
    if spec.xlim is not None:
        ax.set_xlim(*spec.xlim)
    if spec.ylim is not None:
        ax.set_ylim(*spec.ylim)


def _plot_population(ax, path: str, label: str | None = None) -> None:
    cols = _read_columns(path, ("t", "pe", "ps"))
    ax.plot(cols["t"], cols["pe"], lw=1.2, label=label or "P_e")
    ax.plot(cols["t"], cols["ps"], lw=0.9, ls="--", label="P_s")
    ax.set_ylim(bottom=0.0)


def render(spec: FigureSpec) -> RenderResult:
    """Write the figure described by ``spec``; returns layout and pixel
    size for downstream assertions."""
    if spec.kind == "population-vs-time":
        (path,) = spec.csv_paths[:1]
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        _plot_population(ax, path)
        ax.set_xlabel(spec.xlabel or "gamma * t")
        ax.set_ylabel(spec.ylabel or "population")
        ax.legend(frameon=False)
        _apply_limits(ax, spec)
        n_rows = n_cols = 1
    elif spec.kind == "multi-panel-population":
        n = len(spec.csv_paths)
        n_cols = min(3, n)
        n_rows = math.ceil(n / n_cols)
        fig, axes = plt.subplots(
            n_rows, n_cols, figsize=(3.2 * n_cols, 2.4 * n_rows),
            sharex=False, squeeze=False,
        )
        for i, path in enumerate(spec.csv_paths):
            ax = axes[i // n_cols][i % n_cols]
            _plot_population(ax, path)
            ax.set_title(Path(path).parent.name or Path(path).stem, fontsize=8)
            if i // n_cols == n_rows - 1:
                ax.set_xlabel(spec.xlabel or "gamma * t")
            if i % n_cols == 0:
                ax.set_ylabel(spec.ylabel or "population")
        for j in range(n, n_rows * n_cols):
            axes[j // n_cols][j % n_cols].set_axis_off()
    else:  # intensity-heatmap
        (path,) = spec.csv_paths[:1]
        t_axis, x_axis, grid = _pivot_intensity(path)
        fig, ax = plt.subplots(figsize=(6.0, 4.5))
        mesh = ax.pcolormesh(x_axis, t_axis, grid, shading="nearest",
                             cmap="inferno", rasterized=True)
        fig.colorbar(mesh, ax=ax, label="intensity")
        ax.set_xlabel(spec.xlabel or "x / L_c")
        ax.set_ylabel(spec.ylabel or "gamma * t")
        _apply_limits(ax, spec)
        n_rows = n_cols = 1

    if spec.title:
        fig.suptitle(spec.title)
    fig.tight_layout()
    out = Path(spec.out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_kwargs = {"dpi": spec.dpi}
    if out.suffix.lower() == ".svg":
        save_kwargs["metadata"] = {"Date": None}  # keep vector output stable
    fig.savefig(out, **save_kwargs)
    if out.suffix.lower() == ".png":
        size_px = _png_dimensions(out)
    else:
        size_px = (
            round(fig.get_figwidth() * spec.dpi),
            round(fig.get_figheight() * spec.dpi),
        )
    plt.close(fig)
    return RenderResult(path=out, n_rows=n_rows, n_cols=n_cols, size_px=size_px)


def _png_dimensions(path: Path) -> tuple[int, int]:
    header = path.read_bytes()[:24]
    if header[:8] != b"\x89PNG\r\n\x1a\n":
        raise FigureDataError(f"{path}: not a PNG file")
    return (
        int.from_bytes(header[16:20], "big"),
        int.from_bytes(header[20:24], "big"),
    )
