"""Static report rendering: heatmap figures for the connectivity views,
written next to their delimited exports."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .overview import COUNT, MatrixView, Metric, View, view_to_csv, visible_keys


def view_figure(view: View, metric: Metric = COUNT, title: str = ""):
    """Heatmap of the view's scalar metric values. Cells with undefined
    metric values (no paths) render as hatched white; aggregated keys are
    marked with a '*' suffix."""
    rows = visible_keys(view.rows)
    cols = visible_keys(view.cols) if isinstance(view, MatrixView) else list(view.cols)
    grid = np.full((max(len(rows), 1), max(len(cols), 1)), np.nan)
    for i, r in enumerate(rows):
        for j, c in enumerate(cols):
            res = metric(view.graph, view.result, view.cell_paths(r.id, c.id))
            value = res.scalar if res.vector is None else sum(res.vector)
            if value is not None:
                grid[i, j] = value

    fig, ax = plt.subplots(
        figsize=(max(3.0, 0.5 * len(cols) + 2), max(2.5, 0.4 * len(rows) + 1.5))
    )
    masked = np.ma.masked_invalid(grid)
    cmap = plt.get_cmap("viridis").copy()
    cmap.set_bad(color="white")
    im = ax.imshow(masked, cmap=cmap, aspect="auto")
    ax.set_xticks(range(len(cols)))
    ax.set_xticklabels(
        [c.id + ("*" if getattr(c, "group", False) else "") for c in cols],
        rotation=45,
        ha="right",
        fontsize=8,
    )
    ax.set_yticks(range(len(rows)))
    ax.set_yticklabels(
        [r.id + ("*" if r.group else "") for r in rows], fontsize=8
    )
    fig.colorbar(im, ax=ax, label=metric.name)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return fig


def write_report(matrix: View, table: View, out_dir, metric: Metric = COUNT) -> list[str]:
    """Write matrix/table CSVs and the matching heatmap PNGs; returns the
    list of files written (relative names)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, view in (("matrix", matrix), ("table", table)):
        csv_path = out / f"{name}.csv"
        csv_path.write_text(view_to_csv(view, metric), encoding="utf-8")
        written.append(csv_path.name)
        fig = view_figure(view, metric, title=name)
        png_path = out / f"{name}.png"
        fig.savefig(png_path, dpi=120)
        plt.close(fig)
        written.append(png_path.name)
    return written
