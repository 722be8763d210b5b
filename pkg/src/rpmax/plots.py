"""Success-rate heatmaps from sweep summary files.

The output is a self-contained vector image (SVG unless the extension says
otherwise); its exact bytes are not contractual, but the axes carry the
summary field names and one cell is drawn per grid point.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .fileio import read_csv_dicts


def emit_heatmap(summary_csv_path, x_axis: str, y_axis: str, out_path) -> Path:
    """Color success rate over the (x_axis, y_axis) cells of a summary CSV."""
    rows = read_csv_dicts(summary_csv_path)
    if not rows:
        raise ValueError(f"{summary_csv_path}: empty summary file")
    for fld in (x_axis, y_axis, "success_rate"):
        if fld not in rows[0]:
            raise ValueError(f"summary file has no field named {fld!r} "
                             f"(available: {sorted(rows[0])})")

    xs = sorted({float(r[x_axis]) for r in rows})
    ys = sorted({float(r[y_axis]) for r in rows})
    grid = np.full((len(ys), len(xs)), np.nan)
    for r in rows:
        i = ys.index(float(r[y_axis]))
        j = xs.index(float(r[x_axis]))
        grid[i, j] = float(r["success_rate"])

    fig, ax = plt.subplots(figsize=(1.2 + 0.8 * len(xs), 1.2 + 0.6 * len(ys)))
    mesh = ax.imshow(grid, origin="lower", aspect="auto", cmap="viridis",
                     vmin=0.0, vmax=1.0)
    ax.set_xticks(range(len(xs)), [f"{v:g}" for v in xs])
    ax.set_yticks(range(len(ys)), [f"{v:g}" for v in ys])
    ax.set_xlabel(x_axis)
    ax.set_ylabel(y_axis)
    ax.set_title("success rate")
    fig.colorbar(mesh, ax=ax)
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, format=out_path.suffix.lstrip(".") or "svg")
    plt.close(fig)
    return out_path
