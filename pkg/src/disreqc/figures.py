"""Star-schema figures rendered to PNG files.

Each schema draws as its fact table boxed in the middle with the
dimension tables on a circle around it.  Layout depends only on the
schema contents, so repeated renders of the same schema are identical.
matplotlib loads lazily and only ever uses the Agg backend; importing
this module never touches a display.
"""

from __future__ import annotations

import math
from pathlib import Path

from disreqc.schema_generator import StarSchema


def _axes():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    figure, axes = plt.subplots(figsize=(6.4, 4.8), dpi=100)
    axes.set_xlim(-2.2, 2.2)
    axes.set_ylim(-1.7, 1.7)
    axes.set_axis_off()
    return figure, axes, plt


def render_star_figure(schema: StarSchema, path: Path | str) -> Path:
    """Draw one schema and write it to `path` as a PNG."""
    figure, axes, plt = _axes()
    fact = schema.fact
    dims = fact.dimension_refs
    for index, name in enumerate(dims):
        angle = 2 * math.pi * index / max(len(dims), 1)
        x, y = 1.6 * math.cos(angle), 1.2 * math.sin(angle)
        axes.plot([0, x], [0, y], color="0.6", linewidth=1, zorder=1)
        axes.text(
            x,
            y,
            name,
            ha="center",
            va="center",
            fontsize=9,
            zorder=2,
            bbox={"boxstyle": "ellipse", "facecolor": "white", "edgecolor": "0.2"},
        )
    label = fact.name + "\n" + "\n".join(m.name for m in fact.measures)
    axes.text(
        0,
        0,
        label,
        ha="center",
        va="center",
        fontsize=10,
        zorder=3,
        bbox={"boxstyle": "square", "facecolor": "lightyellow", "edgecolor": "0.2"},
    )
    path = Path(path)
    figure.savefig(path, format="png")
    plt.close(figure)
    return path


def save_star_figures(schemas: list[StarSchema], out_dir: Path | str) -> list[Path]:
    """Write one `<fact name>.png` per schema into `out_dir`."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return [
        render_star_figure(schema, out_dir / f"{schema.fact.name}.png")
        for schema in sorted(schemas, key=lambda s: s.fact.name)
    ]
