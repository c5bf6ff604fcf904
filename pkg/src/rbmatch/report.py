"""Figure rendering for result files (the report path of the CLI).

Kept separate from the harness: runs emit CSV only, and figures are drawn
from those files afterwards.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .errors import InvalidParams

_LABELS = {"dbma": "dbma (stand-in)", "so_bma": "so_bma (greedy static)"}

_PANELS = (
    ("routing_cost", "routing cost", "routing_cost"),
    ("total_cost", "total cost", "total_cost"),
    ("wall_time_s", "wall time [s]", "wall_time"),
)


def plot_sweep(rows, out_dir, stem: str = "sweep") -> list[Path]:
    """Draw per-algorithm curves over the degree cap from parsed result rows
    (mean rows only). Returns the written figure paths."""
    means = [r for r in rows if r["seed"] == "mean"]
    if not means:
        raise InvalidParams("no mean rows to plot")
    by_algo: dict[str, list[dict]] = {}
    for row in means:
        by_algo.setdefault(row["algorithm"], []).append(row)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for key, ylabel, suffix in _PANELS:
        fig, ax = plt.subplots(figsize=(5.0, 3.2))
        for algo in sorted(by_algo):
            points = sorted((r["b"], r[key]) for r in by_algo[algo])
            ax.plot([p[0] for p in points], [p[1] for p in points],
                    marker="o", label=_LABELS.get(algo, algo))
        ax.set_xlabel("degree cap b")
        ax.set_ylabel(ylabel)
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=8)
        fig.tight_layout()
        path = out_dir / f"{stem}_{suffix}.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)
    return written
