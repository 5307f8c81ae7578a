"""Figures for scaling reports and generated matrices."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .harness import ScalingReport  # noqa: E402

_STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
}


def plot_scaling(report: ScalingReport, path, metric: str = "ratio") -> None:
    """One panel per strategy: ``metric`` against m, a line per R.

    Each line shows the worst value over J at every m.
    """
    strategies = sorted({p.strategy for p in report.grid})
    with plt.rc_context(_STYLE):
        fig, axes = plt.subplots(
            1, max(1, len(strategies)), figsize=(3.4 * max(1, len(strategies)), 2.8),
            sharey=True, squeeze=False,
        )
        for ax, strategy in zip(axes[0], strategies):
            by_r: dict[int, dict[int, float]] = {}
            for p in report.points(strategy):
                if p.m == 0:
                    continue
                row = by_r.setdefault(p.R, {})
                row[p.m] = max(row.get(p.m, 0.0), getattr(p, metric))
            cmap = plt.get_cmap("viridis", max(2, len(by_r)))
            for i, R in enumerate(sorted(by_r)):
                ms = sorted(by_r[R])
                ax.plot(ms, [by_r[R][m] for m in ms], lw=0.8, color=cmap(i), label=f"R={R}")
            ax.set_xscale("log")
            ax.set_xlabel("m")
            ax.set_title(strategy)
        axes[0][0].set_ylabel(
            "writes / (R m (log2 m + 1))" if metric == "ratio" else "writes / (R m)"
        )
        axes[0][-1].legend(frameon=False, ncol=1)
        fig.tight_layout()
        fig.savefig(path, dpi=150)
        plt.close(fig)


def plot_matrix(mat, path, title: str | None = None) -> None:
    mat = np.asarray(mat)
    rows, cols = mat.shape
    with plt.rc_context(_STYLE):
        width = min(12.0, max(2.5, cols * 0.12 + 1))
        height = min(6.0, max(1.5, rows * 0.25 + 0.8))
        fig, ax = plt.subplots(figsize=(width, height))
        ax.imshow(mat, cmap="Greys", vmin=0, vmax=1, aspect="auto", interpolation="nearest")
        ax.set_xlabel("column")
        ax.set_ylabel("row")
        if title:
            ax.set_title(title)
        fig.tight_layout()
        fig.savefig(path, dpi=150)
        plt.close(fig)
