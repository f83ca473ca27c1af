"""Figure output for the CLI report paths.

Figures are written straight to files with the Agg backend; nothing here
opens a window.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .metrics import QualityReport  # noqa: E402

STYLE = {
    "font.family": "serif",
    "font.size": 9,
    "axes.titlesize": 9,
    "axes.labelsize": 9,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "legend.fontsize": 8,
    "legend.frameon": False,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}

MEASURES = ("ct", "en", "sf", "cf")


def plot_panels(images: list, titles: list[str], path: str, ncols: int | None = None) -> None:
    """Save images side by side; 2-D planes are drawn in gray."""
    n = len(images)
    ncols = ncols or n
    nrows = int(np.ceil(n / ncols))
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(nrows, ncols, figsize=(2.2 * ncols, 2.2 * nrows), squeeze=False)
        for ax in axes.ravel():
            ax.axis("off")
        for ax, img, title in zip(axes.ravel(), images, titles):
            img = np.clip(np.asarray(img, dtype=float), 0.0, 1.0)
            if img.ndim == 2:
                ax.imshow(img, cmap="gray", vmin=0.0, vmax=1.0, interpolation="nearest")
            else:
                ax.imshow(img, interpolation="nearest")
            ax.set_title(title)
        fig.savefig(path)
        plt.close(fig)


def plot_metrics(reports: list[QualityReport], path: str) -> None:
    """Grouped bars, one panel per measure, one bar per report."""
    labels = [r.method if not r.image else f"{r.image}\n{r.method}" if r.method else r.image
              for r in reports]
    x = np.arange(len(reports))
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(1, 4, figsize=(9.0, 2.6))
        for ax, key in zip(axes, MEASURES):
            vals = [getattr(r, key) for r in reports]
            ax.bar(x, vals, color="0.35", width=0.6)
            ax.set_title(key.upper())
            ax.set_xticks(x)
            ax.set_xticklabels(labels, rotation=45, ha="right")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
