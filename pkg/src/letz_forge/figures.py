"""Report figures rendered to image files next to the delimited outputs."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .datasets import DatasetStats
from .evaluation import EvalReport


def render_length_histogram(stats_by_split: dict[str, DatasetStats], path: str | Path) -> Path:
    """Word-count distribution per split as overlaid step histograms."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(7, 4))
    for name, stats in stats_by_split.items():
        if not stats.word_count_histogram:
            continue
        lengths = sorted(stats.word_count_histogram)
        counts = [stats.word_count_histogram[n] for n in lengths]
        ax.step(lengths, counts, where="mid", label=f"{name} (n={stats.total})")
        ax.fill_between(lengths, counts, step="mid", alpha=0.2)
    ax.set_xlabel("words per sample")
    ax.set_ylabel("samples")
    ax.set_title("Sample length distribution")
    if stats_by_split:
        ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_confusion_matrix(report: EvalReport, path: str | Path) -> Path:
    """Confusion counts as a heatmap, gold classes on rows."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    k = len(report.labels)
    size = max(4.0, 0.6 * k + 2.0)
    fig, ax = plt.subplots(figsize=(size, size))
    matrix = [list(row) for row in report.confusion]
    image = ax.imshow(matrix, cmap="Blues")
    ax.set_xticks(range(k), report.labels, rotation=45, ha="right")
    ax.set_yticks(range(k), report.labels)
    ax.set_xlabel("predicted")
    ax.set_ylabel("gold")
    ax.set_title(f"Confusion matrix (accuracy {report.accuracy:.3f})")
    peak = max((max(row) for row in matrix), default=0)
    for i in range(k):
        for j in range(k):
            color = "white" if peak and matrix[i][j] > peak / 2 else "black"
            ax.text(j, i, str(matrix[i][j]), ha="center", va="center", color=color)
    fig.colorbar(image, ax=ax, fraction=0.046, pad=0.04)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
