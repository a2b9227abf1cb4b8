"""Figure rendering for decomposition reports.

Writes PNG files next to the rest of a report's output: entry-magnitude
heatmaps of the input against its reassembly, one heatmap per factor, and
the eigenvalue spectra with the pure-product weights.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .bipartite import BipartiteMatrix, partial_trace_A, partial_trace_B
from .matcore import herm_eig
from .report import DecompositionReport


def _heat(ax, mat, title):
    image = ax.imshow(np.abs(mat), cmap="viridis", interpolation="nearest")
    ax.set_title(title, fontsize=9)
    ax.set_xticks([])
    ax.set_yticks([])
    return image


def save_reassembly_figure(report: DecompositionReport, t: BipartiteMatrix, path) -> None:
    rebuilt = report.decomposition.reassemble().mat
    fig, axes = plt.subplots(1, 3, figsize=(9, 3))
    _heat(axes[0], t.mat, "input")
    _heat(axes[1], rebuilt, "reassembled")
    image = _heat(axes[2], rebuilt - t.mat, f"difference ({report.residual:.1e})")
    fig.colorbar(image, ax=axes[2], fraction=0.046)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_terms_figure(report: DecompositionReport, path) -> None:
    cd = report.decomposition
    fig, axes = plt.subplots(cd.p, 2, figsize=(5, 2.2 * cd.p), squeeze=False)
    for k, (a, b) in enumerate(cd.terms):
        _heat(axes[k][0], a, f"A_{k + 1}")
        _heat(axes[k][1], b, f"B_{k + 1}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_spectra_figure(report: DecompositionReport, t: BipartiteMatrix, path) -> None:
    tol = report.tolerances
    spec_t = herm_eig(t.mat, tol).values
    spec_a = herm_eig(partial_trace_B(t), tol).values
    spec_b = herm_eig(partial_trace_A(t), tol).values
    weights = sorted((w for w, _, _ in report.pure_product.terms), reverse=True)

    fig, axes = plt.subplots(1, 2, figsize=(8, 3))
    axes[0].plot(spec_t, "o-", label="T")
    axes[0].plot(spec_a, "s--", label="tr_B T")
    axes[0].plot(spec_b, "^--", label="tr_A T")
    axes[0].set_xlabel("index")
    axes[0].set_ylabel("eigenvalue")
    axes[0].legend(fontsize=8)
    axes[1].bar(range(1, len(weights) + 1), weights)
    axes[1].set_xlabel("pure product term")
    axes[1].set_ylabel("weight")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_figures(report: DecompositionReport, t: BipartiteMatrix, out_dir) -> list:
    """Render every report figure into ``out_dir``, returning the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, renderer in (
        ("reassembly.png", lambda p: save_reassembly_figure(report, t, p)),
        ("terms.png", lambda p: save_terms_figure(report, p)),
        ("spectra.png", lambda p: save_spectra_figure(report, t, p)),
    ):
        target = out / name
        renderer(target)
        paths.append(target)
    return paths
