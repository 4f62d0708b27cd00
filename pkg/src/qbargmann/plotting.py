"""Optional figures for the CLI report path (rendered off-screen with Agg)."""

from __future__ import annotations

import numpy as np


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def limits_figure(path: str, sweeps: dict[str, list[tuple[float, float]]], title: str = ""):
    """Log-log error against ``1 - q`` for each named sweep."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for label, rows in sweeps.items():
        h = np.array([1.0 - q for q, _ in rows])
        err = np.array([e for _, e in rows])
        keep = err > 0
        if np.any(keep):
            ax.loglog(h[keep], err[keep], "o-", ms=3, lw=1, label=label)
    ax.set_xlabel("1 - q")
    ax.set_ylabel("error vs classical limit")
    ax.invert_xaxis()
    ax.grid(True, which="both", lw=0.3)
    if ax.get_legend_handles_labels()[0]:
        ax.legend(fontsize=8)
    if title:
        ax.set_title(title, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def kernel_figure(path: str, K: np.ndarray, title: str = ""):
    """Modulus and phase of a kernel Gram matrix."""
    plt = _pyplot()
    fig, (a1, a2) = plt.subplots(1, 2, figsize=(8, 3.5))
    im1 = a1.imshow(np.abs(K), cmap="viridis", origin="lower")
    a1.set_title("|K(z_i, z_j)|", fontsize=9)
    fig.colorbar(im1, ax=a1, shrink=0.8)
    im2 = a2.imshow(np.angle(K), cmap="twilight", origin="lower", vmin=-np.pi, vmax=np.pi)
    a2.set_title("arg K(z_i, z_j)", fontsize=9)
    fig.colorbar(im2, ax=a2, shrink=0.8)
    for a in (a1, a2):
        a.set_xlabel("j")
        a.set_ylabel("i")
    if title:
        fig.suptitle(title, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def transform_figure(path: str, re: np.ndarray, im: np.ndarray, values: np.ndarray,
                     title: str = ""):
    """``|B f|`` over the z grid (``re``, ``im`` are the grid axes)."""
    plt = _pyplot()
    values = np.asarray(values).reshape(len(re), len(im))
    if len(re) > 1 and len(im) > 1:
        fig, ax = plt.subplots(figsize=(5, 4))
        mesh = ax.pcolormesh(re, im, np.abs(values).T, shading="nearest", cmap="magma")
        fig.colorbar(mesh, ax=ax, label="|B f(z)|")
        ax.set_xlabel("Re z")
        ax.set_ylabel("Im z")
    else:
        fig, ax = plt.subplots(figsize=(5, 3.5))
        axis, lab = (re, "Re z") if len(re) > 1 else (im, "Im z")
        flat = values.ravel()
        ax.plot(axis, flat.real, label="Re")
        ax.plot(axis, flat.imag, label="Im")
        ax.plot(axis, np.abs(flat), "k--", lw=0.8, label="abs")
        ax.set_xlabel(lab)
        ax.legend(fontsize=8)
    if title:
        ax.set_title(title, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
