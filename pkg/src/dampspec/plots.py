"""Figure rendering for the CLI report paths.

Figures are a convenience companion to the delimited outputs, never the
canonical result; everything here draws from already-computed data.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

__all__ = [
    "save_spectrum_figure",
    "save_sweep_figure",
    "save_fem_figure",
    "save_gap_figure",
]


def save_spectrum_figure(values, path, argmax_value=None, alpha_hat=None, title=None):
    values = np.asarray(values)
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    ax.plot(values.real, values.imag, "x", ms=5, color="tab:blue")
    if argmax_value is not None:
        ax.plot(
            [np.real(argmax_value)], [np.imag(argmax_value)],
            "o", ms=11, mfc="none", mec="tab:red", mew=1.5,
        )
    if alpha_hat is not None:
        ax.axvline(alpha_hat, ls="--", lw=0.8, color="gray")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_sweep_figure(result, path):
    """mu_r against the first sweep parameter, one line per tail combination."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    x = [pt[0] for pt in result.grid]
    y = list(result.values)
    if len(result.param_names) == 1:
        ax.plot(x, y, "o-", color="tab:blue")
    else:
        groups = {}
        for pt, v in zip(result.grid, result.values):
            groups.setdefault(pt[1:], []).append((pt[0], v))
        for tail, pairs in groups.items():
            label = ", ".join(
                f"{n}={t:g}" for n, t in zip(result.param_names[1:], tail)
            )
            ax.plot([p for p, _ in pairs], [v for _, v in pairs], "o-", label=label)
        ax.legend(fontsize=8)
    ax.set_xlabel(result.param_names[0])
    ax.set_ylabel("mu_r")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_fem_figure(rows, path):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ks = [row["k"] for row in rows]
    ax.plot(ks, [row["n_exact"] for row in rows], "o", label="exact minimal")
    ax.plot(ks, [row["n_estimate"] for row in rows], "-", label="k^{3/2} estimate")
    ax.set_xlabel("frequency index k")
    ax.set_ylabel("required elements")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_gap_figure(delta, delta_ratio, path):
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8.0, 3.5))
    ax1.plot(np.arange(1, len(delta) + 1), delta, ".-")
    ax1.set_xlabel("k")
    ax1.set_ylabel("frequency gap")
    ax2.plot(np.arange(1, len(delta_ratio) + 1), delta_ratio, ".-")
    ax2.set_xlabel("k")
    ax2.set_ylabel("gap ratio")
    for ax in (ax1, ax2):
        ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
