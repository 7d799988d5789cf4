"""Figure rendering for the report paths.

Each function writes one figure straight to an image file next to the
delimited output; nothing is shown interactively.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .datared import ReducedPoint
from .fidelity import G_MAX, G_MIN, mdm_bound


def _frontier(n_points: int = 400) -> tuple[np.ndarray, np.ndarray]:
    g = np.linspace(G_MIN, G_MAX, n_points)
    return g, np.array([mdm_bound(float(x)) for x in g])


def _tradeoff_axes(ax) -> None:
    ax.set_xlabel("average estimation fidelity $G$")
    ax.set_ylabel("average operation fidelity $F$")
    ax.set_xlim(0.48, 0.69)
    ax.set_ylim(0.6, 1.05)
    ax.grid(True, alpha=0.3)


def save_bound_figure(path, n_points: int = 400) -> None:
    """Render the optimal trade-off frontier."""
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    g, f = _frontier(n_points)
    ax.plot(g, f, "k-", label="optimal trade-off")
    _tradeoff_axes(ax)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=160)
    plt.close(fig)


def save_sweep_figure(path, rows: list[dict]) -> None:
    """Render analytic sweep points on top of the frontier.

    ``rows`` are dicts with keys phi_deg, g_avg, f_avg.
    """
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    g, f = _frontier()
    ax.plot(g, f, "k-", label="optimal trade-off")
    ax.plot(
        [r["g_avg"] for r in rows],
        [r["f_avg"] for r in rows],
        "o",
        color="tab:blue",
        label="analytic sweep",
    )
    _tradeoff_axes(ax)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=160)
    plt.close(fig)


def save_tradeoff_figure(path, points: list[ReducedPoint]) -> None:
    """Render reduced data points with run-to-run error bars over the frontier."""
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    g, f = _frontier()
    ax.plot(g, f, "k-", label="optimal trade-off")
    ax.errorbar(
        [p.g_avg for p in points],
        [p.f_avg for p in points],
        xerr=[p.g_std for p in points],
        yerr=[p.f_std for p in points],
        fmt="s",
        color="tab:red",
        markersize=5,
        capsize=3,
        label="reduced counts",
    )
    _tradeoff_axes(ax)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=160)
    plt.close(fig)
