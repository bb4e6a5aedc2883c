"""Figure rendering for CLI reports; written to files, never shown."""

from __future__ import annotations

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .geometry import boundary_radius


def _unit_circle(ax):
    angles = np.linspace(0.0, 2.0 * np.pi, 512)
    ax.plot(np.cos(angles), np.sin(angles), color="black", lw=0.8, ls="--",
            label="unit circle")


def save_boundary_figure(orders, path: str, points: int = 720) -> None:
    """Attainable-region boundary curves for the given orders."""
    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    angles = np.linspace(0.0, 2.0 * np.pi, points + 1)
    for n in orders:
        radii = np.array([boundary_radius(n, th) for th in angles])
        ax.plot(radii * np.cos(angles), radii * np.sin(angles), lw=1.2,
                label=f"n = {n}")
    _unit_circle(ax)
    ax.set_aspect("equal")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_envelope_figure(n: int, path: str, family_size: int = 24,
                         points: int = 720) -> None:
    """Envelope picture: the curve family and the boundary it wraps."""
    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    if n == 3:
        angles = np.linspace(0.0, 2.0 * np.pi, points + 1)
        for t in np.linspace(0.05, 0.95, family_size):
            radii = t * (1.0 - t * t) / (2.0 * (1.0 - t * np.cos(angles)))
            ax.plot(radii * np.cos(angles), radii * np.sin(angles),
                    color="0.8", lw=0.5)
    elif n == 4:
        angles = np.linspace(0.0, 4.0 * np.pi, 2 * points + 1)
        for t in np.linspace(0.05, 0.95, family_size):
            radii = (1.0 - t * t) ** 2 / (4.0 * (1.0 - t * np.cos(angles / 2.0)) ** 2)
            ax.plot(radii * np.cos(angles), radii * np.sin(angles),
                    color="0.8", lw=0.5)
    else:
        raise ValueError(f"envelope figures exist only for n in {{3, 4}}, got {n}")
    angles = np.linspace(0.0, 2.0 * np.pi, points + 1)
    radii = np.array([boundary_radius(n, th) for th in angles])
    ax.plot(radii * np.cos(angles), radii * np.sin(angles), color="C0", lw=1.5,
            label=f"boundary, n = {n}")
    ax.set_aspect("equal")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_overlap_figure(samples: np.ndarray, d: int, path: str) -> None:
    """Scatter of sampled overlaps inside the unit disk."""
    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    ax.plot(samples.real, samples.imag, ",", color="C0", alpha=0.5)
    _unit_circle(ax)
    ax.set_aspect("equal")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(f"overlap samples, d = {d}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
