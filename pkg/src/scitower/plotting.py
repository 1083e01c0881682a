"""Matplotlib figures written next to the CSV/JSON reports."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# fixed salt and no timestamp keep SVG output byte-stable
plt.rcParams["svg.hashsalt"] = "scitower"
_METADATA = {"svg": {"Date": None}, "png": {"Software": None}, "pdf": {"CreationDate": None}}


def _save(fig, path):
    fmt = str(path).rsplit(".", 1)[-1].lower()
    fig.savefig(path, metadata=_METADATA.get(fmt), bbox_inches="tight")
    plt.close(fig)


def plot_stage(points, half_width: float, path, title: str = "", eigenvalues=None,
               eps: float | None = None):
    """Scatter of one tower stage over the grid extent."""
    fig, ax = plt.subplots(figsize=(5, 5))
    pts = np.asarray(points, dtype=complex)
    if pts.size:
        ax.scatter(pts.real, pts.imag, s=6, color="tab:blue", label="stage output")
    t = np.linspace(0, 2 * np.pi, 400)
    ax.plot(np.cos(t), np.sin(t), lw=0.6, color="0.6", ls="--")
    if eigenvalues is not None:
        ev = np.asarray(eigenvalues, dtype=complex)
        ax.scatter(ev.real, ev.imag, marker="x", color="tab:red", s=30, label="eigenvalues")
        if eps:
            for z in ev:
                ax.add_patch(plt.Circle((z.real, z.imag), eps, fill=False, lw=0.5,
                                        color="tab:red"))
    ax.set_xlim(-half_width, half_width)
    ax.set_ylim(-half_width, half_width)
    ax.set_aspect("equal")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    if title:
        ax.set_title(title)
    if pts.size or eigenvalues is not None:
        ax.legend(loc="upper right", fontsize=7)
    _save(fig, path)


def plot_convergence(distances, path):
    fig, ax = plt.subplots(figsize=(5, 3))
    xs = [i + 1 for i, d in enumerate(distances) if d is not None]
    ys = [d for d in distances if d is not None]
    ax.plot(xs, ys, "o-")
    ax.set_xlabel("stage transition")
    ax.set_ylabel("consecutive Hausdorff distance")
    _save(fig, path)


def plot_trace(trace, path, title: str = ""):
    fig, ax = plt.subplots(figsize=(6, 3))
    ax.step(range(len(trace)), trace, where="post")
    ax.set_xlabel("stage")
    ax.set_ylabel("value")
    if title:
        ax.set_title(title)
    _save(fig, path)


def plot_sgn_gap(rows, path):
    """Outcome-set size against input for each precision level."""
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for k in sorted({r["k"] for r in rows}):
        sel = sorted((r["input"], r["fram_outcomes"]) for r in rows if r["k"] == k)
        ax.step([x for x, _ in sel], [c for _, c in sel], where="mid", label=f"k={k}")
    ax.set_xlabel("input x")
    ax.set_ylabel("# FRAM outcomes")
    ax.legend(fontsize=7)
    _save(fig, path)
