"""Trajectory figures rendered with matplotlib.

Artists carry SVG ids (``obstacle-j``, ``trajectory-robot-i``,
``waypoint-m-robot-i``) so rendered files can be inspected programmatically.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib
from matplotlib.figure import Figure

from .configuration import Configuration, ProblemSpec
from .planner import sample_times
from .sections import PiecewisePath

DPI = 100

STYLE = {
    "svg.hashsalt": "seqplan",
    "svg.fonttype": "path",
    "font.size": 9,
    "axes.linewidth": 0.8,
    "lines.linewidth": 1.4,
}


def plot_trajectories(
    spec: ProblemSpec,
    path: PiecewisePath,
    waypoints: Sequence[Configuration],
    samples: int = 801,
    axes: tuple[int, int] = (0, 1),
    width: int = 800,
    height: int = 600,
) -> Figure:
    """Robot trajectories projected onto two coordinates, obstacles and waypoints marked."""
    a, b = axes
    taus = sample_times(path, samples)
    values = path.evaluate(taus)
    colors = matplotlib.colormaps["tab10"].colors

    fig = Figure(figsize=(width / DPI, height / DPI), dpi=DPI)
    ax = fig.add_subplot()
    for i in range(spec.k):
        color = colors[i % len(colors)]
        ax.plot(values[:, i, a], values[:, i, b], color=color, label=f"robot {i + 1}", gid=f"trajectory-robot-{i + 1}")
        for m, w in enumerate(waypoints, start=1):
            ax.plot(
                w.points[i, a], w.points[i, b], marker="o", markersize=5, color=color,
                linestyle="none", gid=f"waypoint-{m}-robot-{i + 1}",
            )
    for j, q in enumerate(spec.obstacles, start=1):
        ax.plot(q[a], q[b], marker="X", markersize=8, color="black", linestyle="none", gid=f"obstacle-{j}")
        ax.annotate(f"q{j}", (q[a], q[b]), textcoords="offset points", xytext=(4, -10))
    ax.axhline(0.0, color="0.8", linewidth=0.6, zorder=0)
    ax.set_xlabel(f"x{a + 1}")
    ax.set_ylabel(f"x{b + 1}")
    ax.set_aspect("equal", adjustable="datalim")
    ax.legend(loc="upper right", frameon=False)
    fig.tight_layout()
    return fig


def save_figure(fig: Figure, out: str | Path) -> None:
    out = Path(out)
    fmt = out.suffix.lstrip(".").lower() or "svg"
    metadata = {"Date": None} if fmt == "svg" else None
    with matplotlib.rc_context(STYLE):
        fig.savefig(out, format=fmt, metadata=metadata)


def render_trajectories(spec, path, waypoints, out, **kwargs) -> None:
    with matplotlib.rc_context(STYLE):
        fig = plot_trajectories(spec, path, waypoints, **kwargs)
        save_figure(fig, out)
