"""
Phase-portrait figures for the DA harness.

Figures are built on a bare ``matplotlib.figure.Figure`` (no pyplot state) and
saved with a fixed SVG hash salt and no date stamp, so identical inputs give
byte-identical files.  Each fixed-point glyph is its own artist with
``gid="fixed-point-<i>"``, which lets tests count glyphs by parsing the SVG.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib
import numpy as np
from matplotlib.figure import Figure

from .dasim import FixedPointKind, FixedPointRecord, split_at_wraps, wrap

GLYPHS = {
    FixedPointKind.SOURCE: dict(marker="o", color="#d62728", label="source"),
    FixedPointKind.SINK: dict(marker="o", color="#1f77b4", label="sink"),
    FixedPointKind.SADDLE: dict(marker="X", color="black", label="saddle"),
    FixedPointKind.UNRESOLVED: dict(marker="d", color="grey", label="unresolved"),
}

RC = {
    "svg.hashsalt": "surfdecomp",
    "svg.fonttype": "path",
    "font.size": 9,
    "axes.linewidth": 0.8,
}


def phase_portrait_figure(cloud, fixed_points: Sequence[FixedPointRecord],
                          segments: Sequence[np.ndarray] = (), title: str | None = None) -> Figure:
    with matplotlib.rc_context(RC):
        fig = Figure(figsize=(5.5, 5.5))
        ax = fig.add_subplot(1, 1, 1)
        ax.set_xlim(0, 1)
        ax.set_ylim(0, 1)
        ax.set_aspect("equal")
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        if title:
            ax.set_title(title)

        cloud = np.asarray(cloud, dtype=float).reshape(-1, 2)
        if len(cloud):
            ax.plot(cloud[:, 0], cloud[:, 1], ",", color="#555555", alpha=0.6,
                    rasterized=True, gid="attractor-cloud")

        for i, seg in enumerate(segments):
            for j, piece in enumerate(split_at_wraps(wrap(seg))):
                ax.plot(piece[:, 0], piece[:, 1], "-", color="#2ca02c", lw=0.6,
                        gid=f"unstable-{i}-{j}")

        seen = set()
        for i, fp in enumerate(fixed_points):
            style = dict(GLYPHS[fp.kind])
            label = style.pop("label")
            ax.plot([fp.location.x], [fp.location.y], linestyle="none", markersize=8,
                    markeredgecolor="white", markeredgewidth=0.6, zorder=5, clip_on=False,
                    label=None if label in seen else label, gid=f"fixed-point-{i}", **style)
            seen.add(label)
        if seen:
            ax.legend(loc="upper right", fontsize=7, framealpha=0.9)
    return fig


def render_phase_portrait(cloud, fixed_points: Sequence[FixedPointRecord],
                          segments: Sequence[np.ndarray], out: str | Path,
                          title: str | None = None) -> Path:
    """Write the portrait; the format follows the suffix (SVG unless ``.png``/``.pdf``)."""
    out = Path(out)
    fig = phase_portrait_figure(cloud, fixed_points, segments, title)
    fmt = out.suffix.lstrip(".").lower() or "svg"
    metadata = {"svg": {"Date": None}, "pdf": {"CreationDate": None}}.get(fmt)
    with matplotlib.rc_context(RC):
        fig.savefig(out, format=fmt, metadata=metadata, dpi=150)
    return out
