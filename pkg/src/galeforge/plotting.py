"""Static SVG rendering with matplotlib (no pyplot, no global state)."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence, Union

import matplotlib

matplotlib.use("Agg")

from matplotlib.backends.backend_svg import FigureCanvasSVG  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402
from matplotlib.patches import Circle, Polygon  # noqa: E402

from .diagram import Color, Diagram  # noqa: E402

_RC = {"svg.hashsalt": "galeforge", "svg.fonttype": "none", "path.simplify": False}
_METADATA = {"Date": None, "Creator": "galeforge"}


def _save(fig: Figure, path: Union[str, Path]) -> None:
    FigureCanvasSVG(fig)
    with matplotlib.rc_context(_RC):
        fig.savefig(path, format="svg", metadata=_METADATA)


def render_diagram_svg(X: Diagram, path: Union[str, Path]) -> None:
    """Blacks as filled circles, whites hollow, the black cycle as a polygon."""
    xs = [float(X.pos(a).x) for a in X.labels]
    ys = [float(X.pos(a).y) for a in X.labels]
    span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    pad = 0.12 * span
    radius = 0.018 * span

    fig = Figure(figsize=(6, 6), dpi=72)
    ax = fig.add_axes((0, 0, 1, 1))
    ax.set_xlim(min(xs) - pad, min(xs) + span + pad)
    ax.set_ylim(min(ys) - pad, min(ys) + span + pad)
    ax.set_aspect("equal")
    ax.axis("off")

    if X.black_cycle:
        outline = [(float(X.pos(a).x), float(X.pos(a).y)) for a in X.black_cycle]
        ax.add_patch(Polygon(outline, closed=True, fill=False, edgecolor="0.4", linewidth=1.0, gid="outline"))
    for a in X.labels:
        p = X.pos(a)
        black = X.color(a) is Color.BLACK
        ax.add_patch(
            Circle(
                (float(p.x), float(p.y)),
                radius,
                facecolor="black" if black else "white",
                edgecolor="black",
                linewidth=1.2,
                zorder=3,
                gid=f"point-{a}",
            )
        )
        ax.text(float(p.x) + 1.4 * radius, float(p.y) + 1.4 * radius, a, fontsize=9, zorder=4)
    _save(fig, path)


def render_counts_svg(rows: Sequence[tuple[int, Sequence[int], Sequence[int]]], path: Union[str, Path]) -> None:
    """Per-``d`` f-vectors of built diagrams against the cyclic polytope.

    ``rows`` holds ``(d, observed, cyclic)``; one panel per ``d``.
    """
    fig = Figure(figsize=(4 * max(1, len(rows)), 3.2), dpi=72)
    for k, (d, observed, cyclic) in enumerate(rows):
        ax = fig.add_subplot(1, max(1, len(rows)), k + 1)
        sizes = list(range(1, len(cyclic) + 1))
        ax.bar([s - 0.2 for s in sizes], list(cyclic), width=0.4, color="0.75", label="cyclic")
        ax.bar([s + 0.2 for s in sizes], list(observed), width=0.4, color="0.2", label="built")
        ax.set_title(f"d = {d}")
        ax.set_xlabel("face size")
        ax.set_xticks(sizes)
        if k == 0:
            ax.set_ylabel("faces")
            ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    _save(fig, path)
