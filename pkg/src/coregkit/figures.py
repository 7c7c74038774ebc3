"""Matplotlib renderings of Newton polygons and dual-complex 1-skeletons."""
from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .dualcx import DualComplex, dimension, euler  # noqa: E402
from .polyring import Germ, format_germ  # noqa: E402


def _lower_hull(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Compact faces of the Newton polygon, from the x1-axis side to the x2-axis side."""
    pts = sorted(set(points))
    hull: list[tuple[int, int]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    # keep only the strictly decreasing part
    out = [hull[0]]
    for p in hull[1:]:
        if p[1] < out[-1][1]:
            out.append(p)
    return out


def newton_polygon(g: Germ, path: str | Path, title: str | None = None) -> Path:
    if g.nvars != 2:
        raise ValueError("Newton polygons are drawn for two variables")
    support = [(e[0], e[1]) for e in g.terms]
    fig, ax = plt.subplots(figsize=(4, 4))
    xs, ys = zip(*support) if support else ((), ())
    ax.scatter(xs, ys, color="black", zorder=3)
    if support:
        hull = _lower_hull(support)
        hx, hy = zip(*hull)
        ax.plot(hx, hy, color="tab:blue", lw=2)
        top = max(max(xs), max(ys)) + 1
        ax.plot([hull[0][0], hull[0][0]], [hull[0][1], top], color="tab:blue", lw=1, ls="--")
        ax.plot([hull[-1][0], top], [hull[-1][1], hull[-1][1]], color="tab:blue", lw=1, ls="--")
        ax.set_xlim(-0.5, top)
        ax.set_ylim(-0.5, top)
    ax.set_xlabel("exponent of x1")
    ax.set_ylabel("exponent of x2")
    ax.set_title(title or format_germ(g), fontsize=9)
    ax.grid(True, alpha=0.3)
    ax.set_aspect("equal")
    path = Path(path)
    fig.savefig(path, dpi=100, bbox_inches="tight")
    plt.close(fig)
    return path


def complex_skeleton(dc: DualComplex, path: str | Path, title: str | None = None) -> Path:
    names = dc.config.components
    m = len(names)
    pos = [(math.cos(2 * math.pi * i / m), math.sin(2 * math.pi * i / m)) for i in range(m)]
    fig, ax = plt.subplots(figsize=(4, 4))
    for tri in dc.cells.get(2, ()):
        ax.fill([pos[i][0] for i in tri.stratum], [pos[i][1] for i in tri.stratum], color="tab:orange", alpha=0.15)
    edges: dict[tuple[int, ...], int] = {}
    for cell in dc.cells.get(1, ()):
        edges[cell.stratum] = edges.get(cell.stratum, 0) + 1
    for (i, j), count in edges.items():
        (x0, y0), (x1, y1) = pos[i], pos[j]
        for k in range(count):
            bend = (k - (count - 1) / 2) * 0.25
            mx, my = (x0 + x1) / 2 - bend * (y1 - y0), (y0 + y1) / 2 + bend * (x1 - x0)
            ax.plot([x0, mx, x1], [y0, my, y1], color="tab:blue")
    ax.scatter([p[0] for p in pos], [p[1] for p in pos], color="black", zorder=3)
    for (x, y), name in zip(pos, names):
        ax.annotate(name, (x, y), textcoords="offset points", xytext=(6, 6))
    ax.set_title(title or f"dim {dimension(dc)}, chi {euler(dc)}", fontsize=9)
    ax.set_axis_off()
    ax.set_aspect("equal")
    path = Path(path)
    fig.savefig(path, dpi=100, bbox_inches="tight")
    plt.close(fig)
    return path


def render_artifacts(artifacts: dict[str, dict], outdir: str | Path, prefix: str = "") -> list[Path]:
    """One file per plottable step artifact: 2-variable germs and dual complexes."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = []
    for step, items in sorted(artifacts.items()):
        g = items.get("germ")
        if isinstance(g, Germ) and g.nvars == 2 and not g.is_zero():
            paths.append(newton_polygon(g, outdir / f"{prefix}{step}_newton.png"))
        dc = items.get("complex")
        if isinstance(dc, DualComplex):
            paths.append(complex_skeleton(dc, outdir / f"{prefix}{step}_complex.png"))
    return paths
