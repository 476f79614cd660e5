"""Matplotlib renders of blocks, assemblies, graphs and approximations, written to files."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from mpl_toolkits.mplot3d.art3d import Poly3DCollection  # noqa: E402

FRAME_COLOR = "#9a9a9a"
FREE_COLORS = ("#e07b39", "#3a7dc9", "#5aa35a", "#c9b03a", "#a05ac9", "#c95a7d")


def _tris(mesh) -> list:
    if hasattr(mesh, "triangle_points"):
        mesh = mesh.triangle_points()
    elif hasattr(mesh, "triangles") and not hasattr(mesh, "vertices"):
        mesh = mesh.triangles
    return [[tuple(float(x) for x in p) for p in t] for t in mesh]


def _axes3d():
    fig = plt.figure(figsize=(6, 6))
    ax = fig.add_subplot(projection="3d")
    return fig, ax


def _finish(fig, ax, pts, path, title):
    if pts:
        lo = [min(p[k] for p in pts) for k in range(3)]
        hi = [max(p[k] for p in pts) for k in range(3)]
        r = max(h - l for l, h in zip(lo, hi)) / 2 or 1.0
        mid = [(l + h) / 2 for l, h in zip(lo, hi)]
        ax.set_xlim(mid[0] - r, mid[0] + r)
        ax.set_ylim(mid[1] - r, mid[1] + r)
        ax.set_zlim(mid[2] - r, mid[2] + r)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("z")
    if title:
        ax.set_title(title)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)


def plot_meshes(groups, path, title: str = "") -> None:
    """Render (triangles, color) pairs into one 3D figure."""
    fig, ax = _axes3d()
    pts = []
    for mesh, color in groups:
        tris = _tris(mesh)
        pts += [p for t in tris for p in t]
        ax.add_collection3d(Poly3DCollection(tris, facecolor=color, edgecolor="k",
                                             linewidths=0.3, alpha=0.9))
    _finish(fig, ax, pts, path, title)


def plot_block(mesh, path, title: str = "") -> None:
    plot_meshes([(mesh, FREE_COLORS[0])], path, title)


def plot_assembly(meshes, frame_flags, path, title: str = "") -> None:
    groups = []
    for k, (mesh, is_frame) in enumerate(zip(meshes, frame_flags)):
        groups.append((mesh, FRAME_COLOR if is_frame else FREE_COLORS[k % len(FREE_COLORS)]))
    plot_meshes(groups, path, title)


def plot_graph(graph, path, frame=(), positions=None, title: str = "") -> None:
    """Draw an assembly graph; grid coordinates are used as positions when given."""
    import networkx as nx

    g = graph.to_networkx() if hasattr(graph, "to_networkx") else graph
    pos = positions or nx.spring_layout(g, seed=0)
    frame = set(frame)
    fig, ax = plt.subplots(figsize=(6, 6))
    colors = [FRAME_COLOR if v in frame else FREE_COLORS[0] for v in g.nodes]
    nx.draw_networkx(g, pos=pos, ax=ax, node_color=colors, font_size=8, node_size=250)
    ax.set_axis_off()
    if title:
        ax.set_title(title)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)


def plot_cells(cells, path, title: str = "") -> None:
    from .blocks import boundary_triangles

    plot_meshes([(boundary_triangles(cells), FREE_COLORS[1])], path, title)
