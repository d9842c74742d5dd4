"""Matplotlib figures for reports.  Everything renders straight to files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from scipy.spatial import ConvexHull

from .core import Instance
from .polytope import Boundary, Polytope, radial_gauss_assignment

COLORS = plt.rcParams["axes.prop_cycle"].by_key()["color"]


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_polytope(inst: Instance, P: Polytope, path, title: str = "") -> None:
    """Planar: polygon, vertex rays and each u coloured by the cone that owns it.
    n = 3: surface of the hull with u arrows.  Higher n is not drawn."""
    verts = P.vertices
    if inst.n == 2:
        fig, ax = plt.subplots(figsize=(5, 5))
        hull = ConvexHull(verts)
        ring = list(hull.vertices) + [hull.vertices[0]]
        ax.fill(verts[ring, 0], verts[ring, 1], alpha=0.15, color="grey")
        ax.plot(verts[ring, 0], verts[ring, 1], color="black", lw=1)
        for i, x in enumerate(verts):
            ax.plot([0, x[0]], [0, x[1]], ":", color=COLORS[i % len(COLORS)], lw=0.8)
            ax.annotate(f"v{i}", x, textcoords="offset points", xytext=(4, 4))
        for j, u in enumerate(inst.u):
            verdict = radial_gauss_assignment(P, u)
            color = "red" if isinstance(verdict, Boundary) else COLORS[verdict.index % len(COLORS)]
            ax.arrow(0, 0, 1.2 * u[0], 1.2 * u[1], color=color, width=0.006, length_includes_head=True)
            ax.annotate(f"u{j}", 1.25 * u, color=color)
        ax.set_aspect("equal")
        ax.set_xlim(-1.4, 1.4)
        ax.set_ylim(-1.4, 1.4)
    elif inst.n == 3:
        fig = plt.figure(figsize=(6, 6))
        ax = fig.add_subplot(projection="3d")
        hull = ConvexHull(verts)
        ax.plot_trisurf(verts[:, 0], verts[:, 1], verts[:, 2], triangles=hull.simplices, alpha=0.3, color="grey")
        ax.scatter(*verts.T, color="black")
        ax.quiver(0, 0, 0, *inst.u.T, color="tab:red", length=1.2, normalize=True)
    else:
        raise ValueError("only n = 2 and n = 3 can be drawn")
    ax.set_title(title)
    _save(fig, path)


def plot_loop(inst: Instance, loop, path, title: str = "") -> None:
    """Planar edge-normal loop with the edge normals attached to edge midpoints."""
    if inst.n != 2:
        raise ValueError("loop figures are planar only")
    x = np.asarray(loop.vertices)
    ring = np.vstack([x, x[:1]])
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.plot(ring[:, 0], ring[:, 1], "-o", color="black")
    for t, j in enumerate(loop.u_indices):
        mid = 0.5 * (ring[t] + ring[t + 1])
        ax.arrow(*mid, *(0.3 * inst.u[j]), color="tab:red", width=0.005)
        ax.annotate(f"u{j}", mid + 0.32 * inst.u[j], color="tab:red")
    for t, i in enumerate(loop.v_indices):
        ax.annotate(f"v{i}", x[t], textcoords="offset points", xytext=(4, 4))
    ax.plot(0, 0, "+", color="grey")
    ax.set_aspect("equal")
    ax.set_title(title)
    _save(fig, path)


def plot_tally(tally: dict, path, title: str = "") -> None:
    keys = ["solvable", "nonunique", "ambiguous", "infeasible"]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.bar(keys, [tally[k] for k in keys], color=COLORS[: len(keys)])
    ax.set_ylabel(f"instances (of {tally['filtered']} filtered)")
    ax.set_title(title)
    _save(fig, path)


def plot_margins(margins, path, title: str = "") -> None:
    margins = np.asarray([m for m in margins if m > 0])
    fig, ax = plt.subplots(figsize=(5, 3.5))
    if margins.size:
        ax.hist(np.log10(margins), bins=20, color=COLORS[0])
    ax.set_xlabel("log10 minimal cone margin")
    ax.set_ylabel("count")
    ax.set_title(title)
    _save(fig, path)
