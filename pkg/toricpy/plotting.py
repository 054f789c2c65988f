# -*- coding: utf-8 -*-
"""
Plotting
--------

SVG pictures of moment polytopes with marked fibers and of Newton
diagrams. Polytopes of dimension above two are drawn through the
projection onto a pair of coordinates; the outline is the convex hull
of the projected vertices.

The output is deterministic: the SVG hash salt is fixed and the date
metadata is dropped, so the same input always gives the same file.

"""
from __future__ import annotations

import logging
from typing import Optional, Sequence, Tuple

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
from scipy.spatial import ConvexHull

from toricpy.polytope import DelzantPolytope
from toricpy.series import ZPoly, newton_polygon

logger = logging.getLogger(__name__)

# Set plotting defaults
gray = '#757575'
plt.rcParams["mathtext.fontset"] = "cm"
plt.rcParams["text.color"] = gray
plt.rcParams["font.size"] = 12
plt.rcParams["xtick.color"] = gray
plt.rcParams["ytick.color"] = gray
plt.rcParams["axes.labelcolor"] = gray
plt.rcParams["axes.edgecolor"] = gray
plt.rcParams["axes.spines.right"] = False
plt.rcParams["axes.spines.top"] = False
plt.rcParams["svg.hashsalt"] = "toricpy"

SURVIVOR_COLOR = "#d95f02"
FIBER_COLOR = "#1b9e77"
FILL_COLOR = "#c6dbef"


def _as_float(points) -> np.ndarray:
    return np.array([[float(a) for a in p] for p in points], dtype=float)


def _outline(delta: DelzantPolytope, project: Tuple[int, int]) -> np.ndarray:
    verts = _as_float(delta.vertices)
    if delta.dim == 2 and project == (0, 1):
        center = verts.mean(axis=0)
        angles = np.arctan2(verts[:, 1] - center[1], verts[:, 0] - center[0])
        return verts[np.argsort(angles)]
    flat = verts[:, list(project)]
    hull = ConvexHull(flat)
    return flat[hull.vertices]


def plot_polytope(delta: DelzantPolytope, survivors: Sequence = (),
                  fibers: Sequence = (), project: Optional[Tuple[int, int]] = None,
                  title: Optional[str] = None, filename: Optional[str] = None):
    """Draw ``delta`` with probe survivors and critical fibers marked.

    Parameters
    ----------
    delta : DelzantPolytope
        Polytope of dimension 1, 2 or higher.
    survivors, fibers : sequences of points
        Marked in two colors; fibers are drawn larger so a survivor that
        is also a fiber stays visible.
    project : (int, int), optional
        Coordinates to project on. Required above dimension two,
        defaults to ``(0, 1)``.
    title : str, optional
        Figure title; the polytope label otherwise.
    filename : str, optional
        Where to save the SVG.

    Returns
    -------
    fig : matplotlib.figure.Figure

    """
    if delta.dim == 1:
        project = (0, 0)
    elif project is None:
        if delta.dim > 2:
            raise ValueError("a projection (i, j) is needed above dimension 2")
        project = (0, 1)
    if max(project) >= delta.dim or min(project) < 0:
        raise ValueError(f"projection {project} out of range")
    fig, ax = plt.subplots(figsize=(5, 5))
    if delta.dim == 1:
        lo, hi = (float(v[0]) for v in (delta.vertices[0], delta.vertices[-1]))
        ax.plot([lo, hi], [0, 0], color=gray, lw=2)
        ax.set_yticks([])
    else:
        outline = _outline(delta, project)
        ax.fill(outline[:, 0], outline[:, 1], color=FILL_COLOR, zorder=0)
        closed = np.vstack([outline, outline[:1]])
        ax.plot(closed[:, 0], closed[:, 1], color=gray, lw=1.5)
        ax.set_xlabel(f"$x_{project[0] + 1}$")
        ax.set_ylabel(f"$x_{project[1] + 1}$")
        ax.set_aspect("equal")
    for points, color, size, name in ((fibers, FIBER_COLOR, 80, "fiber"),
                                      (survivors, SURVIVOR_COLOR, 25,
                                       "survivor")):
        if len(points) == 0:
            continue
        pts = _as_float(points)
        ys = np.zeros(len(pts)) if delta.dim == 1 else pts[:, project[1]]
        ax.scatter(pts[:, project[0]], ys, s=size, color=color, label=name,
                   zorder=3)
    if len(survivors) or len(fibers):
        ax.legend(frameon=False, loc="upper right")
    ax.set_title(title or delta.label)
    if filename:
        save_svg(fig, filename)
    return fig


def plot_newton(P: ZPoly, title: str = "Newton polygon",
                filename: Optional[str] = None):
    """Points ``(i, nu(a_i))`` of ``P`` and its lower hull, slopes annotated."""
    polygon = newton_polygon(P)
    pts = _as_float(polygon.points)
    hull = _as_float(polygon.hull)
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.scatter(pts[:, 0], pts[:, 1], color=gray, zorder=2)
    ax.plot(hull[:, 0], hull[:, 1], color=SURVIVOR_COLOR, lw=2, zorder=1)
    for edge in polygon.edges:
        mid = [(float(a) + float(b))/2 for a, b in zip(edge.start, edge.end)]
        ax.annotate(f"{edge.slope}", mid, textcoords="offset points",
                    xytext=(4, 4), color=SURVIVOR_COLOR)
    ax.set_xlabel("degree in $z$")
    ax.set_ylabel("valuation")
    ax.set_title(title)
    if filename:
        save_svg(fig, filename)
    return fig


def save_svg(fig, filename: str):
    fig.savefig(filename, format="svg", metadata={"Date": None})
    plt.close(fig)
    logger.info("wrote %s", filename)
