"""Polytopes ``conv{alpha_i v_i}``, their vertex cones and the functional Phi."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .assignment import assignment_value
from .core import DEFAULT_TOL, Instance, Tolerances, check_capacity
from .errors import BoundaryHit, InvalidPolytope, UnsupportedDimensionForFacets
from .feasibility import is_concentrated_on_closed_hemisphere


@dataclass(frozen=True, eq=False)
class Polytope:
    """Vertices ``alphas[i] * dirs[i]``; the origin must be interior.

    Solver output is normalized (max alpha = 1), but any positive radii are
    accepted so that dilations can be represented.
    """

    dirs: np.ndarray
    alphas: np.ndarray

    def __post_init__(self):
        dirs = np.array(self.dirs, dtype=float)
        alphas = np.array(self.alphas, dtype=float)
        if dirs.ndim != 2 or alphas.shape != (len(dirs),):
            raise InvalidPolytope("need one radius per direction")
        if not np.all(np.isfinite(alphas)) or np.any(alphas <= 0):
            raise InvalidPolytope("radii must be finite and positive")
        if is_concentrated_on_closed_hemisphere(dirs) is not None:
            raise InvalidPolytope("directions lie in a closed hemisphere; origin is not interior")
        dirs.setflags(write=False)
        alphas.setflags(write=False)
        object.__setattr__(self, "dirs", dirs)
        object.__setattr__(self, "alphas", alphas)

    @property
    def vertices(self) -> np.ndarray:
        return self.alphas[:, None] * self.dirs

    def normalized(self) -> Polytope:
        return Polytope(self.dirs, self.alphas / self.alphas.max())

    def scaled(self, t: float) -> Polytope:
        return Polytope(self.dirs, self.alphas * t)


@dataclass(frozen=True)
class Interior:
    index: int
    margin: float


@dataclass(frozen=True)
class Boundary:
    indices: tuple[int, ...]


ConeVerdict = Union[Interior, Boundary]


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    min_margin: float
    phi_gap: float
    first_bad: int | None = None
    reason: str = ""

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "min_margin": self.min_margin,
            "phi_gap": self.phi_gap,
            "first_bad": self.first_bad,
            "reason": self.reason,
        }


def support_value(P: Polytope, u) -> float:
    return float(np.max(P.vertices @ np.asarray(u, dtype=float)))


def radial_gauss_assignment(P: Polytope, u, tol: Tolerances = DEFAULT_TOL) -> ConeVerdict:
    """Which vertex cone contains ``u``: the unique maximizer of ``alpha_i v_i . u``."""
    s = P.vertices @ np.asarray(u, dtype=float)
    order = np.argsort(-s, kind="stable")
    top = float(s[order[0]])
    band = tol.tie * max(1.0, abs(top))
    second = float(s[order[1]]) if len(s) > 1 else -math.inf
    if top - second > band:
        return Interior(int(order[0]), top - second)
    return Boundary(tuple(int(i) for i in np.nonzero(s >= top - band)[0]))


def gauss_image_measure(P: Polytope, lam_dirs, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Integer weights pushed onto each vertex direction; raises BoundaryHit."""
    weights = np.zeros(len(P.dirs), dtype=int)
    for j, u in enumerate(np.atleast_2d(lam_dirs)):
        verdict = radial_gauss_assignment(P, u, tol)
        if isinstance(verdict, Boundary):
            raise BoundaryHit(j, verdict.indices)
        weights[verdict.index] += 1
    return weights


def compute_phi(P: Polytope, inst: Instance, tol: Tolerances = DEFAULT_TOL) -> float:
    """``sum_i mu_i log alpha_i + sum_j min_i log(1 / (alpha_i v_i . u_j))``.

    Returns +inf when some u_j has no positively-facing vertex.
    """
    total = math.fsum(w * math.log(a) for w, a in zip(inst.weights, P.alphas))
    s = inst.u @ P.vertices.T  # (k, m)
    for row in s:
        pos = row[row > tol.dot]
        if pos.size == 0:
            return math.inf
        total -= math.log(float(pos.max()))
    return total


def verify_solution(inst: Instance, P: Polytope, f: Sequence[int], tol: Tolerances = DEFAULT_TOL) -> VerificationReport:
    f = check_capacity(inst, f)
    a = assignment_value(inst, f, tol)
    phi = compute_phi(P, inst, tol)
    phi_gap = abs(phi + a) if math.isfinite(phi) and math.isfinite(a) else math.inf
    margins = []
    counts = np.zeros(inst.m, dtype=int)
    for j, u in enumerate(inst.u):
        verdict = radial_gauss_assignment(P, u, tol)
        if isinstance(verdict, Boundary):
            return VerificationReport(False, 0.0, phi_gap, j, f"u[{j}] on cone boundary {list(verdict.indices)}")
        if verdict.index != f[j]:
            return VerificationReport(
                False, verdict.margin, phi_gap, j, f"u[{j}] lies in cone {verdict.index}, expected {f[j]}"
            )
        margins.append(verdict.margin)
        counts[verdict.index] += 1
    if tuple(counts) != inst.weights:
        return VerificationReport(False, min(margins), phi_gap, None, "pushed-forward weights differ from mu")
    return VerificationReport(True, min(margins), phi_gap)


def export_geometry(P: Polytope, facets: bool = False) -> tuple[np.ndarray, np.ndarray | None]:
    """Vertices and, for n = 3 only, an outward counterclockwise triangulation."""
    verts = P.vertices
    if not facets:
        return verts, None
    if verts.shape[1] != 3:
        raise UnsupportedDimensionForFacets(f"facets are only produced for n = 3, got n = {verts.shape[1]}")
    from scipy.spatial import ConvexHull

    hull = ConvexHull(verts)
    tris = []
    for a, b, c in hull.simplices:
        normal = np.cross(verts[b] - verts[a], verts[c] - verts[a])
        # origin is interior, so the outward normal points away from it
        if normal @ verts[a] < 0:
            b, c = c, b
        tris.append((int(a), int(b), int(c)))
    return verts, np.array(sorted(tris))


def to_obj(P: Polytope) -> str:
    verts, tris = export_geometry(P, facets=True)
    lines = [f"v {x!r} {y!r} {z!r}" for x, y, z in verts.tolist()]
    lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in tris.tolist()]
    return "\n".join(lines) + "\n"
