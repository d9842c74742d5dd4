"""Edge-normal loops: closed polygons with vertices on distinct v-rays whose
edges are perpendicular to distinct u directions.

Along a loop ``x_t = s_t v[i_t]`` the edge ``[x_t, x_{t+1}]`` is perpendicular
to ``u[j_t]``, which fixes ``s_{t+1} / s_t = (u.v[i_t]) / (u.v[i_{t+1}])``.
The loop closes exactly when the product of these ratios is 1, i.e. when
assigning each ``u[j_t]`` to ``v[i_t]`` or to ``v[i_{t+1}]`` gives the same
assignment value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .assignment import Hop
from .core import DEFAULT_TOL, Instance, Tolerances, check_capacity
from .errors import InconsistentCertificate, NonPositiveDot, SearchBudgetExceeded

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True, eq=False)
class LoopCertificate:
    v_indices: tuple[int, ...]
    u_indices: tuple[int, ...]
    scalars: np.ndarray
    vertices: np.ndarray
    closure_residual: float
    perpendicular_residual: float

    def to_dict(self) -> dict:
        return {
            "v_cycle": list(self.v_indices),
            "u_cycle": list(self.u_indices),
            "scalars": self.scalars.tolist(),
        }

    def key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return canonical_key(self.v_indices, self.u_indices)


@dataclass(frozen=True)
class NotClosed:
    residual: float


def canonical_key(v_indices: Sequence[int], u_indices: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Representative of a loop up to rotation and reversal."""
    v, u = list(v_indices), list(u_indices)
    r = v.index(min(v))
    v, u = v[r:] + v[:r], u[r:] + u[:r]
    fwd = (tuple(v), tuple(u))
    rev = (tuple([v[0]] + v[:0:-1]), tuple(u[::-1]))
    return min(fwd, rev)


def build_loop(
    inst: Instance, v_indices: Sequence[int], u_indices: Sequence[int], tol: Tolerances = DEFAULT_TOL
) -> LoopCertificate | NotClosed:
    vi = tuple(int(i) for i in v_indices)
    uj = tuple(int(j) for j in u_indices)
    l = len(vi)
    if l < 2 or len(uj) != l:
        raise ValueError("a loop needs l >= 2 vertices and one u per edge")
    if len(set(vi)) != l or len(set(uj)) != l:
        raise ValueError("loop vertices and edge normals must be distinct")
    dots = inst.dots()
    scal = np.ones(l)
    log_product = 0.0
    for t in range(l):
        j, a, b = uj[t], vi[t], vi[(t + 1) % l]
        da, db = dots[j, a], dots[j, b]
        if da <= tol.dot or db <= tol.dot:
            raise NonPositiveDot(f"u[{j}] does not face both v[{a}] and v[{b}]")
        log_product += math.log(da) - math.log(db)
        if t + 1 < l:
            scal[t + 1] = scal[t] * da / db
    closure = abs(math.expm1(log_product))
    x = scal[:, None] * inst.v[list(vi)]
    perp = 0.0
    for t in range(l):
        edge = x[t] - x[(t + 1) % l]
        perp = max(perp, abs(float(inst.u[uj[t]] @ edge)) / float(np.linalg.norm(edge)))
    if closure > tol.loop or perp > tol.loop:
        return NotClosed(max(closure, perp))
    scal.setflags(write=False)
    x.setflags(write=False)
    return LoopCertificate(vi, uj, scal, x, closure, perp)


def loop_from_cycle_certificate(
    inst: Instance, f: Sequence[int], cycle: Sequence[Hop], tol: Tolerances = DEFAULT_TOL
) -> LoopCertificate:
    """Turn a zero-cost exchange cycle (from the assignment residual graph or
    from a potentials negative-cycle certificate) into an edge-normal loop."""
    f = check_capacity(inst, f)
    l = len(cycle)
    for t, hop in enumerate(cycle):
        if f[hop.j] != hop.src or cycle[(t + 1) % l].src != hop.dst:
            raise InconsistentCertificate(f"hop {t} does not chain with the assignment")
    dots = inst.dots()
    if any(dots[h.j, h.src] <= tol.dot or dots[h.j, h.dst] <= tol.dot for h in cycle):
        raise InconsistentCertificate("cycle uses a non-positive pairing")
    diff = math.fsum(math.log(dots[h.j, h.src]) - math.log(dots[h.j, h.dst]) for h in cycle)
    if abs(diff) > tol.tie * l:
        raise InconsistentCertificate(f"cycle value difference {diff!r} is not zero")
    loop = build_loop(inst, [h.src for h in cycle], [h.j for h in cycle], tol)
    if isinstance(loop, NotClosed):
        raise InconsistentCertificate(f"zero-sum cycle failed to close (residual {loop.residual!r})")
    return loop


def search_loops(
    inst: Instance, max_len: int, tol: Tolerances = DEFAULT_TOL, budget: int = DEFAULT_BUDGET
) -> list[LoopCertificate]:
    """All edge-normal loops with 2..max_len vertices, one per equivalence class.

    Exhaustive depth-first search over simple v-cycles rooted at their smallest
    index with injective u labels.  Exponential; meant for small instances.
    """
    m = inst.m
    max_len = min(max_len, m)
    dots = inst.dots()
    pos = dots > tol.dot
    logd = np.where(pos, np.log(np.where(pos, dots, 1.0)), -np.inf)
    # hops[a] = [(j, b)] with u[j] facing both v[a] and v[b]
    hops = [[(j, b) for j in range(inst.k) if pos[j, a] for b in range(m) if b != a and pos[j, b]] for a in range(m)]
    found: dict = {}
    expansions = 0

    def dfs(root, path_v, path_u, used_u, logsum):
        nonlocal expansions
        cur = path_v[-1]
        for j, b in hops[cur]:
            if j in used_u:
                continue
            expansions += 1
            if expansions > budget:
                raise SearchBudgetExceeded(f"loop search exceeded {budget} expansions")
            s = logsum + logd[j, cur] - logd[j, b]
            if b == root:
                if len(path_v) >= 2 and abs(math.expm1(s)) <= tol.loop:
                    key = canonical_key(path_v, path_u + [j])
                    if key not in found:
                        cert = build_loop(inst, key[0], key[1], tol)
                        if isinstance(cert, LoopCertificate):
                            found[key] = cert
            elif b > root and b not in path_v and len(path_v) < max_len:
                used_u.add(j)
                dfs(root, path_v + [b], path_u + [j], used_u, s)
                used_u.discard(j)

    for root in range(m):
        dfs(root, [root], [], set(), 0.0)
    return [found[key] for key in sorted(found)]
