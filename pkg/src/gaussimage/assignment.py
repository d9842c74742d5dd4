"""Maximization of the assignment functional and uniqueness certificates.

The functional is ``A(f) = sum_j log(u_j . v_f(j))`` with ``-inf`` whenever a
paired dot product is not positive.  Maximizing it is a min-cost transport
from the k unit-supply u atoms to the m v atoms with demands ``mu_i`` and
costs ``-log(u_j . v_i)``; non-positive pairs are forbidden arcs, never large
finite costs.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .core import DEFAULT_TOL, Instance, Tolerances, check_capacity
from .errors import InfeasibleTransport, NotOptimal

Assignment = tuple[int, ...]


@dataclass(frozen=True)
class Hop:
    """u atom ``j`` leaves v atom ``src`` for v atom ``dst``."""

    j: int
    src: int
    dst: int


@dataclass(frozen=True)
class Unique:
    gap: float  # A(best) - A(second best), +inf if nothing else is finite


@dataclass(frozen=True)
class NonUnique:
    alternative: Assignment
    cycle: tuple[Hop, ...]
    gap: float


@dataclass(frozen=True)
class AmbiguousWithinTolerance:
    alternative: Assignment
    cycle: tuple[Hop, ...]
    gap: float


Uniqueness = Union[Unique, NonUnique, AmbiguousWithinTolerance]


@dataclass(frozen=True)
class MaximizerReport:
    best: Assignment
    value: float
    uniqueness: Uniqueness | None = None


def cost_matrix(inst: Instance, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """(k, m) matrix of ``-log(u_j . v_i)``; forbidden pairs are ``inf``."""
    dots = inst.dots()
    allowed = dots > tol.dot
    cost = np.full(dots.shape, np.inf)
    cost[allowed] = -np.log(np.minimum(dots[allowed], 1.0))
    return cost


def assignment_value(inst: Instance, f: Sequence[int], tol: Tolerances = DEFAULT_TOL) -> float:
    f = check_capacity(inst, f)
    dots = inst.dots()
    total = 0.0
    for j, i in enumerate(f):
        d = dots[j, i]
        if d <= tol.dot:
            return -math.inf
        total += math.log(min(d, 1.0))
    return total


def maximize_assignment(inst: Instance, tol: Tolerances = DEFAULT_TOL) -> MaximizerReport:
    """Optimal transport by successive shortest paths with node potentials.

    u atoms are routed one at a time in index order; each route is a Dijkstra
    shortest path (on reduced costs) to a v atom with spare capacity.  Ties
    resolve to the lowest node index, so runs are deterministic.
    """
    cost = cost_matrix(inst, tol)
    k, m = cost.shape
    assigned = np.full(k, -1)
    load = np.zeros(m, dtype=int)
    cap = np.array(inst.weights)
    # nodes 0..k-1 are u atoms, k..k+m-1 are v atoms
    pot = np.zeros(k + m)

    for root in range(k):
        dist = np.full(k + m, np.inf)
        prev = np.full(k + m, -1)
        done = np.zeros(k + m, dtype=bool)
        dist[root] = 0.0
        heap = [(0.0, root)]
        while heap:
            d, a = heapq.heappop(heap)
            if done[a]:
                continue
            done[a] = True
            if a < k:
                for i in range(m):
                    c = cost[a, i]
                    if math.isinf(c) or assigned[a] == i:
                        continue
                    b = k + i
                    nd = d + max(0.0, c + pot[a] - pot[b])
                    if nd < dist[b]:
                        dist[b], prev[b] = nd, a
                        heapq.heappush(heap, (nd, b))
            else:
                i = a - k
                for j in np.nonzero(assigned == i)[0]:
                    nd = d + max(0.0, -cost[j, i] + pot[a] - pot[j])
                    if nd < dist[j]:
                        dist[j], prev[j] = nd, a
                        heapq.heappush(heap, (nd, int(j)))
        open_v = [i for i in range(m) if load[i] < cap[i] and done[k + i]]
        if not open_v:
            raise InfeasibleTransport(f"u atom {root} cannot be routed to any v atom")
        target = min(open_v, key=lambda i: (dist[k + i], i))
        reach = dist[k + target]
        pot += np.minimum(np.where(np.isinf(dist), reach, dist), reach)

        b = k + target
        load[target] += 1
        while b != root:
            a = prev[b]
            if a < k:  # u -> v arc becomes an assignment
                assigned[a] = b - k
            b = a

    best = tuple(int(i) for i in assigned)
    return MaximizerReport(best, assignment_value(inst, best, tol))


def _residual(inst: Instance, best: Assignment, cost: np.ndarray) -> np.ndarray:
    """Dense residual cost matrix over k+m nodes; ``inf`` where no arc exists."""
    k, m = cost.shape
    w = np.full((k + m, k + m), np.inf)
    for j in range(k):
        for i in range(m):
            if math.isinf(cost[j, i]):
                continue
            if best[j] == i:
                w[k + i, j] = -cost[j, i]
            else:
                w[j, k + i] = cost[j, i]
    return w


def _potentials(w: np.ndarray, tol: float) -> np.ndarray:
    """Bellman-Ford from a virtual source; raises NotOptimal on a negative cycle."""
    n = len(w)
    src, dst = np.nonzero(np.isfinite(w))
    wt = w[src, dst]
    d = np.zeros(n)
    for _ in range(n + 1):
        cand = d[src] + wt
        better = cand < d[dst] - tol
        if not better.any():
            return d
        np.minimum.at(d, dst[better], cand[better])
    raise NotOptimal("residual graph has a negative cycle: assignment is not optimal")


def _apply_cycle(best: Assignment, cycle: Sequence[Hop]) -> Assignment:
    g = list(best)
    for hop in cycle:
        g[hop.j] = hop.dst
    return tuple(g)


def min_residual_cycle(inst: Instance, best: Assignment, tol: Tolerances = DEFAULT_TOL) -> tuple[Hop, ...] | None:
    """Cheapest simple cycle of the residual graph of ``best`` (None if acyclic).

    Reduced costs from Bellman-Ford potentials are non-negative, so the cheapest
    cycle is ``min over arcs (a, b) of r(a, b) + dist(b, a)`` with all-pairs
    distances from Floyd-Warshall.
    """
    cost = cost_matrix(inst, tol)
    k, m = cost.shape
    w = _residual(inst, best, cost)
    pot = _potentials(w, tol.tie)
    red = w + pot[:, None] - pot[None, :]
    if np.any(red < -tol.tie * max(1.0, np.abs(w[np.isfinite(w)]).max(initial=0.0))):
        raise NotOptimal("assignment violates complementary slackness")
    red = np.where(np.isfinite(red), np.maximum(red, 0.0), np.inf)

    n = k + m
    dist = red.copy()
    nxt = np.where(np.isfinite(red), np.arange(n)[None, :], -1)
    for c in range(n):
        via = dist[:, c : c + 1] + dist[c : c + 1, :]
        better = via < dist
        dist = np.where(better, via, dist)
        nxt = np.where(better, nxt[:, c : c + 1], nxt)
    # dist[a, a] is now the cheapest cycle through a
    diag = np.diag(dist)
    if not np.isfinite(diag).any():
        return None
    start = int(np.argmin(diag))
    nodes = [start]
    a = int(nxt[start, start])
    while a != start and len(nodes) <= n:
        if a in nodes:
            # zero-cost detour; any simple sub-cycle of a cheapest cycle is cheapest too
            nodes = nodes[nodes.index(a) :]
            break
        nodes.append(a)
        a = int(nxt[a, start])
    # rotate so the cycle starts at a u atom: u -> v (new) -> u (old owner) ...
    if nodes[0] >= k:
        nodes = nodes[1:] + nodes[:1]
    hops = []
    for t in range(0, len(nodes), 2):
        j, i = nodes[t], nodes[t + 1] - k
        hops.append(Hop(j, best[j], i))
    return tuple(hops)


def uniqueness_certificate(inst: Instance, best: Sequence[int], tol: Tolerances = DEFAULT_TOL) -> Uniqueness:
    best = check_capacity(inst, best)
    a_best = assignment_value(inst, best, tol)
    if math.isinf(a_best):
        raise NotOptimal("best assignment is not proper")
    cycle = min_residual_cycle(inst, best, tol)
    if cycle is None:
        return Unique(math.inf)
    alt = _apply_cycle(best, cycle)
    gap = a_best - assignment_value(inst, alt, tol)
    scale = max(1.0, abs(a_best))
    if gap <= tol.tie * scale:
        return NonUnique(alt, cycle, gap)
    if gap <= tol.tie * inst.m * scale:
        return AmbiguousWithinTolerance(alt, cycle, gap)
    return Unique(gap)


def solve_assignment(inst: Instance, tol: Tolerances = DEFAULT_TOL) -> MaximizerReport:
    rep = maximize_assignment(inst, tol)
    return MaximizerReport(rep.best, rep.value, uniqueness_certificate(inst, rep.best, tol))
