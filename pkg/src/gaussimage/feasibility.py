"""Weak Aleksandrov (Hall/Gale) feasibility and hemisphere concentration."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .core import DEFAULT_TOL, Instance, Tolerances, positive_dot_mask
from .errors import DimensionMismatch, NotWeakAleksandrov


@dataclass(frozen=True)
class HallResult:
    holds: bool
    flow: int
    violating_subset: tuple[int, ...] | None = None
    slack: int = 0  # |N(I)| - mu(I) for the returned subset; negative when violated


@dataclass(frozen=True)
class FeasibilityReport:
    weak_aleksandrov: bool
    violating_subset: tuple[int, ...] | None
    concentrated: bool
    hemisphere_witness: np.ndarray | None
    uniform_alpha: float | None

    def to_dict(self) -> dict:
        return {
            "weak_aleksandrov": self.weak_aleksandrov,
            "violating_subset": None if self.violating_subset is None else list(self.violating_subset),
            "concentrated": self.concentrated,
            "hemisphere_witness": None if self.hemisphere_witness is None else self.hemisphere_witness.tolist(),
            "uniform_alpha": self.uniform_alpha,
        }


def _max_flow(cap: np.ndarray, s: int, t: int) -> tuple[int, np.ndarray]:
    """Edmonds-Karp on a dense integer capacity matrix; returns (value, residual)."""
    res = cap.copy()
    n = len(res)
    value = 0
    while True:
        parent = [-1] * n
        parent[s] = s
        queue = deque([s])
        while queue and parent[t] < 0:
            a = queue.popleft()
            for b in np.nonzero(res[a] > 0)[0]:
                if parent[b] < 0:
                    parent[b] = a
                    queue.append(int(b))
        if parent[t] < 0:
            return value, res
        push = None
        b = t
        while b != s:
            a = parent[b]
            push = res[a, b] if push is None else min(push, res[a, b])
            b = a
        b = t
        while b != s:
            a = parent[b]
            res[a, b] -= push
            res[b, a] += push
            b = a
        value += int(push)


def check_weak_aleksandrov(inst: Instance, tol: Tolerances = DEFAULT_TOL) -> HallResult:
    """Decide the subset inequalities mu(I) <= |N(I)| via one max-flow.

    Nodes: source, v atoms (capacity mu_i from the source), u atoms (capacity 1
    to the sink).  A v->u arc exists when ``u.v > tol.dot``; it gets capacity k
    so that a minimum cut never severs it.  The v atoms still reachable from
    the source after the flow form a subset of maximal deficiency.
    """
    m, k = inst.m, inst.k
    adj = positive_dot_mask(inst, tol).T  # (m, k)
    s, t = 0, 1 + m + k
    cap = np.zeros((m + k + 2, m + k + 2), dtype=np.int64)
    cap[s, 1 : 1 + m] = inst.weights
    cap[1 : 1 + m, 1 + m : 1 + m + k] = np.where(adj, k, 0)
    cap[1 + m : 1 + m + k, t] = 1
    value, res = _max_flow(cap, s, t)
    if value == k:
        return HallResult(True, value)

    seen = np.zeros(len(res), dtype=bool)
    seen[s] = True
    queue = deque([s])
    while queue:
        a = queue.popleft()
        for b in np.nonzero(res[a] > 0)[0]:
            if not seen[b]:
                seen[b] = True
                queue.append(int(b))
    subset = tuple(int(i) for i in range(m) if seen[1 + i])
    nbrs = int(np.count_nonzero(adj[list(subset)].any(axis=0)))
    slack = nbrs - sum(inst.weights[i] for i in subset)
    assert slack == value - k, "min cut and deficiency disagree"
    return HallResult(False, value, subset, slack)


def is_concentrated_on_closed_hemisphere(dirs, tol: Tolerances = DEFAULT_TOL) -> np.ndarray | None:
    """Return a unit ``w`` with ``w . d <= tol.dot`` for every row, or None.

    None means the origin is interior to the convex hull of ``dirs``: they span
    R^n and some strictly positive combination sums to zero.
    """
    d = np.atleast_2d(np.asarray(dirs, dtype=float))
    if d.size == 0:
        raise ValueError("need at least one direction")
    p, n = d.shape
    if n < 2:
        raise DimensionMismatch("directions must have at least 2 coordinates")

    interior = False
    if np.linalg.matrix_rank(d) == n:
        # c >= 1 with sum c_i d_i = 0 (scale-free version of c > 0)
        lp = linprog(np.zeros(p), A_eq=d.T, b_eq=np.zeros(n), bounds=[(1, None)] * p, method="highs")
        interior = lp.status == 0
    if interior:
        return None

    # w with d.w <= 0 and sum_i d_i.w = -1: a witness that is not orthogonal to all of d
    lp = linprog(
        np.zeros(n),
        A_ub=d,
        b_ub=np.zeros(p),
        A_eq=d.sum(axis=0, keepdims=True),
        b_eq=[-1.0],
        bounds=[(None, None)] * n,
        method="highs",
    )
    if lp.status == 0:
        w = lp.x
    else:
        # every feasible w is orthogonal to all of d, so d spans a proper subspace
        w = np.linalg.svd(d)[2][-1]
    w = w / np.linalg.norm(w)
    if np.max(d @ w) > tol.dot:
        raise RuntimeError("hemisphere witness failed its own check")
    return w


def uniform_alpha(inst: Instance, tol: Tolerances = DEFAULT_TOL) -> float:
    """Conservative uniform angle: min over v_i of arcsin(smallest positive u.v_i)."""
    if not check_weak_aleksandrov(inst, tol).holds:
        raise NotWeakAleksandrov("uniform angle is only defined for weak Aleksandrov pairs")
    dots = inst.dots()
    alpha = math.pi / 2
    for i in range(inst.m):
        col = dots[:, i]
        pos = col[col > tol.dot]
        if pos.size:
            alpha = min(alpha, math.asin(min(1.0, float(pos.min()))))
    return alpha


def feasibility_report(inst: Instance, tol: Tolerances = DEFAULT_TOL) -> FeasibilityReport:
    hall = check_weak_aleksandrov(inst, tol)
    witness = is_concentrated_on_closed_hemisphere(inst.v, tol)
    return FeasibilityReport(
        weak_aleksandrov=hall.holds,
        violating_subset=hall.violating_subset,
        concentrated=witness is not None,
        hemisphere_witness=witness,
        uniform_alpha=uniform_alpha(inst, tol) if hall.holds else None,
    )
