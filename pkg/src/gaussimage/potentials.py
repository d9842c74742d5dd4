"""Log-radii from the strict difference-constraint system of an assignment.

For a proper assignment ``f`` every pair (j, i) with ``i != f(j)`` and
``u_j . v_i > 0`` gives the constraint

    x[f(j)] - x[i] > log(u_j . v_i) - log(u_j . v_f(j))

and ``alpha = exp(x)`` makes ``u_j`` an interior normal of the vertex
``alpha_f(j) v_f(j)``.  The strict system is solved as a shortest-path
problem with every bound shifted by a slack ``eps``; ``eps`` is halved until
the shifted system becomes feasible or falls below the giving-up threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .assignment import Hop
from .core import DEFAULT_TOL, Instance, Tolerances, check_capacity
from .errors import ImproperAssignment, NonFiniteInput


@dataclass(frozen=True)
class Constraint:
    """``x[target] - x[source] > bound``; ``witness`` is the u atom behind it."""

    target: int
    source: int
    bound: float
    witness: int


@dataclass(frozen=True)
class StrictSystem:
    m: int
    constraints: tuple[Constraint, ...]


@dataclass(frozen=True)
class Potentials:
    x: np.ndarray
    alphas: np.ndarray
    epsilon_used: float
    iterations: int


@dataclass(frozen=True)
class NegativeCycleCertificate:
    cycle: tuple[int, ...]  # constraint indices, chained target -> source -> ...
    bound_sum: float
    epsilon: float

    def hops(self, system: StrictSystem) -> tuple[Hop, ...]:
        return tuple(
            Hop(system.constraints[c].witness, system.constraints[c].target, system.constraints[c].source)
            for c in self.cycle
        )


def build_strict_system(inst: Instance, f: Sequence[int], tol: Tolerances = DEFAULT_TOL) -> StrictSystem:
    f = check_capacity(inst, f)
    dots = inst.dots()
    out = []
    for j, fj in enumerate(f):
        own = dots[j, fj]
        if own <= tol.dot:
            raise ImproperAssignment(f"u[{j}] . v[{fj}] = {own!r} is not positive")
        for i in range(inst.m):
            if i != fj and dots[j, i] > tol.dot:
                out.append(Constraint(fj, i, math.log(dots[j, i]) - math.log(own), j))
    return StrictSystem(inst.m, tuple(out))


def alphas_from_potentials(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise NonFiniteInput("potentials must be finite")
    return np.exp(x - x.max())


def constraint_slacks(system: StrictSystem, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.array([x[c.target] - x[c.source] - c.bound for c in system.constraints])


def _shortest_paths(system: StrictSystem, eps: float):
    """Bellman-Ford for ``x[source] <= x[target] - bound - eps``.

    Returns (x, None) on success or (None, cycle) with the constraint indices of
    a negative cycle.
    """
    m = system.m
    x = np.zeros(m)
    pred = [-1] * m
    cons = system.constraints
    last = -1
    for _ in range(m):
        last = -1
        for idx, c in enumerate(cons):
            cand = x[c.target] - c.bound - eps
            if cand < x[c.source] - 1e-15 * max(1.0, abs(x[c.source])):
                x[c.source] = cand
                pred[c.source] = idx
                last = c.source
        if last < 0:
            return x, None
    # still relaxing after m rounds: walk back m steps to land on the cycle
    node = last
    for _ in range(m):
        node = cons[pred[node]].target
    cycle = []
    cur = node
    while True:
        idx = pred[cur]
        cycle.append(idx)
        cur = cons[idx].target
        if cur == node:
            break
    cycle.reverse()
    return None, tuple(cycle)


def solve_strict_system(system: StrictSystem, tol: Tolerances = DEFAULT_TOL) -> Potentials | NegativeCycleCertificate:
    eps = tol.strict_init
    iterations = 0
    cycle = None
    while eps >= tol.strict_min:
        iterations += 1
        x, found = _shortest_paths(system, eps)
        if x is not None:
            x = x - x.max()
            slacks = constraint_slacks(system, x)
            used = float(min(eps, slacks.min())) if len(slacks) else eps
            if used > 0:
                return Potentials(x, alphas_from_potentials(x), used, iterations)
        else:
            cycle = found
        eps /= 2
    if cycle is None:
        raise RuntimeError("strict system: rounding defeated every slack without a cycle")
    bound_sum = math.fsum(system.constraints[c].bound for c in cycle)
    return NegativeCycleCertificate(cycle, bound_sum, eps * 2)
