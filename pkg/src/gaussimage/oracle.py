"""Brute-force ground truth for small instances.

Deliberately shares no numerical code with the solver: dot products and
assignment values are recomputed here in plain Python with ``math.fsum``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator

from .core import DEFAULT_TOL, Instance, Tolerances
from .errors import AllNegativeInfinity, TooLarge

ENUMERATION_LIMIT = 10**6
SUBSET_LIMIT_M = 20


@dataclass(frozen=True)
class OracleReport:
    all_assignments_count: int
    maximizers: tuple[tuple[int, ...], ...]
    value: float
    top_gap: float

    def to_dict(self) -> dict:
        return {
            "all_assignments_count": self.all_assignments_count,
            "maximizers": [list(f) for f in self.maximizers],
            "value": self.value,
            "top_gap": None if math.isinf(self.top_gap) else self.top_gap,
        }


@dataclass(frozen=True)
class SubsetVerdict:
    holds: bool
    worst_subset: tuple[int, ...]
    worst_slack: int


def _dot(a, b) -> float:
    return math.fsum(x * y for x, y in zip(a, b))


def _dot_table(inst: Instance) -> list[list[float]]:
    v = inst.v.tolist()
    return [[_dot(uj, vi) for vi in v] for uj in inst.u.tolist()]


def multinomial(weights) -> int:
    out = math.factorial(sum(weights))
    for w in weights:
        out //= math.factorial(w)
    return out


def enumerate_assignments(inst: Instance) -> Iterator[tuple[int, ...]]:
    """Every capacity-respecting map, in lexicographic order."""
    if multinomial(inst.weights) > ENUMERATION_LIMIT:
        raise TooLarge(f"{multinomial(inst.weights)} assignments exceed the enumeration guard")
    k, m = inst.k, inst.m
    left = list(inst.weights)
    f = [0] * k

    def rec(j):
        if j == k:
            yield tuple(f)
            return
        for i in range(m):
            if left[i]:
                left[i] -= 1
                f[j] = i
                yield from rec(j + 1)
                left[i] += 1

    return rec(0)


def oracle_maximizers(inst: Instance, tol: Tolerances = DEFAULT_TOL) -> OracleReport:
    table = _dot_table(inst)
    values = []
    for f in enumerate_assignments(inst):
        terms = [table[j][i] for j, i in enumerate(f)]
        if min(terms) <= tol.dot:
            values.append((f, -math.inf))
        else:
            values.append((f, math.fsum(math.log(t) for t in terms)))
    finite = [a for _, a in values if a > -math.inf]
    if not finite:
        raise AllNegativeInfinity("every assignment has value -inf")
    best = max(finite)
    band = tol.tie * inst.k * max(1.0, abs(best))
    maxi = tuple(f for f, a in values if a >= best - band)
    rest = [a for a in finite if a < best - band]
    gap = best - max(rest) if rest else math.inf
    return OracleReport(len(values), maxi, best, gap)


def oracle_weak_aleksandrov(inst: Instance, tol: Tolerances = DEFAULT_TOL) -> SubsetVerdict:
    """Check mu(I) <= |{j : u_j . v_i > eps for some i in I}| over every nonempty I."""
    m = inst.m
    if m > SUBSET_LIMIT_M:
        raise TooLarge(f"m = {m} exceeds the subset enumeration limit")
    table = _dot_table(inst)
    nbr = [frozenset(j for j in range(inst.k) if table[j][i] > tol.dot) for i in range(m)]
    worst, worst_slack = None, None
    for size in range(1, m + 1):
        for subset in itertools.combinations(range(m), size):
            covered = frozenset().union(*(nbr[i] for i in subset))
            slack = len(covered) - sum(inst.weights[i] for i in subset)
            if worst_slack is None or slack < worst_slack:
                worst, worst_slack = subset, slack
    return SubsetVerdict(worst_slack >= 0, worst, worst_slack)
