"""Named instances, random generators, perturbations and the genericity experiment."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import DEFAULT_TOL, Instance, Tolerances, make_instance
from .errors import CollisionAfterPerturbation, DuplicateDirection, InvalidSpec

KINDS = ("triangle", "simplex", "polygon", "random", "loop")


@dataclass(frozen=True)
class GenSpec:
    kind: str
    n: int = 2
    l: int = 4
    weights: tuple[int, ...] = ()
    seed: int = 0
    extra: int = 0


def _circle(angles) -> np.ndarray:
    angles = np.asarray(angles, dtype=float)
    return np.c_[np.cos(angles), np.sin(angles)]


def triangle() -> Instance:
    v = _circle(np.radians([90.0, 210.0, 330.0]))
    return make_instance(v, [1, 1, 1], v)


def simplex(n: int) -> Instance:
    """Regular simplex directions in R^n with u = v."""
    if n < 2:
        raise InvalidSpec("simplex needs n >= 2")
    centered = np.eye(n + 1) - 1.0 / (n + 1)
    basis = np.linalg.svd(centered)[2][:n]  # orthonormal basis of the hyperplane sum(x) = 0
    v = centered @ basis.T
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return make_instance(v, [1] * (n + 1), v)


def regular_polygon(l: int) -> Instance:
    """Vertices at 2 pi t / l + pi / l, u[t] the outward normal of edge (t, t+1)."""
    if l < 3:
        raise InvalidSpec("polygon needs l >= 3")
    t = np.arange(l)
    return make_instance(_circle(2 * np.pi * t / l + np.pi / l), [1] * l, _circle(2 * np.pi * (t + 1) / l))


def _sphere(rng: np.random.Generator, count: int, n: int, tol: Tolerances) -> np.ndarray:
    """Normalized Gaussians, resampling any row that collides with an earlier one."""
    out = np.empty((count, n))
    for a in range(count):
        while True:
            x = rng.standard_normal(n)
            x /= np.linalg.norm(x)
            if a == 0 or np.max(out[:a] @ x) < 1.0 - tol.distinct:
                out[a] = x
                break
    return out


def random_instance(n: int, weights: Sequence[int], seed, tol: Tolerances = DEFAULT_TOL) -> Instance:
    weights = [int(w) for w in weights]
    if n < 2 or not weights or min(weights) < 1:
        raise InvalidSpec("random instance needs n >= 2 and positive integer weights")
    rng = np.random.default_rng(seed)
    v = _sphere(rng, len(weights), n, tol)
    u = _sphere(rng, sum(weights), n, tol)
    return make_instance(v, weights, u, tol)


def loop_seeded(n: int, l: int, seed, extra: int = 0, tol: Tolerances = DEFAULT_TOL) -> Instance:
    """Plant a closed edge-normal loop on atoms 0..l-1, then add ``extra`` random atoms.

    In the plane the loop is a convex polygon inscribed in the unit circle with
    u[t] the outward normal of edge (t, t+1), so the identity and the cyclic
    shift tie as maximizers when ``extra`` is 0.
    """
    if n < 2 or l < 2 or extra < 0:
        raise InvalidSpec("loop needs n >= 2, l >= 2, extra >= 0")
    rng = np.random.default_rng(seed)
    if n == 2:
        if l < 3:
            raise InvalidSpec("a planar loop around the origin needs l >= 3")
        while True:
            ang = np.sort(rng.uniform(0, 2 * np.pi, l))
            gaps = np.diff(np.r_[ang, ang[0] + 2 * np.pi])
            if gaps.max() < 0.9 * np.pi and gaps.min() > 1e-3:
                break
        v = _circle(ang)
        x = v.copy()
    else:
        v = _sphere(rng, l, n, tol)
        x = rng.uniform(0.5, 1.0, l)[:, None] * v
    u = np.empty((l, n))
    for t in range(l):
        edge = x[(t + 1) % l] - x[t]
        g = rng.standard_normal(n) if n > 2 else np.array([edge[1], -edge[0]])
        g = g - (g @ edge) / (edge @ edge) * edge
        g /= np.linalg.norm(g)
        u[t] = g if g @ x[t] > 0 else -g
    if extra:
        v = np.vstack([v, _sphere(rng, extra, n, tol)])
        u = np.vstack([u, _sphere(rng, extra, n, tol)])
    return make_instance(v, [1] * (l + extra), u, tol)


def generate(spec: GenSpec, tol: Tolerances = DEFAULT_TOL) -> Instance:
    if spec.kind == "triangle":
        return triangle()
    if spec.kind == "simplex":
        return simplex(spec.n)
    if spec.kind == "polygon":
        return regular_polygon(spec.l)
    if spec.kind == "random":
        return random_instance(spec.n, spec.weights, spec.seed, tol)
    if spec.kind == "loop":
        return loop_seeded(spec.n, spec.l, spec.seed, spec.extra, tol)
    raise InvalidSpec(f"unknown kind {spec.kind!r}; expected one of {KINDS}")


def _rotate_rows(rng: np.random.Generator, dirs: np.ndarray, magnitude: float) -> np.ndarray:
    out = np.empty_like(dirs)
    for a, x in enumerate(dirs):
        while True:
            g = rng.standard_normal(len(x))
            g -= (g @ x) * x
            norm = np.linalg.norm(g)
            if norm > 1e-12:
                break
        theta = rng.uniform(0.0, magnitude)
        y = math.cos(theta) * x + math.sin(theta) * (g / norm)
        out[a] = y / np.linalg.norm(y)
    return out


def perturb(inst: Instance, magnitude: float, which: str = "both", seed=0, tol: Tolerances = DEFAULT_TOL) -> Instance:
    """Rotate each selected atom by a random angle in [0, magnitude] in a random tangent direction."""
    if not 0 < magnitude < math.pi / 4:
        raise ValueError("magnitude must lie in (0, pi/4)")
    if which not in ("mu", "lambda", "both"):
        raise ValueError(f"which must be 'mu', 'lambda' or 'both', got {which!r}")
    rng = np.random.default_rng(seed)
    v = _rotate_rows(rng, inst.v, magnitude) if which in ("mu", "both") else inst.v
    u = _rotate_rows(rng, inst.u, magnitude) if which in ("lambda", "both") else inst.u
    try:
        return make_instance(v, inst.weights, u, tol)
    except DuplicateDirection as exc:
        raise CollisionAfterPerturbation(str(exc)) from None


@dataclass
class GenericTally:
    trials: int
    filtered: int = 0
    solvable: int = 0
    nonunique: int = 0
    infeasible: int = 0
    ambiguous: int = 0
    statuses: list[str] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "filtered": self.filtered,
            "solvable": self.solvable,
            "nonunique": self.nonunique,
            "infeasible": self.infeasible,
            "ambiguous": self.ambiguous,
        }


def trial_seed(seed: int, trial: int) -> np.random.SeedSequence:
    """Independent stream per (seed, trial), so parallel runs cannot reorder randomness."""
    return np.random.SeedSequence([int(seed), int(trial)])


def _one_trial(n, weights, seed, trial, tol) -> str | None:
    from .feasibility import check_weak_aleksandrov, is_concentrated_on_closed_hemisphere
    from .pipeline import solve

    inst = random_instance(n, weights, trial_seed(seed, trial), tol)
    if not check_weak_aleksandrov(inst, tol).holds:
        return None
    if is_concentrated_on_closed_hemisphere(inst.v, tol) is not None:
        return None
    return solve(inst, tol).status


def generic_rate(
    n: int, weights: Sequence[int], trials: int, seed: int, tol: Tolerances = DEFAULT_TOL, workers: int = 1
) -> GenericTally:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    weights = tuple(int(w) for w in weights)
    args = [(n, weights, seed, t, tol) for t in range(trials)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(lambda a: _one_trial(*a), args))
    else:
        results = [_one_trial(*a) for a in args]
    tally = GenericTally(trials)
    for status in results:
        if status is None:
            continue
        tally.filtered += 1
        tally.statuses.append(status)
        if status == "Solution":
            tally.solvable += 1
        elif status == "NoSolution":
            tally.nonunique += 1
        elif status == "Infeasible":
            tally.infeasible += 1
        else:
            tally.ambiguous += 1
    return tally
