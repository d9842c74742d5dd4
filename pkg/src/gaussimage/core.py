"""Domain types, validation and the numeric tolerance policy.

Directions are stored as rows of read-only float arrays.  An
:class:`Instance` pairs a weighted measure ``mu`` (directions ``v``, integer
weights) with an equal-weight measure ``lam`` (directions ``u``).  All indices
in the library and in the JSON formats are 0-based.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from .errors import (
    CapacityViolation,
    DimensionMismatch,
    DimensionTooSmall,
    DuplicateDirection,
    InvalidInstance,
    MassMismatch,
    NonIntegerWeight,
    NonUnitVector,
)

# Inputs further than this from unit norm are treated as corrupt, not renormalized.
RENORMALIZE_LIMIT = 1e-6


@dataclass(frozen=True)
class Tolerances:
    unit: float = 1e-9
    distinct: float = 1e-9
    dot: float = 1e-12
    tie: float = 1e-9
    strict_init: float = 1e-3
    strict_min: float = 1e-12
    loop: float = 1e-8

    def __post_init__(self):
        for name in ("unit", "distinct", "dot", "tie", "strict_init", "strict_min", "loop"):
            if not getattr(self, name) > 0:
                raise ValueError(f"tolerance {name} must be strictly positive")
        if not self.strict_min < self.strict_init:
            raise ValueError("strict_min must be smaller than strict_init")


DEFAULT_TOL = Tolerances()


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def unit_vector(coords: Sequence[float], tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Return ``coords`` renormalized to unit length.

    Raises NonUnitVector if the input norm is off by more than 1e-6.
    """
    x = np.asarray(coords, dtype=float)
    if x.ndim != 1 or not np.all(np.isfinite(x)):
        raise NonUnitVector(f"not a finite vector: {coords!r}")
    norm = float(np.linalg.norm(x))
    if abs(norm - 1.0) > RENORMALIZE_LIMIT:
        raise NonUnitVector(f"vector {x.tolist()} has norm {norm!r}")
    # Already-unit vectors are kept bit-for-bit so validation is idempotent.
    if abs(norm - 1.0) > 4 * np.finfo(float).eps:
        x = x / norm
    if abs(float(np.linalg.norm(x)) - 1.0) > tol.unit:
        raise NonUnitVector(f"vector {x.tolist()} could not be renormalized")
    return x


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Atoms ``sum_a weights[a] * delta_{dirs[a]}`` on the unit sphere."""

    dirs: np.ndarray
    weights: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "dirs", _frozen(self.dirs))
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if self.dirs.ndim != 2 or self.dirs.shape[0] != len(self.weights):
            raise DimensionMismatch("dirs must be an (atoms x n) array matching weights")

    def __len__(self):
        return len(self.weights)

    @property
    def total(self) -> int:
        return sum(self.weights)

    def __eq__(self, other):
        if not isinstance(other, DiscreteMeasure):
            return NotImplemented
        return self.weights == other.weights and np.array_equal(self.dirs, other.dirs)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Instance:
    n: int
    mu: DiscreteMeasure
    lam: DiscreteMeasure

    @property
    def v(self) -> np.ndarray:
        return self.mu.dirs

    @property
    def u(self) -> np.ndarray:
        return self.lam.dirs

    @property
    def weights(self) -> tuple[int, ...]:
        return self.mu.weights

    @property
    def m(self) -> int:
        return len(self.mu)

    @property
    def k(self) -> int:
        return len(self.lam)

    def dots(self) -> np.ndarray:
        """Matrix of ``u[j] . v[i]``, shape (k, m)."""
        return self.u @ self.v.T

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "mu": [{"dir": d.tolist(), "weight": w} for d, w in zip(self.v, self.weights)],
            "lambda": [{"dir": d.tolist()} for d in self.u],
        }

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return self.n == other.n and self.mu == other.mu and self.lam == other.lam

    __hash__ = None


def _parse_weight(w: Any) -> int:
    if isinstance(w, bool):
        raise NonIntegerWeight(f"weight {w!r} is not an integer")
    if isinstance(w, (int, np.integer)):
        iw = int(w)
    elif isinstance(w, (float, np.floating)) and math.isfinite(w) and float(w).is_integer():
        iw = int(w)
    else:
        raise NonIntegerWeight(f"weight {w!r} is not an integer")
    if iw < 1:
        raise NonIntegerWeight(f"weight {iw} is not a positive integer")
    return iw


def _check_distinct(dirs: np.ndarray, label: str, tol: Tolerances) -> None:
    gram = dirs @ dirs.T
    a, b = np.triu_indices(len(dirs), k=1)
    bad = np.nonzero(gram[a, b] >= 1.0 - tol.distinct)[0]
    if bad.size:
        i, j = int(a[bad[0]]), int(b[bad[0]])
        raise DuplicateDirection(f"{label} atoms {i} and {j} coincide")


def validate_instance(raw: Mapping[str, Any] | Instance, tol: Tolerances = DEFAULT_TOL) -> Instance:
    """Build an :class:`Instance` from parsed JSON data, enforcing every invariant."""
    if isinstance(raw, Instance):
        raw = raw.to_dict()
    try:
        n = raw["n"]
        mu_atoms = raw["mu"]
        lam_atoms = raw["lambda"]
    except (KeyError, TypeError) as exc:
        raise InvalidInstance(f"missing field: {exc}") from None
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise InvalidInstance(f"dimension {n!r} is not an integer")
    n = int(n)
    if n < 2:
        raise DimensionTooSmall(f"dimension {n} < 2")
    if not mu_atoms or not lam_atoms:
        raise InvalidInstance("both measures need at least one atom")

    def read_dir(atom: Any) -> np.ndarray:
        try:
            d = atom["dir"]
        except (KeyError, TypeError):
            raise InvalidInstance(f"atom without 'dir': {atom!r}") from None
        if len(d) != n:
            raise DimensionMismatch(f"direction {d!r} is not {n}-dimensional")
        return unit_vector(d, tol)

    v = np.array([read_dir(a) for a in mu_atoms])
    weights = tuple(_parse_weight(a.get("weight")) for a in mu_atoms)
    u = np.array([read_dir(a) for a in lam_atoms])
    for a in lam_atoms:
        if "weight" in a and _parse_weight(a["weight"]) != 1:
            raise InvalidInstance("lambda atoms must all have weight 1")
    _check_distinct(v, "mu", tol)
    _check_distinct(u, "lambda", tol)
    if sum(weights) != len(u):
        raise MassMismatch(f"mu mass {sum(weights)} != lambda mass {len(u)}")
    return Instance(n, DiscreteMeasure(v, weights), DiscreteMeasure(u, (1,) * len(u)))


def make_instance(v, weights, u, tol: Tolerances = DEFAULT_TOL) -> Instance:
    """Convenience constructor from arrays; goes through full validation."""
    v = np.asarray(v, dtype=float)
    u = np.asarray(u, dtype=float)
    raw = {
        "n": int(v.shape[1]),
        "mu": [{"dir": d.tolist(), "weight": w} for d, w in zip(v, weights)],
        "lambda": [{"dir": d.tolist()} for d in u],
    }
    return validate_instance(raw, tol)


def load_instance(path: str | Path, tol: Tolerances = DEFAULT_TOL) -> Instance:
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidInstance(f"{path}: {exc}") from None
    return validate_instance(raw, tol)


def dump_instance(inst: Instance) -> str:
    return json.dumps(inst.to_dict(), indent=2) + "\n"


def positive_dot_mask(inst: Instance, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Boolean (k, m) matrix: ``u[j] . v[i] > tol.dot``."""
    return inst.dots() > tol.dot


def check_capacity(inst: Instance, f: Sequence[int]) -> tuple[int, ...]:
    """Return ``f`` as a tuple after checking it lands in F_{mu,lambda}."""
    f = tuple(int(i) for i in f)
    if len(f) != inst.k:
        raise CapacityViolation(f"assignment has length {len(f)}, expected {inst.k}")
    counts = [0] * inst.m
    for i in f:
        if not 0 <= i < inst.m:
            raise CapacityViolation(f"index {i} out of range")
        counts[i] += 1
    if tuple(counts) != inst.weights:
        raise CapacityViolation(f"fiber sizes {counts} != weights {list(inst.weights)}")
    return f
