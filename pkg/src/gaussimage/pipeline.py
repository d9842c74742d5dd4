"""The full decision pipeline and its JSON report."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .assignment import AmbiguousWithinTolerance, NonUnique, maximize_assignment, uniqueness_certificate
from .core import DEFAULT_TOL, Instance, Tolerances
from .errors import GIPError, InconsistentCertificate
from .feasibility import check_weak_aleksandrov, is_concentrated_on_closed_hemisphere
from .loops import loop_from_cycle_certificate
from .polytope import Polytope, verify_solution
from .potentials import NegativeCycleCertificate, build_strict_system, solve_strict_system

log = logging.getLogger(__name__)

EXIT_CODES = {
    "Solution": 0,
    "NoSolution": 2,
    "Infeasible": 3,
    "InvalidInput": 4,
    "Ambiguous": 5,
    "Concentrated": 6,
}


def _num(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


@dataclass
class SolveReport:
    status: str
    assignment: tuple[int, ...] | None = None
    alphas: np.ndarray | None = None
    value: float | None = None
    certificates: dict[str, Any] = field(default_factory=dict)
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def polytope(self, inst: Instance) -> Polytope:
        if self.alphas is None:
            raise ValueError(f"no polytope in a {self.status} report")
        return Polytope(inst.v, self.alphas)

    def to_dict(self, timings: bool = False) -> dict[str, Any]:
        diag = {key: (_num(val) if isinstance(val, float) else val) for key, val in self.diagnostics.items()}
        if not timings:
            diag.pop("timings", None)
        return {
            "status": self.status,
            "assignment": None if self.assignment is None else list(self.assignment),
            "alphas": None if self.alphas is None else [float(a) for a in self.alphas],
            "value": _num(self.value),
            "certificates": self.certificates,
            "diagnostics": diag,
        }


def solve(inst: Instance, tol: Tolerances = DEFAULT_TOL) -> SolveReport:
    """Decide the instance and, when solvable, construct and verify a polytope.

    Order: weak Aleksandrov (necessary for any body, so it is decided first),
    then hemisphere concentration of mu, then the maximizer and its uniqueness,
    then the potentials and an independent verification of the polytope.
    """
    clock = {}
    t0 = time.perf_counter()

    hall = check_weak_aleksandrov(inst, tol)
    clock["feasibility"] = time.perf_counter() - t0
    if not hall.holds:
        log.info("weak Aleksandrov fails on subset %s", hall.violating_subset)
        return SolveReport(
            "Infeasible",
            certificates={"violating_subset": list(hall.violating_subset), "subset_slack": hall.slack},
            diagnostics={"timings": clock},
        )

    witness = is_concentrated_on_closed_hemisphere(inst.v, tol)
    if witness is not None:
        return SolveReport(
            "Concentrated", certificates={"hemisphere_witness": witness.tolist()}, diagnostics={"timings": clock}
        )

    t1 = time.perf_counter()
    rep = maximize_assignment(inst, tol)
    verdict = uniqueness_certificate(inst, rep.best, tol)
    clock["assignment"] = time.perf_counter() - t1
    diagnostics: dict[str, Any] = {"gap": verdict.gap, "timings": clock}

    if isinstance(verdict, NonUnique):
        certs: dict[str, Any] = {
            "alternative": list(verdict.alternative),
            "cycle": [[h.j, h.src, h.dst] for h in verdict.cycle],
        }
        try:
            certs["loop"] = loop_from_cycle_certificate(inst, rep.best, verdict.cycle, tol).to_dict()
        except InconsistentCertificate as exc:
            log.warning("no loop certificate: %s", exc)
        return SolveReport("NoSolution", rep.best, value=rep.value, certificates=certs, diagnostics=diagnostics)
    if isinstance(verdict, AmbiguousWithinTolerance):
        return SolveReport(
            "Ambiguous",
            rep.best,
            value=rep.value,
            certificates={"alternative": list(verdict.alternative)},
            diagnostics=diagnostics,
        )

    t2 = time.perf_counter()
    system = build_strict_system(inst, rep.best, tol)
    pots = solve_strict_system(system, tol)
    clock["potentials"] = time.perf_counter() - t2
    if isinstance(pots, NegativeCycleCertificate):
        # the maximizer looked unique but the strict system disagrees: a near-tie
        diagnostics["cycle_bound_sum"] = pots.bound_sum
        return SolveReport(
            "Ambiguous",
            rep.best,
            value=rep.value,
            certificates={"cycle": [[h.j, h.src, h.dst] for h in pots.hops(system)]},
            diagnostics=diagnostics,
        )
    diagnostics["epsilon_used"] = pots.epsilon_used

    t3 = time.perf_counter()
    check = verify_solution(inst, Polytope(inst.v, pots.alphas), rep.best, tol)
    clock["verify"] = time.perf_counter() - t3
    diagnostics["min_margin"] = check.min_margin
    diagnostics["phi_gap"] = check.phi_gap
    if not check.ok:
        diagnostics["verify_reason"] = check.reason
        return SolveReport("Ambiguous", rep.best, pots.alphas, rep.value, diagnostics=diagnostics)
    return SolveReport("Solution", rep.best, pots.alphas, rep.value, diagnostics=diagnostics)


def solve_safely(raw, tol: Tolerances = DEFAULT_TOL) -> tuple[SolveReport, Instance | None]:
    """Validate raw data and solve; validation failures become InvalidInput reports."""
    from .core import validate_instance

    try:
        inst = validate_instance(raw, tol)
    except GIPError as exc:
        return SolveReport("InvalidInput", diagnostics={"error": f"{type(exc).__name__}: {exc}"}), None
    return solve(inst, tol), inst
