"""Solver for the discrete Gauss image problem.

Given a weighted measure on directions ``v_i`` and an equal-weight measure on
directions ``u_j``, decide whether a polytope with vertices on the rays of the
``v_i`` sends every ``u_j`` into the interior of a vertex normal cone with the
prescribed multiplicities; construct it when it exists, and certify why not
otherwise.
"""

from .assignment import assignment_value, maximize_assignment, solve_assignment, uniqueness_certificate
from .core import DEFAULT_TOL, DiscreteMeasure, Instance, Tolerances, load_instance, make_instance, validate_instance
from .feasibility import check_weak_aleksandrov, feasibility_report, is_concentrated_on_closed_hemisphere, uniform_alpha
from .instances import generate, perturb, generic_rate
from .loops import build_loop, loop_from_cycle_certificate, search_loops
from .oracle import enumerate_assignments, oracle_maximizers, oracle_weak_aleksandrov
from .pipeline import SolveReport, solve
from .polytope import Polytope, compute_phi, gauss_image_measure, radial_gauss_assignment, support_value, verify_solution
from .potentials import alphas_from_potentials, build_strict_system, solve_strict_system

__version__ = "0.1.0"

__all__ = [
    "assignment_value",
    "maximize_assignment",
    "solve_assignment",
    "uniqueness_certificate",
    "DEFAULT_TOL",
    "DiscreteMeasure",
    "Instance",
    "Tolerances",
    "load_instance",
    "make_instance",
    "validate_instance",
    "check_weak_aleksandrov",
    "feasibility_report",
    "is_concentrated_on_closed_hemisphere",
    "uniform_alpha",
    "generate",
    "perturb",
    "generic_rate",
    "build_loop",
    "loop_from_cycle_certificate",
    "search_loops",
    "enumerate_assignments",
    "oracle_maximizers",
    "oracle_weak_aleksandrov",
    "SolveReport",
    "solve",
    "Polytope",
    "compute_phi",
    "gauss_image_measure",
    "radial_gauss_assignment",
    "support_value",
    "verify_solution",
    "alphas_from_potentials",
    "build_strict_system",
    "solve_strict_system",
]
