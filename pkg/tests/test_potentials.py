import math

import numpy as np
import pytest

from conftest import weighted
from gaussimage.errors import ImproperAssignment, NonFiniteInput
from gaussimage.potentials import (
    Constraint,
    NegativeCycleCertificate,
    Potentials,
    StrictSystem,
    alphas_from_potentials,
    build_strict_system,
    constraint_slacks,
    solve_strict_system,
)


def test_triangle_system_empty(tri):
    system = build_strict_system(tri, (0, 1, 2))
    assert system.constraints == ()
    res = solve_strict_system(system)
    assert isinstance(res, Potentials)
    assert np.array_equal(res.x, [0, 0, 0]) and np.array_equal(res.alphas, [1, 1, 1])


def test_square_system(sq):
    system = build_strict_system(sq, (0, 1, 2, 3))
    pairs = sorted((c.target, c.source) for c in system.constraints)
    # u_j faces v_j and v_{j+1} equally, so every bound is zero
    assert pairs == [(0, 1), (1, 2), (2, 3), (3, 0)]
    assert all(abs(c.bound) < 1e-12 for c in system.constraints)
    res = solve_strict_system(system)
    assert isinstance(res, NegativeCycleCertificate)
    assert sorted(res.cycle) == [0, 1, 2, 3]
    assert abs(res.bound_sum) < 1e-12
    hops = res.hops(system)
    assert all(hops[t].dst == hops[(t + 1) % 4].src for t in range(4))


def test_weighted_system():
    system = build_strict_system(weighted(), (0, 0, 1))
    # u3 only faces v2; u1, u2 only face v1
    assert system.constraints == ()


def test_improper_assignment(tri):
    with pytest.raises(ImproperAssignment):
        build_strict_system(tri, (1, 0, 2))


def test_single_constraint():
    system = StrictSystem(2, (Constraint(0, 1, -0.5, 0),))
    res = solve_strict_system(system)
    assert isinstance(res, Potentials)
    assert res.x[0] - res.x[1] >= -0.5 + res.epsilon_used
    assert res.epsilon_used > 0
    assert np.all(constraint_slacks(system, res.x) >= res.epsilon_used)


def test_alphas_from_potentials():
    assert np.array_equal(alphas_from_potentials([0, 0, 0]), [1, 1, 1])
    assert np.allclose(alphas_from_potentials([0, -math.log(2)]), [1, 0.5])
    assert np.allclose(alphas_from_potentials([5, 5, 4]), [1, 1, math.exp(-1)])
    with pytest.raises(NonFiniteInput):
        alphas_from_potentials([0, math.inf])


def test_shift_invariance():
    x = np.array([0.3, -1.2, 0.7])
    assert np.allclose(alphas_from_potentials(x), alphas_from_potentials(x + 11.5))


def test_tight_cycle_falls_back_to_smaller_slack():
    # bounds sum to -1e-6: feasible only for eps below ~3.3e-7
    system = StrictSystem(3, (Constraint(0, 1, 0.0, 0), Constraint(1, 2, 0.0, 1), Constraint(2, 0, -1e-6, 2)))
    res = solve_strict_system(system)
    assert isinstance(res, Potentials)
    assert res.iterations > 1
    assert 0 < res.epsilon_used < 1e-6 / 3
    assert np.all(constraint_slacks(system, res.x) >= res.epsilon_used)
