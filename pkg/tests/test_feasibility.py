import math

import numpy as np
import pytest

from conftest import hall_failing
from gaussimage.errors import NotWeakAleksandrov
from gaussimage.feasibility import (
    check_weak_aleksandrov,
    feasibility_report,
    is_concentrated_on_closed_hemisphere,
    uniform_alpha,
)
from gaussimage.oracle import oracle_weak_aleksandrov


def test_triangle_holds(tri):
    res = check_weak_aleksandrov(tri)
    assert res.holds and res.flow == 3 and res.violating_subset is None


def test_hall_failure_subset():
    res = check_weak_aleksandrov(hall_failing())
    assert not res.holds
    assert res.violating_subset == (0,)
    assert res.slack == -1


def test_square_holds_and_agrees_with_oracle(sq):
    assert check_weak_aleksandrov(sq).holds
    orc = oracle_weak_aleksandrov(sq)
    assert orc.holds and orc.worst_slack == 0


def test_hemisphere(tri, sq):
    assert is_concentrated_on_closed_hemisphere(tri.v) is None
    w = is_concentrated_on_closed_hemisphere([[0, 1], [math.sqrt(0.5), math.sqrt(0.5)]])
    assert w is not None
    # any closed-hemisphere witness is acceptable, (0, -1) is one of them
    assert math.isclose(np.linalg.norm(w), 1.0)
    assert np.all(np.array([[0, 1], [math.sqrt(0.5), math.sqrt(0.5)]]) @ w <= 1e-12)
    assert is_concentrated_on_closed_hemisphere(np.vstack([sq.v, sq.u])) is None


def test_hemisphere_boundary_counts_as_concentrated():
    # three directions in a closed half-plane, two of them antipodal
    w = is_concentrated_on_closed_hemisphere([[1, 0], [-1, 0], [0, 1]])
    assert w is not None and abs(w[0]) < 1e-9 and w[1] < 0


def test_uniform_alpha(tri, sq):
    assert math.isclose(uniform_alpha(tri), math.pi / 2)
    assert math.isclose(uniform_alpha(sq), math.pi / 4)
    with pytest.raises(NotWeakAleksandrov):
        uniform_alpha(hall_failing())


def test_uniform_alpha_degrades_with_small_dots():
    from gaussimage.core import make_instance

    prev = math.pi
    for t in (0.5, 0.1, 0.01, 0.001):
        # u0 . v0 = sin t is the only positive dot of v0
        inst = make_instance([[0, 1], [0, -1]], [1, 1], [[math.cos(t), math.sin(t)], [0, -1]])
        a = uniform_alpha(inst)
        assert math.isclose(a, t) and a < prev
        prev = a


def test_report_dict(tri):
    d = feasibility_report(tri).to_dict()
    assert d["weak_aleksandrov"] and not d["concentrated"]
