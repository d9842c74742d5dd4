"""Acceptance criteria 1-9, each at its stated tolerance.

Every test records a one-line PASS/FAIL verdict (printed in the terminal summary
and with ``-s`` inline) before asserting, so a failing criterion still reports.
"""

from __future__ import annotations

import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE, CORPUS_SECONDS, corpus, in_ambiguity_band
from gaussimage import instances as gen
from gaussimage.assignment import NonUnique, assignment_value, uniqueness_certificate
from gaussimage.cli import main
from gaussimage.core import DEFAULT_TOL, dump_instance, make_instance
from gaussimage.feasibility import check_weak_aleksandrov
from gaussimage.loops import loop_from_cycle_certificate, search_loops
from gaussimage.oracle import enumerate_assignments, oracle_maximizers, oracle_weak_aleksandrov
from gaussimage.pipeline import solve
from gaussimage.polytope import Polytope, compute_phi, verify_solution
from gaussimage.potentials import build_strict_system, constraint_slacks, solve_strict_system, NegativeCycleCertificate


def record(n: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[n] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


def _cli_solve(inst, tmp_path, name):
    src = tmp_path / f"{name}.json"
    out = tmp_path / f"{name}_solution.json"
    src.write_text(dump_instance(inst))
    return main(["solve", str(src), "-o", str(out)]), src, out


def test_criterion_1_triangle(tmp_path):
    inst = gen.triangle()
    t0 = time.perf_counter()
    rep = solve(inst)
    elapsed = time.perf_counter() - t0
    code, _, _ = _cli_solve(inst, tmp_path, "triangle")
    P = rep.polytope(inst)
    check = verify_solution(inst, P, rep.assignment)
    phi_plus_a = compute_phi(P, inst) + assignment_value(inst, rep.assignment)
    ok = (
        code == 0
        and rep.assignment == (0, 1, 2)
        and check.ok
        and abs(check.min_margin - 1.5) <= 1e-9
        and abs(phi_plus_a) <= 1e-9
        and elapsed < 0.1
    )
    record(1, ok, f"exit={code} f={rep.assignment} margin={check.min_margin:.12f} |Phi+A|={abs(phi_plus_a):.1e} t={elapsed:.4f}s")
    assert ok


def test_criterion_2_regular_polygons(tmp_path):
    lines, failures = [], []
    for l in range(3, 9):
        inst = gen.regular_polygon(l)
        t0 = time.perf_counter()
        code, _, _ = _cli_solve(inst, tmp_path, f"polygon{l}")
        orc = oracle_maximizers(inst)
        found = search_loops(inst, l)
        elapsed = time.perf_counter() - t0
        identity = tuple(range(l))
        shift = tuple((t + 1) % l for t in range(l))
        values = [assignment_value(inst, f) for f in (identity, shift)]
        cycle_ok = any(
            sorted(c.v_indices) == list(range(l)) and np.all(np.abs(c.scalars - 1.0) <= 1e-8) for c in found
        )
        checks = {
            "exit2": code == 2,
            "two_maximizers": set(orc.maximizers) == {identity, shift},
            "equal_values": abs(values[0] - values[1]) <= 1e-9,
            "l4_value": l != 4 or abs(orc.value + 2 * math.log(2)) <= 1e-9,
            "one_loop_class": len(found) == 1 and cycle_ok,
            "runtime": elapsed < 1.0,
        }
        bad = [k for k, v in checks.items() if not v]
        if bad:
            failures.append(l)
        lines.append(f"l={l}:{'ok' if not bad else ','.join(bad)}(loops={len(found)},t={elapsed:.2f}s)")
    record(2, not failures, " ".join(lines))
    assert not failures, f"failing polygon sizes {failures}"


def test_criterion_3_oracle_equivalence():
    cases = corpus()
    seconds = CORPUS_SECONDS[0]
    value_bad, verdict_bad, verify_bad, banded = [], [], [], 0
    for c in cases:
        if abs(c.report.value - c.oracle.value) > 1e-9:
            value_bad.append(c.name)
        if in_ambiguity_band(c):
            banded += 1
            continue
        unique = len(c.oracle.maximizers) == 1
        if unique != (c.report.status == "Solution") or (not unique and c.report.status != "NoSolution"):
            verdict_bad.append(c.name)
        if c.report.status == "Solution" and not verify_solution(c.inst, c.report.polytope(c.inst), c.report.assignment).ok:
            verify_bad.append(c.name)
    ok = len(cases) >= 200 and not (value_bad or verdict_bad or verify_bad) and seconds < 60
    record(
        3,
        ok,
        f"{len(cases)} instances, value mismatches={len(value_bad)}, verdict mismatches={len(verdict_bad)}, "
        f"unverified={len(verify_bad)}, in band={banded}, t={seconds:.1f}s",
    )
    assert ok, (value_bad, verdict_bad, verify_bad)


def _hall_instance(rng, trial):
    n = int(rng.integers(2, 4))
    m = int(rng.integers(1, 13))
    weights = [int(w) for w in rng.integers(1, 4, size=m)]
    inst = gen.random_instance(n, weights, gen.trial_seed(99, trial))
    if trial % 2:
        # push all u into a cap so some v's lose their partners and Hall can fail
        axis = np.zeros(n)
        axis[0] = 1.0
        u = inst.u + 1.5 * axis
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        try:
            inst = make_instance(inst.v, weights, u)
        except Exception:
            pass
    return inst


def test_criterion_4_feasibility_equivalence():
    rng = np.random.default_rng(4)
    bad, failing = [], 0
    total = 150
    for trial in range(total):
        inst = _hall_instance(rng, trial)
        flow = check_weak_aleksandrov(inst)
        orc = oracle_weak_aleksandrov(inst)
        if flow.holds != orc.holds:
            bad.append(trial)
            continue
        if not flow.holds:
            failing += 1
            dots = inst.dots()
            covered = {j for j in range(inst.k) for i in flow.violating_subset if dots[j, i] > DEFAULT_TOL.dot}
            actual = len(covered) - sum(inst.weights[i] for i in flow.violating_subset)
            if not (flow.slack == orc.worst_slack == actual):
                bad.append(trial)
    ok = not bad and failing > 0
    record(4, ok, f"{total} instances (m <= 12), {failing} failing Hall, disagreements={len(bad)}")
    assert ok, bad


def test_criterion_5_strict_system_chain():
    bad, solved, checked_constraints = [], 0, 0
    for c in corpus():
        if in_ambiguity_band(c):
            continue
        system = build_strict_system(c.inst, c.report.assignment)
        res = solve_strict_system(system)
        succeeded = not isinstance(res, NegativeCycleCertificate)
        if succeeded != (len(c.oracle.maximizers) == 1):
            bad.append(c.name)
            continue
        if succeeded:
            solved += 1
            slacks = constraint_slacks(system, res.x)
            checked_constraints += len(slacks)
            if slacks.size and slacks.min() < res.epsilon_used:
                bad.append(c.name)
    ok = not bad
    record(5, ok, f"{solved} systems solved, {checked_constraints} constraints checked, mismatches={len(bad)}")
    assert ok, bad


def _proper_assignments(inst, limit, rng):
    proper = [f for f in enumerate_assignments(inst) if assignment_value(inst, f) > -math.inf]
    if len(proper) > limit:
        proper = [proper[i] for i in sorted(rng.choice(len(proper), limit, replace=False))]
    return proper


def test_criterion_6_phi_inequality():
    rng = np.random.default_rng(6)
    cases = corpus()
    per_case = -(-1000 // len(cases))  # at least 1,000 random alpha vectors in total
    pairs = worst = 0
    worst = -math.inf
    violations, iff_bad, literal_lower = 0, 0, 0
    random_alphas = 0
    for c in cases:
        polys = [rng.uniform(0.2, 1.0, c.inst.m) for _ in range(per_case)]
        random_alphas += len(polys)
        if c.report.alphas is not None:
            polys.append(np.asarray(c.report.alphas))
        fs = _proper_assignments(c.inst, 12, rng)
        if c.report.assignment is not None and c.report.assignment not in fs:
            fs.append(c.report.assignment)
        for alphas in polys:
            P = Polytope(c.inst.v, alphas)
            phi = compute_phi(P, c.inst)
            for f in fs:
                s = phi + assignment_value(c.inst, f)
                pairs += 1
                worst = max(worst, s)
                violations += s > 1e-9
                literal_lower += s < -1e-9
                if (abs(s) <= 1e-9) != verify_solution(c.inst, P, f).ok:
                    iff_bad += 1
    ok = violations == 0 and iff_bad == 0 and random_alphas >= 1000
    record(
        6,
        ok,
        f"{pairs} pairs ({random_alphas} random alpha vectors), max Phi+A={worst:.2e}, "
        f"Phi+A>1e-9: {violations}, equality/verified disagreements={iff_bad} "
        f"[read as Phi <= -A; {literal_lower} pairs have Phi+A < -1e-9]",
    )
    assert ok


@pytest.mark.slow
def test_criterion_7_perturbation_openness():
    kept = total = 0
    for idx, c in enumerate(corpus()):
        if c.report.status != "Solution":
            continue
        mag = c.report.diagnostics["min_margin"] / 10
        for s in range(20):
            total += 1
            try:
                inst = gen.perturb(c.inst, mag, "both", seed=np.random.SeedSequence([7, idx, s]))
            except Exception:
                continue
            rep = solve(inst)
            kept += rep.status == "Solution" and rep.assignment == c.report.assignment
    frac = kept / total
    ok = frac >= 0.95
    record(7, ok, f"{kept}/{total} perturbations kept the solution ({frac:.4f})")
    assert ok


def test_criterion_8_genericity():
    t0 = time.perf_counter()
    tally = gen.generic_rate(3, [1] * 5, 500, 7)
    elapsed = time.perf_counter() - t0
    frac = tally.solvable / tally.filtered if tally.filtered else 0.0
    ok = tally.filtered > 0 and frac >= 0.99 and tally.nonunique == 0 and elapsed < 30
    record(8, ok, f"{tally.to_dict()} solvable fraction={frac:.4f} t={elapsed:.1f}s")
    assert ok


def test_criterion_9_loop_round_trip():
    cases = [(c.name, c.inst, c.report.assignment) for c in corpus() if c.report.status == "NoSolution"]
    cases += [(f"polygon{l}", gen.regular_polygon(l), None) for l in range(6, 9)]
    bad, seen = [], 0
    for name, inst, best in cases:
        if best is None:
            best = solve(inst).assignment
        verdict = uniqueness_certificate(inst, best)
        if not isinstance(verdict, NonUnique):
            continue
        seen += 1
        try:
            loop = loop_from_cycle_certificate(inst, best, verdict.cycle)
        except Exception as exc:
            bad.append(f"{name}: {exc}")
            continue
        l = len(loop.v_indices)
        other = list(best)
        for t, j in enumerate(loop.u_indices):
            other[j] = loop.v_indices[(t + 1) % l]
        diff = abs(assignment_value(inst, best) - assignment_value(inst, other))
        if loop.perpendicular_residual > 1e-8 or diff > l * 1e-9:
            bad.append(f"{name}: perp={loop.perpendicular_residual:.1e} diff={diff:.1e}")
    ok = seen > 0 and not bad
    record(9, ok, f"{seen} NonUnique verdicts converted, failures={len(bad)}")
    assert ok, bad
