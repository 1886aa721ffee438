"""The ten acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line with the measured
quantity.  Run ``pytest tests/test_acceptance.py -v`` or execute this file
directly for the summary alone.
"""

from __future__ import annotations

import random
import time

import pytest

from koornwinder_asep import ParamPoint, build_state, random_params
from koornwinder_asep.exact import Q
from koornwinder_asep.hecke import cycle_operator_check, verify_hecke_relations
from koornwinder_asep.model import Sector, markov_matrix, verify_integrability
from koornwinder_asep.montecarlo import SimConfig, compare, simulate
from koornwinder_asep.observables import (
    density_first_class,
    exact_partition,
    mimachi_current,
    mimachi_density,
    mimachi_partition,
    phase_diagram,
    steady_current,
    verify_generating_function,
)
from koornwinder_asep.qkz import (
    h1_formula,
    h_closed_form,
    h_sequence,
    verify_exchange_equations,
    verify_h_duality,
    verify_recursions,
)
from koornwinder_asep.qseries import aw_asymptote_errors, aw_orthogonality_check, contiguous_relation_suite

SEED = 2718


def _physical_points(n, seed=SEED):
    rng = random.Random(seed)
    return [random_params(rng) for _ in range(n)]


def stationarity():
    start = time.perf_counter()
    bad = []
    for P in _physical_points(3):
        for N in range(7):
            for m in range(N + 1):
                st = build_state(N, m, P, check_paths=False)
                if any(markov_matrix(Sector(N, m), P).matvec(st.at_one())):
                    bad.append((N, m))
    elapsed = time.perf_counter() - start
    return not bad and elapsed < 300, f"3 points, 0<=m<=N<=6, failures={bad}, {elapsed:.1f}s (budget 300s)"


def qkz_suite():
    rng = random.Random(SEED)
    failures = []
    for N in range(1, 6):
        for m in (0, 1, 2):
            if m > N:
                continue
            P = random_params(rng)
            rep = verify_exchange_equations(build_state(N, m, P), npoints=5, rng=rng)
            failures += [(N, m, e["check"]) for e in rep if not e["pass"]]
    return not failures, f"N<=5, m in {{0,1,2}}, 5 points each, failures={failures[:3]}"


def integrability_suite():
    P = _physical_points(1)[0]
    failures = []
    count = 0
    for N in range(1, 5):
        for m in range(N + 1):
            rep = verify_integrability(N, m, P, npoints=4)
            count += len(rep)
            failures += [(N, m, e["identity"]) for e in rep if not e["pass"]]
    return not failures, f"{count} identity checks at N<=4, failures={failures[:3]}"


def hecke_suite():
    rng = random.Random(SEED)
    P = random_params(rng, physical=False)
    failures = []
    for N in range(1, 5):
        failures += [(N, e["relation"]) for e in verify_hecke_relations(N, P, degree=3) if not e["pass"]]
    cycles = [(k, N - k) for N in range(1, 6) for k in range(N + 1)]
    failures += [("cycle", k, m) for k, m in cycles if cycle_operator_check(k, m, P)]
    return not failures, f"relations on degree<=3 monomials N<=4, {len(cycles)} cycle cases, failures={failures[:3]}"


def h_coefficients():
    rng = random.Random(SEED)
    ok_closed = ok_dual = ok_h1 = True
    for _ in range(20):
        P = random_params(rng, physical=False)
        hs = h_sequence(P.a, P.b, P.c, P.d, P.t, 12)
        ok_closed &= hs == [h_closed_form(n, P) for n in range(13)]
        ok_dual &= verify_h_duality(P, 12)
        ok_h1 &= hs[1] == h1_formula(P)
    ok = ok_closed and ok_dual and ok_h1
    return ok, f"20 points, n<=12: closed form {ok_closed}, duality {ok_dual}, h_1 {ok_h1}"


def partition_theorems():
    P = _physical_points(1)[0]
    failures = []
    for N in range(1, 6):
        for m in range(N + 1):
            try:
                exact_partition(N, m, P, check=True)
            except ArithmeticError as exc:
                failures.append((N, m, str(exc)))
            if not verify_generating_function(N, m, P, Q("3/4")):
                failures.append((N, m, "fugacity"))
            failures += [(N, m, e["check"]) for e in verify_recursions(N, m, P)
                         if e.get("required", True) and not e["pass"]]
    return not failures, f"invariance, lead coefficient, fugacity, recursions for N<=5, failures={failures[:3]}"


def askey_wilson_layer():
    a, b, c, d = Q("-1/2"), Q("1/3"), Q("-1/4"), Q("1/5")
    q = Q("1/4")
    worst = max(aw_orthogonality_check(n, m, *(float(v) for v in (a, b, c, d, q)))
                for n in range(6) for m in range(n, 6))
    rep = contiguous_relation_suite(a, b, c, d, Q("1/2"), range(9), [Q("3/2"), Q("-2/7"), Q("5/3")])
    contiguous = all(e["pass"] for e in rep if e["required"])
    errs = aw_asymptote_errors([20, 40, 80], 3, a, b, c, d, q)
    decreasing = errs[0] > errs[1] > errs[2]
    ok = worst < 1e-8 and contiguous and decreasing
    return ok, (f"orthogonality max rel {worst:.1e} (<1e-8), contiguous m<=8 {contiguous}, "
                f"asymptote errors {', '.join(f'{e:.1e}' for e in errs)}")


def integral_formula():
    disk = ParamPoint(Q("1/2"), Q("-1/2"), Q("1/3"), Q("-1/4"), Q("1/5"))
    worst = 0.0
    for N in range(1, 7):
        for m in range(N + 1):
            ex = float(exact_partition(N, m, disk).Zhom)
            worst = max(worst, abs(mimachi_partition(N, m, disk) - ex) / abs(ex))
    physical = ParamPoint(Q("1/2"), Q(-3), Q("1/3"), Q("-1/2"), Q("1/5"))
    val, plan = mimachi_partition(5, 2, physical, with_plan=True)
    ex = float(exact_partition(5, 2, physical).Zhom)
    res_err = abs(val - ex) / abs(ex)
    ok = worst < 1e-8 and res_err < 1e-6 and plan.added
    return ok, f"unit disk N<=6 max rel {worst:.1e} (<1e-8); a=-3 with {len(plan.added)} residues rel {res_err:.1e} (<1e-6)"


PHASE_POINTS = {
    "maximal-current": ParamPoint(Q("1/2"), Q("-1/2"), Q("1/3"), Q("-1/2"), Q("1/5")),
    "a-dominated": ParamPoint(Q("1/2"), Q(-3), Q("1/3"), Q("-1/2"), Q("1/5")),
    "c-dominated": ParamPoint(Q("1/2"), Q("-1/2"), Q("1/3"), Q(-3), Q("1/5")),
}


def thermodynamic_limit():
    rho = Q("1/5")
    lines = []
    ok = True
    for name, P in PHASE_POINTS.items():
        ph = phase_diagram(rho, P)
        assert ph.phase == name
        series = []
        for N in (50, 100, 200):
            m = int(rho * N)
            series.append((mimachi_current(N, m, P), mimachi_density(N, m, P)))
        J, r = series[-1]
        eJ = abs(J - ph.J) / abs(ph.J)
        er = abs(r - ph.rho_bullet) / abs(ph.rho_bullet)
        ok &= eJ < 0.02 and er < 0.02
        lines.append(f"{name}: J err {eJ:.2%}, rho err {er:.2%}")
    return ok, "N=200: " + "; ".join(lines)


def monte_carlo():
    P = PHASE_POINTS["maximal-current"]
    res = simulate(SimConfig(4, 1, P, events=10_000_000, seed=7))
    rep = compare(res, build_state(4, 1, P))
    ok = rep["tv"] < 0.01 and abs(rep["current_z"]) < 3
    return ok, f"N=4 m=1 1e7 events: TV {rep['tv']:.2e} (<0.01), current z {rep['current_z']:.2f} (|z|<3)"


CRITERIA = [
    (1, "stationarity oracle", stationarity),
    (2, "qKZ exchange suite", qkz_suite),
    (3, "integrability suite", integrability_suite),
    (4, "Hecke suite", hecke_suite),
    (5, "h-coefficients", h_coefficients),
    (6, "partition-function theorems", partition_theorems),
    (7, "Askey-Wilson layer", askey_wilson_layer),
    (8, "integral formula", integral_formula),
    (9, "thermodynamic limit", thermodynamic_limit),
    (10, "Monte Carlo cross-validation", monte_carlo),
]


def _line(number, name, ok, detail):
    return f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {name}: {detail}"


@pytest.mark.acceptance
@pytest.mark.parametrize("number,name,check", CRITERIA, ids=[f"criterion-{n}" for n, _, _ in CRITERIA])
def test_criterion(number, name, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print("\n" + _line(number, name, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for number, name, check in CRITERIA:
        ok, detail = check()
        failed += not ok
        print(_line(number, name, ok, detail), flush=True)
    raise SystemExit(1 if failed else 0)
