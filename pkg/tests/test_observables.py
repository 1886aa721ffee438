import csv
import io
import math

import pytest

from koornwinder_asep import ParamPoint, build_state, random_params
from koornwinder_asep.exact import InvariantViolation, LaurentPoly, Q
from koornwinder_asep.model import SectorError
from koornwinder_asep.observables import (
    CSV_COLUMNS,
    ContourError,
    contour_plan,
    density_first_class,
    exact_partition,
    mimachi_current,
    mimachi_partition,
    partition_function,
    phase_diagram,
    rows_to_csv,
    steady_current,
    sweep_rows,
    verify_generating_function,
    weighted_partition,
)
from koornwinder_asep.params import ParameterError
from koornwinder_asep.qkz import StateVector, count_particles

DISK = ParamPoint(Q("1/2"), Q("-1/2"), Q("1/3"), Q("-1/4"), Q("1/5"))
A_PHASE = ParamPoint(Q("1/2"), Q(-3), Q("1/3"), Q("-1/2"), Q("1/5"))
C_PHASE = ParamPoint(Q("1/2"), Q("-1/2"), Q("1/3"), Q(-3), Q("1/5"))


def test_single_site_current_and_density(physical_points):
    for P in physical_points:
        total = P.alpha + P.beta + P.gamma + P.delta
        assert steady_current(1, 0, P) == (P.alpha * P.beta - P.gamma * P.delta) / total
        assert density_first_class(1, 0, P) == (P.alpha + P.delta) / total
        assert steady_current(1, 1, P) == 0
        assert density_first_class(1, 1, P) == 0
    assert density_first_class(3, 3, physical_points[0]) == 0


def test_single_site_current_sign_is_net_left_injection(maximal_current):
    # alpha injects at the left, gamma removes there; the default convention is the net flux
    P = maximal_current
    p_empty = (P.gamma + P.beta) / (P.alpha + P.beta + P.gamma + P.delta)
    assert steady_current(1, 0, P) == P.alpha * p_empty - P.gamma * (1 - p_empty)


@pytest.mark.parametrize("N,m", [(2, 0), (3, 1), (4, 1), (4, 2), (5, 2)])
def test_current_routes_agree(N, m, physical_points):
    for P in physical_points:
        assert steady_current(N, m, P, method="ratio") == steady_current(N, m, P, method="flux")


@pytest.mark.parametrize("N,m", [(2, 0), (3, 1), (4, 2)])
def test_density_routes_agree(N, m, maximal_current):
    assert density_first_class(N, m, maximal_current) == density_first_class(
        N, m, maximal_current, method="log-derivative"
    )


def test_sector_errors(maximal_current):
    with pytest.raises(SectorError):
        steady_current(2, 3, maximal_current)
    assert steady_current(3, 3, maximal_current, method="flux") == 0


@pytest.mark.parametrize("N,m", [(1, 0), (2, 1), (3, 0), (4, 1), (5, 2)])
def test_partition_function_invariance_and_lead(N, m, physical_points):
    for P in physical_points:
        data = exact_partition(N, m, P, check=True)
        assert data.Zhom > 0
        assert data.Zpoly.coeff([-1] * (N - m) + [0] * m) == 1


def test_partition_function_rejects_a_non_symmetric_sum(maximal_current):
    st = build_state(2, 0, maximal_current)
    comps = dict(st.components)
    w = st.sector.configs[0]
    comps[w] = comps[w] + LaurentPoly.var(2, 0)
    with pytest.raises(InvariantViolation):
        partition_function(StateVector(st.sector, st.params, comps))


def test_weighted_partition_limits(maximal_current):
    st = build_state(3, 1, maximal_current)
    assert weighted_partition(st, Q(1)) == st.partition_poly()
    free = LaurentPoly.zero(3)
    for w, p in st.components.items():
        if count_particles(w) == 0:
            free = free + p
    assert weighted_partition(st, Q(0)) == free


def test_generating_function_identity(maximal_current):
    assert verify_generating_function(2, 0, maximal_current, Q(2))
    assert verify_generating_function(4, 1, maximal_current, Q("3/5"))


def test_contour_integral_inside_the_disk():
    assert abs(mimachi_partition(1, 1, DISK) - 1) < 1e-8
    for N, m in [(2, 0), (4, 1), (5, 3)]:
        exact = float(exact_partition(N, m, DISK).Zhom)
        assert abs(mimachi_partition(N, m, DISK) - exact) < 1e-8 * abs(exact)


@pytest.mark.parametrize("P", [A_PHASE, C_PHASE, ParamPoint(Q("1/2"), Q(-3), Q("1/3"), Q(-3), Q("1/5"))])
def test_contour_integral_with_residues(P):
    _, plan = mimachi_partition(3, 1, P, with_plan=True)
    assert plan.added and plan.removed
    exact = float(exact_partition(3, 1, P).Zhom)
    for method in ("analytic", "circle"):
        assert abs(mimachi_partition(3, 1, P, residues=method) - exact) < 1e-6 * abs(exact)


def test_contour_integral_with_fugacity(maximal_current):
    data = exact_partition(3, 1, maximal_current)
    xi = Q("5/4")
    assert abs(mimachi_partition(3, 1, maximal_current, xi=xi) - float(data.weighted_hom(xi * xi))) < 1e-9


def test_contour_plan_refuses_poles_on_the_circle():
    with pytest.raises(ContourError):
        contour_plan((-1.0, 0.3, -0.5, 0.2), 0.25)


def test_contour_integral_needs_small_t():
    with pytest.raises(ParameterError):
        mimachi_partition(2, 0, ParamPoint(Q(2), Q("-1/2"), Q(3), Q("-1/2"), Q(5)))


def test_numeric_current_matches_exact(maximal_current):
    exact = float(steady_current(5, 2, maximal_current))
    assert abs(mimachi_current(5, 2, maximal_current) - exact) < 1e-9 * abs(exact)
    assert mimachi_current(2, 2, maximal_current) == 0


def test_phase_examples():
    P = ParamPoint(Q("1/2"), Q("-1/2"), Q("1/3"), Q("-1/2"), Q("1/5"))
    res = phase_diagram(Q(0), P)
    assert res.phase == "maximal-current"
    assert res.J == pytest.approx(-3 / 8)
    assert res.rho_bullet == pytest.approx(1 / 2)
    res = phase_diagram(Q(0), A_PHASE)
    assert res.phase == "a-dominated"
    assert res.J == pytest.approx(-3 * (2 - 0.5) / 16)
    res = phase_diagram(Q("1/5"), C_PHASE)
    assert res.phase == "c-dominated"
    assert res.rho_bullet == pytest.approx(1 / 4)


def test_phase_boundary_reports_both_sides():
    P = ParamPoint(Q("1/2"), Q(-1), Q("1/3"), Q("-1/2"), Q("1/5"))
    with pytest.warns(UserWarning, match="boundary"):
        res = phase_diagram(Q(0), P)
    assert set(res.alternatives) == {"maximal-current", "a-dominated"}


@pytest.mark.filterwarnings("ignore:rho_star=1/2 lies on the boundary")
def test_phase_sequence_is_monotone_along_rho():
    phases = [phase_diagram(Q(k) / 10, A_PHASE).phase for k in range(10)]
    switch = phases.index("maximal-current")
    assert set(phases[:switch]) == {"a-dominated"} and set(phases[switch:]) == {"maximal-current"}


def test_phase_diagram_input_checks(maximal_current):
    with pytest.raises(ValueError):
        phase_diagram(Q(1), maximal_current)
    with pytest.raises(ParameterError):
        phase_diagram(Q(0), maximal_current.with_(a=Q("1/2")))


def test_sweep_rows_csv(maximal_current):
    rows = sweep_rows(maximal_current, [2, 4], Q("1/2"), method="exact")
    assert [r["m"] for r in rows] == [1, 2]
    assert rows[1]["J"] == str(steady_current(4, 2, maximal_current))
    parsed = list(csv.DictReader(io.StringIO(rows_to_csv(rows))))
    assert tuple(parsed[0]) == CSV_COLUMNS
    assert math.isclose(float(parsed[0]["Z"].split("/")[0]) / float(parsed[0]["Z"].split("/")[1]),
                        float(exact_partition(2, 1, maximal_current).Zhom))
