import random

import pytest

from koornwinder_asep import ParamPoint, build_state, random_params
from koornwinder_asep.exact import LaurentPoly, Q
from koornwinder_asep.model import Sector, markov_matrix
from koornwinder_asep.qkz import (
    StateVector,
    asc_bridge_value,
    h1_formula,
    h_closed_form,
    h_coeff,
    h_sequence,
    reference_component,
    verify_exchange_equations,
    verify_fugacity_covariance,
    verify_h_duality,
    verify_recursions,
)

H_POINT = ParamPoint(Q("1/2"), Q(-2), Q("1/3"), Q("-1/2"), Q("1/4"))


def test_h_coefficients_at_a_fixed_point():
    assert h_coeff(0, H_POINT) == 1
    assert h_coeff(1, H_POINT) == Q("1/2") == h1_formula(H_POINT)
    assert h_coeff(2, H_POINT) == Q("1/4") == h_closed_form(2, H_POINT)


def test_h_recursion_equals_closed_form_and_duality():
    r = random.Random(5)
    for _ in range(20):
        P = random_params(r, physical=False)
        hs = h_sequence(P.a, P.b, P.c, P.d, P.t, 12)
        assert hs == [h_closed_form(n, P) for n in range(13)]
        assert hs[1] == h1_formula(P)
        assert verify_h_duality(P, 12)


def test_h_agrees_with_al_salam_chihara_bridge():
    a, b, u, v, t = Q("-1/3"), Q("2/5"), Q("1/2"), Q("3/4"), Q("1/4")
    for eps in (1, -1):
        hs = h_sequence(a, b, eps * u * u, eps * v * v, t, 6)
        assert all(hs[n] == asc_bridge_value(n, a, b, u, v, t, eps) for n in range(7))
        assert any(hs[n] != asc_bridge_value(n, a, b, u, v, t, eps, root_sign=-1) for n in range(7))


def test_reference_components(maximal_current):
    P = maximal_current
    assert reference_component(0, 2, P) == LaurentPoly.const(2, 1)
    z1 = LaurentPoly.var(1, 0, -1)
    assert reference_component(1, 0, P) == z1 + h_coeff(1, P)
    shifted = P.with_(c=P.t * P.c, d=P.t * P.d)
    i1, i2 = LaurentPoly.var(3, 0, -1), LaurentPoly.var(3, 1, -1)
    expected = i1 * i2 + (i1 + i2).scale(h_coeff(1, shifted)) + h_coeff(2, shifted)
    assert reference_component(2, 1, P) == expected


def test_single_site_states(maximal_current):
    P = maximal_current
    assert build_state(1, 1, P)["*"] == LaurentPoly.const(1, 1)
    st = build_state(1, 0, P)
    w_empty, w_full = st.at_one()
    assert w_full / w_empty == (P.alpha + P.delta) / (P.gamma + P.beta)


@pytest.mark.parametrize("N", range(0, 6))
def test_stationarity_all_sectors(N, physical_points):
    for P in physical_points[:2]:
        for m in range(N + 1):
            st = build_state(N, m, P)
            M = markov_matrix(Sector(N, m), P)
            assert not any(M.matvec(st.at_one()))
            assert all(x > 0 for x in st.at_one())


@pytest.mark.parametrize("N,m", [(2, 0), (3, 1), (4, 1), (4, 2), (5, 0)])
def test_exchange_equations(N, m, rng):
    P = random_params(rng)
    report = verify_exchange_equations(build_state(N, m, P), npoints=3, rng=rng)
    assert all(e["pass"] for e in report), [e for e in report if not e["pass"]]


def test_exchange_equations_reject_a_corrupted_component(maximal_current):
    st = build_state(3, 1, maximal_current)
    w = st.sector.configs[4]
    comps = dict(st.components)
    comps[w] = comps[w] + LaurentPoly.const(3, 1)
    bad = StateVector(st.sector, st.params, comps)
    assert not all(e["pass"] for e in verify_exchange_equations(bad, npoints=2))


@pytest.mark.parametrize("N,m", [(2, 0), (2, 1), (3, 1), (4, 2), (5, 1)])
def test_recursions_required_entries_pass(N, m, rng):
    P = random_params(rng)
    report = verify_recursions(N, m, P)
    failing = [e for e in report if e.get("required", True) and not e["pass"]]
    assert report and not failing


def test_printed_partition_recursion_is_reported_as_failing(maximal_current):
    report = verify_recursions(3, 1, maximal_current)
    printed = [e for e in report if e["check"].startswith("rec-part-func with Z_{N-1,m-1}")]
    assert printed and not printed[0]["pass"] and printed[0]["required"] is False


@pytest.mark.parametrize("xi", [Q(1), Q("2/3"), Q(-3)])
def test_fugacity_covariance(xi, maximal_current):
    report = verify_fugacity_covariance(3, 1, maximal_current, xi)
    assert all(e["pass"] for e in report)


def test_state_json_round_trip(maximal_current):
    st = build_state(2, 1, maximal_current)
    back = StateVector.from_json_obj(st.to_json_obj())
    assert back.components == st.components and back.params == st.params
