import cmath
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from koornwinder_asep.exact import Q
from koornwinder_asep.qseries import (
    DivergenceError,
    al_salam_chihara,
    al_salam_chihara_recurrence,
    askey_wilson,
    askey_wilson_at_pole,
    askey_wilson_recurrence,
    aw_asymptote,
    aw_asymptote_errors,
    aw_B,
    aw_by_contiguous_chain,
    aw_kernel,
    aw_norm,
    aw_orthogonality_check,
    circle_average,
    continuous_q_hermite,
    contiguous_relation_suite,
    contiguous_residuals,
    asc_contiguous_residuals,
    q_multinomial,
    q_pochhammer,
)

AW = (Q("-1/2"), Q("1/3"), Q("-1/4"), Q("1/5"))
AWF = tuple(float(v) for v in AW)
q_exact = Q("1/4")

rationals = st.fractions(min_value=-3, max_value=3, max_denominator=7).filter(lambda x: x not in (0, 1, -1))


def test_finite_pochhammer_is_exact():
    q = Q("1/3")
    assert q_pochhammer(Q(2), q, 0) == 1
    assert q_pochhammer(q, q, 2) == (1 - q) * (1 - q * q)


def test_infinite_pochhammer_functional_equation():
    a, q = 0.5, 1 / 3
    assert abs(q_pochhammer(a, q) - (1 - a) * q_pochhammer(a * q, q)) < 1e-14
    with pytest.raises(DivergenceError):
        q_pochhammer(0.5, 1.5)


def test_q_multinomial_reduces_to_binomial_at_q_to_one_limit_values():
    q = Q("1/2")
    # [4, 2]_q = (1 + q^2)(1 + q + q^2)
    assert q_multinomial(4, (2,), q) == (1 + q ** 2) * (1 + q + q ** 2)
    assert q_multinomial(3, (4,), q) == 0


def test_askey_wilson_low_degrees():
    a, b, c, d = AW
    q, z = q_exact, Q("3/2")
    assert askey_wilson(0, z, a, b, c, d, q) == 1
    # two-term 4phi3: a^-1 [(1-ab)(1-ac)(1-ad) + (1-1/q)(1-abcd)(1-az)(1-a/z) q / (1-q)]
    expected = ((1 - a * b) * (1 - a * c) * (1 - a * d) - (1 - a * b * c * d) * (1 - a * z) * (1 - a / z)) / a
    assert askey_wilson(1, z, a, b, c, d, q) == expected


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 6), rationals)
def test_askey_wilson_symmetries(n, z):
    a, b, c, d = AW
    z = Q(z)
    p = askey_wilson(n, z, a, b, c, d, q_exact)
    assert p == askey_wilson(n, 1 / z, a, b, c, d, q_exact)
    assert p == askey_wilson(n, z, c, a, d, b, q_exact)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 7), rationals)
def test_recurrence_matches_terminating_sum(n, z):
    a, b, c, d = AW
    z = Q(z)
    assert askey_wilson_recurrence(n, z, a, b, c, d, q_exact) == askey_wilson(n, z, a, b, c, d, q_exact)


@pytest.mark.parametrize("n,k", [(3, 0), (5, 2), (6, 4)])
def test_pole_evaluation_matches_sum(n, k):
    a, b, c, d = AW
    x = a * q_exact ** k
    assert askey_wilson_at_pole(n, k, a, b, c, d, q_exact) == askey_wilson(n, x, a, b, c, d, q_exact)


def test_zero_parameters_reduce_to_q_hermite():
    q, z = Q("1/3"), Q("5/2")
    for n in range(6):
        assert askey_wilson(n, z, 0, 0, 0, 0, q) == continuous_q_hermite(n, z, q)
        assert askey_wilson(n, z, 0, Q("1/2"), 0, 0, q) == askey_wilson(n, z, Q("1/2"), 0, 0, 0, q)


def test_al_salam_chihara_specialisation_and_recurrences():
    a, b, q = Q("-1/3"), Q("2/5"), Q("1/4")
    for z in (Q("3/2"), Q("-2/7")):
        for n in range(9):
            val = al_salam_chihara(n, z, a, b, q)
            assert val == askey_wilson(n, z, a, b, Q(0), Q(0), q)
            assert val == al_salam_chihara_recurrence(n, z, a, b, q)
            x = (z + 1 / z) / 2
            assert val == al_salam_chihara_recurrence(n, x, a, b, q, convention="printed")


def test_kernel_against_direct_product():
    q = 0.25
    x = cmath.exp(1j * math.pi / 3)
    direct = 1
    for k in range(200):
        qk = q ** k
        num = (1 - x * x * qk) * (1 - qk / (x * x))
        den = 1
        for p in AWF:
            den *= (1 - p * x * qk) * (1 - p * qk / x)
        direct *= num / den
    assert abs(aw_kernel(x, *AWF, q) - direct) < 1e-14 * abs(direct)
    assert abs(aw_kernel(x, *AWF, q) - aw_kernel(1 / x, *AWF, q)) < 1e-14


def test_kernel_warns_near_a_pole():
    with pytest.warns(UserWarning, match="pole"):
        aw_kernel(1 / AWF[0] + 1e-13, *AWF, 0.25)


def test_circle_average_of_a_laurent_polynomial():
    assert abs(circle_average(lambda z: 3 + z + 2 / z ** 2) - 3) < 1e-14


@pytest.mark.parametrize("n,m", [(0, 0), (0, 1), (3, 3), (2, 5), (5, 5)])
def test_orthogonality(n, m):
    assert aw_orthogonality_check(n, m, *AWF, 0.25) < 1e-8


def test_norm_of_constant_is_total_mass():
    mass = circle_average(lambda x: aw_kernel(x, *AWF, 0.25), tol=1e-14) / 2
    assert abs(mass - aw_norm(0, *AWF, 0.25)) < 1e-12


def test_asymptote():
    assert aw_B(0.0, *AWF, 0.25) == 1
    errs = aw_asymptote_errors([20, 40, 80], 3, *AW, q_exact)
    assert errs[0] > errs[1] > errs[2]
    with pytest.raises(ValueError):
        aw_asymptote(5, 1, *AWF, 0.25)


def test_zero_parameter_asymptote_is_two_term_form():
    q, z = Q("1/4"), Q(3)
    m = 30
    exact = float(continuous_q_hermite(m, z, q))
    approx = aw_asymptote(m, 3.0, 0.0, 0.0, 0.0, 0.0, 0.25)
    assert abs(exact - approx) / abs(exact) < 1e-12


@pytest.mark.parametrize("m", range(0, 9))
def test_contiguous_relations_exact(m):
    a, b, c, d = AW
    s = Q("1/2")
    report = contiguous_relation_suite(a, b, c, d, s, [m], [Q("3/2"), Q("-2/7")])
    assert all(e["pass"] for e in report if e["required"])
    printed = {e["relation"]: e["pass"] for e in report if not e["required"]}
    assert printed["theta(m,m)_printed"] == (m == 0)


def test_monic_normalisation_breaks_omega_relation():
    a, b, c, d = AW
    res = contiguous_residuals(3, Q("3/2"), a, b, c, d, Q("1/2"), monic=True)
    assert res["omega(m+1,m)"] != 0


def test_first_asc_relation_at_degree_four():
    res = asc_contiguous_residuals(4, Q("5/3"), Q("-1/3"), Q("2/5"), Q("1/2"))
    assert res["asc-contiguous"] == 0 and res["asc-difference"] == 0


def test_contiguous_chain_builds_the_polynomials():
    a, b, c, d = AW
    z = Q("5/3")
    for n in range(5):
        assert aw_by_contiguous_chain(n, z, a, b, c, d, q_exact) == askey_wilson(n, z, a, b, c, d, q_exact)


def test_float_recurrence_is_accurate_at_high_degree():
    a, b, c, d = AW
    exact = float(askey_wilson(30, Q(3), a, b, c, d, q_exact))
    assert abs(askey_wilson_recurrence(30, 3.0, *AWF, 0.25) - exact) < 1e-10 * abs(exact)
    r = random.Random(2)
    for _ in range(3):
        # real on the unit circle since p_n(z) = p_n(1/z)
        x = cmath.exp(1j * r.uniform(0, math.pi))
        assert abs(askey_wilson_recurrence(12, x, *AWF, 0.25).imag) < 1e-9
