import itertools
import random

import numpy as np
import pytest

from koornwinder_asep import ParamPoint, random_params
from koornwinder_asep.exact import Q
from koornwinder_asep.model import (
    Sector,
    SectorError,
    SparseExactMatrix,
    exact_nullspace,
    k_operator,
    markov_matrix,
    r_operator,
    scattering_operator,
    verify_integrability,
    word_from_str,
    word_to_str,
)
from koornwinder_asep.params import ParameterError


def float_generator(N, m, params):
    """Column generator enumerated directly from the jump rates."""
    configs = sorted(w for w in itertools.product((-1, 0, 1), repeat=N) if w.count(0) == m)
    index = {w: i for i, w in enumerate(configs)}
    s = float(params.s)
    al, be, ga, de = (float(params.alpha), float(params.beta), float(params.gamma), float(params.delta))
    M = np.zeros((len(configs), len(configs)))

    def jump(w, w2, rate):
        M[index[w2], index[w]] += rate
        M[index[w], index[w]] -= rate

    for w in configs:
        for i in range(N - 1):
            x, y = w[i], w[i + 1]
            if x != y:
                w2 = w[:i] + (y, x) + w[i + 2:]
                jump(w, w2, s if x > y else 1 / s)
        if w[0] != 0:
            jump(w, (-w[0],) + w[1:], al if w[0] == -1 else ga)
        if w[-1] != 0:
            jump(w, w[:-1] + (-w[-1],), de if w[-1] == -1 else be)
    return configs, M


def float_stationary(M):
    vals, vecs = np.linalg.eig(M)
    v = np.real(vecs[:, np.argmin(np.abs(vals))])
    return v / v.sum()


def test_sector_sizes_and_order():
    sec = Sector(3, 1)
    assert len(sec) == 12
    assert sec.configs == sorted(sec.configs)
    with pytest.raises(SectorError):
        Sector(2, 3)


def test_word_strings_round_trip():
    w = (-1, 0, 1, 1)
    assert word_from_str(word_to_str(w)) == w


def test_params_reject_singular_points():
    with pytest.raises(ParameterError, match="a = 1"):
        ParamPoint(Q("1/2"), Q(1), Q("1/3"), Q("-1/2"), Q("1/5"))
    with pytest.raises(ParameterError):
        ParamPoint(Q(1), Q("-1/2"), Q("1/3"), Q("-1/2"), Q("1/5"))
    with pytest.raises(ParameterError):
        ParamPoint.from_dict({"s": 0.5, "a": "-1/2", "b": "1/3", "c": "-1/2", "d": "1/5"})


def test_random_physical_params_have_positive_rates():
    r = random.Random(3)
    for _ in range(20):
        p = random_params(r)
        assert p.has_positive_rates and p.in_standard_regime


def test_single_site_generator(maximal_current):
    P = maximal_current
    M = markov_matrix(Sector(1, 0), P).to_dense()
    assert M == [[-(P.alpha + P.delta), P.gamma + P.beta], [P.alpha + P.delta, -(P.gamma + P.beta)]]
    assert markov_matrix(Sector(1, 1), P).is_zero()
    assert markov_matrix(Sector(2, 2), P).is_zero()


def test_nonphysical_rates_need_the_formal_flag(maximal_current):
    P = maximal_current.with_(a=Q("1/2"))
    with pytest.raises(ParameterError):
        markov_matrix(Sector(2, 0), P)
    assert markov_matrix(Sector(2, 0), P, formal=True).column_sums() == [0, 0, 0, 0]


@pytest.mark.parametrize("N,m", [(2, 0), (3, 1), (4, 2)])
def test_generator_matches_enumerated_rates(N, m, physical_points):
    for P in physical_points:
        configs, Mf = float_generator(N, m, P)
        M = markov_matrix(Sector(N, m), P)
        assert Sector(N, m).configs == configs
        assert np.allclose(np.array(M.to_dense(), dtype=float), Mf, atol=1e-13)


def test_nullspace_of_small_matrices(maximal_current):
    P = maximal_current
    assert exact_nullspace(SparseExactMatrix.zeros(1, 1)) == [[1]]
    (v,) = exact_nullspace(markov_matrix(Sector(1, 0), P))
    assert v[1] / v[0] == (P.alpha + P.delta) / (P.gamma + P.beta)


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_nullspace_is_one_dimensional_and_matches_float_oracle(N, physical_points):
    P = physical_points[0]
    for m in range(N + 1):
        basis = exact_nullspace(markov_matrix(Sector(N, m), P))
        assert len(basis) == 1
        v = np.array([float(x) for x in basis[0]])
        _, Mf = float_generator(N, m, P)
        assert np.allclose(v / v.sum(), float_stationary(Mf), atol=1e-10)


def test_r_and_k_are_identity_at_one(maximal_current):
    sec = Sector(3, 1)
    one = SparseExactMatrix.identity(len(sec))
    assert r_operator(1, Q(1), sec, maximal_current) == one
    assert k_operator("left", Q(1), sec, maximal_current) == one
    assert k_operator("right", Q(1), sec, maximal_current) == one
    assert scattering_operator(2, [Q(1)] * 3, sec, maximal_current) == one


@pytest.mark.parametrize("N,m", [(1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (4, 1)])
def test_integrability_identities_hold(N, m, maximal_current):
    report = verify_integrability(N, m, maximal_current, npoints=3)
    assert report and all(e["pass"] for e in report), [e for e in report if not e["pass"]]


def test_integrability_detects_a_wrong_generator(maximal_current, monkeypatch):
    import koornwinder_asep.model as model

    real = model.markov_matrix

    def perturbed(sector, params, formal=False):
        return real(sector, params, formal).scale(Q(2))

    monkeypatch.setattr(model, "markov_matrix", perturbed)
    report = verify_integrability(3, 1, maximal_current, npoints=2)
    assert not all(e["pass"] for e in report)
