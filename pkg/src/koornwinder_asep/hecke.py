"""Scaled Noumi operators of the affine Hecke algebra of type C~_N at q = 1.

Only the rescaled generators ``A_i = t_i^{1/2} T_i`` are exposed; they have
rational coefficients even when ``t_0^{1/2} = (-ab)^{1/2}`` is irrational:

* bulk ``1 <= i <= N-1``: ``A_i = t - (t z_i - z_{i+1}) d_i``
* left:  ``A_0 = t_0 - ((z_1 - a)(z_1 - b)/z_1) d_0``, ``t_0 = -ab``
* right: ``A_N = t_N + ((c z_N - 1)(d z_N - 1)/z_N) d_N``, ``t_N = -cd``

with ``d_i`` the divided differences of :mod:`koornwinder_asep.exact`.
Each satisfies ``A_i^2 = (t_i - 1) A_i + t_i``.  The sign in front of the
right-boundary term is the one compatible with that quadratic relation.

Acting on stationary-state components, ``A_i`` moves an empty site one step
left (and a first-class particle one step right); ``A_0`` turns an empty
first site into a particle and ``A_N`` empties an occupied last site.
"""

from __future__ import annotations

import random
from typing import Callable, Dict, List, Sequence

from .exact import LaurentPoly, divided_difference, monomials_up_to, rational_to_str
from .params import ParamPoint, ParameterError


def hecke_parameter(i: int, N: int, params: ParamPoint):
    """``t_i`` for generator ``i`` in rank ``N``."""
    if i == 0:
        return params.t0
    if i == N:
        return params.tN
    if 1 <= i <= N - 1:
        return params.t
    raise IndexError(f"no generator {i} for N={N}")


def _pole_factor(i: int, N: int, params: ParamPoint) -> LaurentPoly:
    """The Laurent polynomial multiplying the divided difference in ``A_i`` (sign included)."""
    if i == 0:
        z = LaurentPoly.var(N, 0)
        a, b = params.a, params.b
        # -(z - a)(z - b)/z
        return -(z - (a + b) + LaurentPoly.monomial(N, _unit(N, 0, -1), a * b))
    if i == N:
        z = LaurentPoly.var(N, N - 1)
        c, d = params.c, params.d
        # +(c z - 1)(d z - 1)/z
        return z * (c * d) - (c + d) + LaurentPoly.monomial(N, _unit(N, N - 1, -1))
    zi = LaurentPoly.var(N, i - 1)
    zj = LaurentPoly.var(N, i)
    return -(zi * params.t - zj)


def _unit(N, k, v):
    e = [0] * N
    e[k] = v
    return e


def apply_scaled_gen(i: int, p: LaurentPoly, params: ParamPoint) -> LaurentPoly:
    """``A_i p`` with ``A_i = t_i^{1/2} T_i``."""
    N = p.nvars
    ti = hecke_parameter(i, N, params)
    dp = divided_difference(p, i)
    if not dp:
        return p.scale(ti)
    return p.scale(ti) + _pole_factor(i, N, params) * dp


def apply_scaled_gen_inverse(i: int, p: LaurentPoly, params: ParamPoint) -> LaurentPoly:
    """``A_i^{-1} p = t_i^{-1}(A_i p - (t_i - 1) p)``."""
    N = p.nvars
    ti = hecke_parameter(i, N, params)
    if ti == 0:
        raise ParameterError(f"t_{i} = 0: generator {i} is not invertible")
    dp = divided_difference(p, i)
    if not dp:
        return p
    # A p - (t-1) p = p + pole * dp
    return (p + _pole_factor(i, N, params) * dp).scale(1 / ti)


def apply_word(word: Sequence[int], p: LaurentPoly, params: ParamPoint) -> LaurentPoly:
    """Apply ``A_{w_1} A_{w_2} ... A_{w_l}`` (rightmost first)."""
    for i in reversed(word):
        p = apply_scaled_gen(i, p, params)
    return p


# ---------------------------------------------------------------- relation checks


def _relations(N: int) -> List[tuple]:
    """(name, lhs word, rhs word or None for the quadratic relation, generator)."""
    rels = []
    for i in range(N + 1):
        rels.append((f"quadratic A_{i}", i))
    for i in range(N + 1):
        for j in range(i + 2, N + 1):
            rels.append((f"commute A_{i} A_{j}", (i, j), (j, i)))
    for i in range(1, N - 1):
        rels.append((f"braid A_{i} A_{i + 1}", (i, i + 1, i), (i + 1, i, i + 1)))
    if N >= 2:
        rels.append(("boundary braid A_0 A_1", (0, 1, 0, 1), (1, 0, 1, 0)))
        rels.append((f"boundary braid A_{N} A_{N - 1}", (N, N - 1, N, N - 1), (N - 1, N, N - 1, N)))
    return rels


def _relation_residual(rel, p: LaurentPoly, params: ParamPoint) -> LaurentPoly:
    if len(rel) == 2:
        i = rel[1]
        ti = hecke_parameter(i, p.nvars, params)
        Ap = apply_scaled_gen(i, p, params)
        AAp = apply_scaled_gen(i, Ap, params)
        return AAp - Ap.scale(ti - 1) - p.scale(ti)
    _, lhs, rhs = rel
    return apply_word(lhs, p, params) - apply_word(rhs, p, params)


def verify_hecke_relations(
    N: int,
    params: ParamPoint,
    trials: int = 3,
    degree: int = 3,
    basis: str = "monomials",
    rng: random.Random | None = None,
) -> List[dict]:
    """Check quadratic, commutation, braid and boundary-braid relations.

    ``basis='monomials'`` checks each relation on every monomial with
    ``sum |e_i| <= degree`` (an operator identity on that span, by
    linearity); ``basis='random'`` uses ``trials`` random polynomials.
    Returns one report entry per relation.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = rng or random.Random(0)
    if basis == "monomials":
        inputs = [LaurentPoly.monomial(N, e) for e in monomials_up_to(N, degree)]
    elif basis == "random":
        inputs = [random_poly(N, degree, rng) for _ in range(trials)]
    else:
        raise ValueError(f"unknown basis {basis!r}")
    point = {k: rational_to_str(getattr(params, k)) for k in ("s", "a", "b", "c", "d")}
    report = []
    for rel in _relations(N):
        ok = True
        for p in inputs:
            if _relation_residual(rel, p, params):
                ok = False
                break
        report.append({"relation": rel[0], "N": N, "point": point, "inputs": len(inputs), "pass": ok})
    return report


def random_poly(N: int, degree: int, rng: random.Random, nterms: int = 6) -> LaurentPoly:
    from gmpy2 import mpq

    terms: Dict[tuple, object] = {}
    for _ in range(nterms):
        e = tuple(rng.randint(-degree, degree) for _ in range(N))
        terms[e] = mpq(rng.randint(-9, 9), rng.randint(1, 9))
    return LaurentPoly(N, terms)


def cycle_word(k: int, N: int) -> List[int]:
    """``[k, k+1, .., N-1, N, N-1, .., 1, 0]`` (applied right to left)."""
    return list(range(k, N)) + [N] + list(range(N - 1, 0, -1)) + [0]


def cycle_operator_check(k: int, m: int, params: ParamPoint, E: LaurentPoly | None = None):
    """Residual of ``A_k .. A_{N-1} A_N A_{N-1} .. A_1 A_0 E - E`` for ``E = E_{mu(k,m)}``.

    The cycle moves an injected particle through the system and returns the
    empty site to position ``k``, so with scaled generators the eigenvalue is
    exactly 1.  For ``k = 0`` there is no empty site to move and the check is
    trivial (``E = 1``).
    """
    from .qkz import reference_component

    N = k + m
    if E is None:
        E = reference_component(k, m, params)
    if k == 0:
        return E - LaurentPoly.const(N, 1)
    return apply_word(cycle_word(k, N), E, params) - E
