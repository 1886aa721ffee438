"""q-Pochhammer symbols, q-multinomials, terminating basic hypergeometric sums,
Askey-Wilson and Al-Salam-Chihara polynomials and their relations.
"""

from __future__ import annotations

import math
from typing import Sequence

import mpmath
from gmpy2 import mpq

from .exact import ONE, PoleError, Q


class DivergenceError(ValueError):
    pass


class ResonanceError(ZeroDivisionError):
    pass


INF = math.inf
_MAX_FACTORS = 100_000


def _is_exact(x) -> bool:
    return isinstance(x, (int, type(mpq(0))))


def _num(x):
    return complex(x) if isinstance(x, complex) else float(x)


def q_pochhammer(a, q, n=INF, mode: str = "auto", tol: float = 1e-17):
    """``(a; q)_n = prod_{k<n} (1 - a q^k)``.

    Finite ``n`` with rational inputs is exact.  ``n = inf`` needs
    ``|q| < 1`` and is evaluated numerically (float/complex, or mpmath numbers
    if the inputs are mpmath numbers), truncating once ``|a q^k|`` drops
    below ``tol``.
    """
    if n != INF:
        n = int(n)
        if n < 0:
            raise ValueError("negative order")
        if mode == "float":
            a, q = _num(a), _num(q)
        out = ONE if _is_exact(a) and _is_exact(q) else 1
        term = a
        for _ in range(n):
            out = out * (1 - term)
            term = term * q
        return out
    if abs(q) >= 1:
        raise DivergenceError("infinite q-Pochhammer needs |q| < 1")
    use_mp = any(isinstance(x, (mpmath.mpf, mpmath.mpc)) for x in (a, q))
    if use_mp:
        tol = min(tol, mpmath.mp.eps / 16)
    else:
        a, q = _num(a), _num(q)
    out = 1
    term = a
    for _ in range(_MAX_FACTORS):
        if abs(term) < tol:
            return out
        out = out * (1 - term)
        term = term * q
    raise DivergenceError(f"infinite product did not converge within {_MAX_FACTORS} factors")


def q_pochhammer_multi(args: Sequence, q, n=INF, **kw):
    """``(a_1, ..., a_r; q)_n``."""
    out = 1
    for a in args:
        out = out * q_pochhammer(a, q, n, **kw)
    return out


def q_multinomial(n: int, parts: Sequence[int], q) -> mpq:
    """``(q;q)_n / (prod (q;q)_{k_i} * (q;q)_{n - sum k_i})``; zero outside the simplex."""
    rest = n - sum(parts)
    if rest < 0 or any(k < 0 for k in parts):
        return Q(0)
    num = q_pochhammer(q, q, n)
    den = q_pochhammer(q, q, rest)
    for k in parts:
        den = den * q_pochhammer(q, q, k)
    if not den:
        raise ResonanceError("q-multinomial denominator vanishes (q is a root of unity)")
    return num / den


def basic_hypergeometric_terminating(upper: Sequence, lower: Sequence, q, z, nterms: int):
    """Truncated ``r phi s`` sum over ``k < nterms`` (exact for a terminating series)."""
    r, s = len(upper), len(lower)
    total = 0
    term = ONE if all(_is_exact(x) for x in (*upper, *lower, q, z)) else 1
    for k in range(nterms):
        total = total + term
        num = 1
        for u in upper:
            num = num * (1 - u * q ** k)
        den = (1 - q ** (k + 1))
        for l in lower:
            den = den * (1 - l * q ** k)
        if not num:
            break
        if not den:
            raise ResonanceError(f"zero lower Pochhammer at k={k}")
        extra = ((-1) * q ** k) ** (s + 1 - r) if s + 1 - r else 1
        term = term * num / den * z * extra
    return total


def phi43(n: int, upper3: Sequence, lower: Sequence, q):
    """Terminating ``4phi3(q^-n, u1, u2, u3; l1, l2, l3; q, q)``."""
    return basic_hypergeometric_terminating([q ** (-n), *upper3], lower, q, q, n + 1)


def askey_wilson(n: int, z, a, b, c, d, q):
    """``p_n(z; a,b,c,d | q) = (ab,ac,ad;q)_n a^-n 4phi3(q^-n, q^{n-1}abcd, az, a/z; ab, ac, ad; q, q)``.

    Evaluated as ``a^-n sum_k (q^-n, q^{n-1}abcd, az, a/z; q)_k / (q;q)_k q^k (ab q^k, ac q^k, ad q^k; q)_{n-k}``,
    which stays finite when a lower parameter of the 4phi3 hits a zero.
    """
    if n < 0:
        raise ValueError("degree must be >= 0")
    if not a:
        # p_n is symmetric in a, b, c, d
        for i, p in enumerate((b, c, d)):
            if p:
                rest = [x for j, x in enumerate((b, c, d)) if j != i]
                return askey_wilson(n, z, p, a, *rest, q)
        return continuous_q_hermite(n, z, q)
    exact = all(_is_exact(x) for x in (z, a, b, c, d, q))
    one = ONE if exact else 1
    qn = one / q ** n
    top = (qn, q ** (n - 1) * a * b * c * d, a * z, a / z)
    total = 0
    pre = one  # (top; q)_k / (q; q)_k q^k
    for k in range(n + 1):
        tail = q_pochhammer(a * b * q ** k, q, n - k) * q_pochhammer(a * c * q ** k, q, n - k) * q_pochhammer(
            a * d * q ** k, q, n - k
        )
        total = total + pre * tail
        num = one
        for u in top:
            num = num * (1 - u * q ** k)
        pre = pre * num / (1 - q ** (k + 1)) * q
    return total / a ** n


def askey_wilson_recurrence(n: int, z, a, b, c, d, q):
    """``p_n`` from the three-term recurrence of the 4phi3 part ``r_k``:

    ``(z + 1/z) r_k = A_k r_{k+1} + (a + 1/a - A_k - C_k) r_k + C_k r_{k-1}``,
    then ``p_n = a^-n (ab, ac, ad; q)_n r_n``.  Linear cost in ``n``; used for
    large degrees in floating point, where the 4phi3 sum cancels badly.
    """
    if n < 0:
        raise ValueError("degree must be >= 0")
    if not a:
        for i, p in enumerate((b, c, d)):
            if p:
                rest = [x for j, x in enumerate((b, c, d)) if j != i]
                return askey_wilson_recurrence(n, z, p, a, *rest, q)
        return continuous_q_hermite(n, z, q)
    one = ONE if all(_is_exact(x) for x in (z, a, b, c, d, q)) else 1
    X = z + 1 / z
    abcd = a * b * c * d
    prev, cur = 0 * one, one
    pref = one
    for k in range(n):
        qk = q ** k
        A = (1 - a * b * qk) * (1 - a * c * qk) * (1 - a * d * qk) * (1 - abcd * qk / q) / (
            a * (1 - abcd * qk * qk / q) * (1 - abcd * qk * qk)
        )
        C = a * (1 - qk) * (1 - b * c * qk / q) * (1 - b * d * qk / q) * (1 - c * d * qk / q) / (
            (1 - abcd * qk * qk / (q * q)) * (1 - abcd * qk * qk / q)
        ) if k else 0
        if not A:
            raise ResonanceError(f"recurrence coefficient A_{k} vanishes")
        prev, cur = cur, ((X - a - 1 / a + A + C) * cur - C * prev) / A
        pref = pref * (1 - a * b * qk) * (1 - a * c * qk) * (1 - a * d * qk) / a
    return pref * cur


def askey_wilson_at_pole(n: int, k: int, a, b, c, d, q):
    """``p_n(a q^k)``: the 4phi3 terminates after ``k + 1`` terms because ``(a/x; q)_j = (q^-k; q)_j``.

    At these points ``p_n`` is a minimal solution of the three-term
    recurrence, which therefore cannot be used there.
    """
    abcd = a * b * c * d
    top = (q ** -n, abcd * q ** (n - 1), a * a * q ** k, q ** -k)
    bottom = (a * b, a * c, a * d, q)
    total, term = 0, 1
    for j in range(min(k, n) + 1):
        total = total + term
        num = 1
        den = 1
        for u in top:
            num = num * (1 - u * q ** j)
        for u in bottom:
            den = den * (1 - u * q ** j)
        term = term * num / den * q
    pref = q_pochhammer(a * b, q, n) * q_pochhammer(a * c, q, n) * q_pochhammer(a * d, q, n) / a ** n
    return pref * total


def continuous_q_hermite(n: int, z, q):
    """``p_n(z; 0,0,0,0 | q) = sum_k [n, k]_q z^{n-2k}``."""
    total = 0
    for k in range(n + 1):
        total = total + q_multinomial(n, (k,), q) * z ** (n - 2 * k)
    return total


def aw_leading(n: int, a, b, c, d, q):
    """Coefficient of ``z^n`` in ``p_n``: ``(abcd q^{n-1}; q)_n``."""
    return q_pochhammer(a * b * c * d * q ** (n - 1), q, n)


def askey_wilson_monic(n: int, z, a, b, c, d, q):
    k = aw_leading(n, a, b, c, d, q)
    if not k:
        raise ResonanceError("leading coefficient vanishes")
    return askey_wilson(n, z, a, b, c, d, q) / k


def al_salam_chihara(n: int, z, a, b, q):
    """``Q_n(z; a, b | q) = p_n(z; a, b, 0, 0 | q)``."""
    return askey_wilson(n, z, a, b, 0 * a, 0 * a, q)


def al_salam_chihara_recurrence(n: int, z, a, b, q, convention: str = "laurent"):
    """``Q_n`` from ``Q_{k+1} + ((a+b) q^k - X) Q_k + (1 - q^k)(1 - ab q^{k-1}) Q_{k-1} = 0``.

    ``convention='laurent'`` uses ``X = z + 1/z``; ``'printed'`` uses ``X = 2z``
    (i.e. treats the argument as ``x = (z + 1/z)/2``).
    """
    if convention == "laurent":
        X = z + 1 / z
    elif convention == "printed":
        X = 2 * z
    else:
        raise ValueError(convention)
    prev, cur = 0, ONE if _is_exact(z) else 1
    for k in range(n):
        nxt = -((a + b) * q ** k - X) * cur - (1 - q ** k) * (1 - a * b * q ** (k - 1)) * prev
        prev, cur = cur, nxt
    return cur


# ---------------------------------------------------------------- kernel, norms, quadrature


def _num_or_mp(x):
    if isinstance(x, (mpmath.mpf, mpmath.mpc)):
        return x
    if isinstance(x, complex):
        return x
    return float(x)


def aw_kernel(x, a, b, c, d, q, warn_tol: float = 1e-10):
    """Askey-Wilson weight ``(x^2, x^-2; q)_inf / prod (p x, p/x; q)_inf`` over ``p in {a,b,c,d}``."""
    x = _num_or_mp(x)
    a, b, c, d, q = (_num_or_mp(v) for v in (a, b, c, d, q))
    num = q_pochhammer(x * x, q) * q_pochhammer(1 / (x * x), q)
    den = 1
    for p in (a, b, c, d):
        if p == 0:
            continue
        den = den * q_pochhammer(p * x, q) * q_pochhammer(p / x, q)
        for k in range(60):
            pk = p * q ** k
            if abs(pk) < warn_tol:
                break
            if min(abs(1 - pk * x), abs(1 - pk / x)) < warn_tol:
                import warnings

                warnings.warn(f"aw_kernel evaluated within {warn_tol} of a pole (parameter {p}, k={k})")
                break
    return num / den


def aw_norm(n: int, a, b, c, d, q):
    """``h_n`` in ``oint dz/(4 pi i z) w p_n p_m = h_n delta_{nm}``."""
    a, b, c, d, q = (_num_or_mp(v) for v in (a, b, c, d, q))
    abcd = a * b * c * d
    num = q_pochhammer(q ** (n - 1) * abcd, q)
    den = (1 - q ** (2 * n - 1) * abcd) * q_pochhammer(q ** (n + 1), q)
    for p in (a * b, a * c, a * d, b * c, b * d, c * d):
        den = den * q_pochhammer(q ** n * p, q)
    return num / den


def aw_norm_ratio(m: int, a, b, c, d, q):
    """``r_m = (abcd q^{2m}; q)_inf / (q^{m+1}, ab q^m, ac q^m, ad q^m, bc q^m, bd q^m, cd q^m; q)_inf``."""
    a, b, c, d, q = (_num_or_mp(v) for v in (a, b, c, d, q))
    num = q_pochhammer(a * b * c * d * q ** (2 * m), q)
    den = q_pochhammer(q ** (m + 1), q)
    for p in (a * b, a * c, a * d, b * c, b * d, c * d):
        den = den * q_pochhammer(q ** m * p, q)
    return num / den


def circle_average(F, tol: float = 1e-12, kmin: int = 32, kmax: int = 1 << 16, radius=1, center=0, scale=None):
    """``(1/2pi) int_0^{2pi} F(center + radius e^{i theta}) d theta`` by the trapezoid rule.

    Nodes are doubled until two successive values agree to ``tol`` relative to
    ``scale``: a number, ``None`` (the size of the result) or ``'l1'`` (the
    mean of ``|F|``, which is the attainable reference when the integral
    cancels strongly).
    """
    use_mp = any(isinstance(v, (mpmath.mpf, mpmath.mpc)) for v in (radius, center))
    pi = mpmath.pi if use_mp else math.pi
    expj = mpmath.expj if use_mp else (lambda th: complex(math.cos(th), math.sin(th)))
    half = mpmath.mpf(1) / 2 if use_mp else 0.5

    def nodes(K, offset):
        return [center + radius * expj(2 * pi * (j + offset) / K) for j in range(K)]

    K = kmin
    vals = [F(x) for x in nodes(K, 0)]
    total = sum(vals)
    l1 = sum(abs(v) for v in vals)
    val = total / K
    while K < kmax:
        # doubling reuses the previous nodes
        vals = [F(x) for x in nodes(K, half)]
        total = total + sum(vals)
        l1 = l1 + sum(abs(v) for v in vals)
        K *= 2
        new = total / K
        if scale == "l1":
            ref = l1 / K
        elif scale is None:
            ref = max(abs(new), abs(val))
        else:
            ref = scale
        if abs(new - val) <= tol * (ref if ref else 1):
            return new
        val = new
    raise ArithmeticError(f"trapezoid rule did not converge with {kmax} nodes")


def aw_inner(n: int, m: int, a, b, c, d, q, tol: float = 1e-11) -> complex:
    """``oint dz/(4 pi i z) w(z) p_n(z) p_m(z)`` on the unit circle (needs ``|a|,|b|,|c|,|d| < 1``).

    ``p_n`` comes from the three-term recurrence: the terminating 4phi3 loses
    digits quadratically in ``n`` to cancellation in floating point.
    """
    if max(abs(a), abs(b), abs(c), abs(d)) >= 1:
        raise ValueError("unit-circle contour requires |a|, |b|, |c|, |d| < 1")
    af, bf, cf, df, qf = (float(v) for v in (a, b, c, d, q))

    def F(z):
        return (
            aw_kernel(z, af, bf, cf, df, qf)
            * askey_wilson_recurrence(n, z, af, bf, cf, df, qf)
            * askey_wilson_recurrence(m, z, af, bf, cf, df, qf)
        )

    scale = 2 * math.sqrt(abs(aw_norm(n, af, bf, cf, df, qf) * aw_norm(m, af, bf, cf, df, qf)))
    # dz/(4 pi i z) over the circle is half the angular average
    return circle_average(F, tol=tol, scale=scale) / 2


def aw_orthogonality_check(n: int, m: int, a, b, c, d, q, tol: float = 1e-11) -> float:
    """Relative residual ``|inner - h_n delta_nm| / |h_n|`` (``sqrt(h_n h_m)`` off the diagonal)."""
    val = aw_inner(n, m, a, b, c, d, q, tol=tol)
    hn = aw_norm(n, a, b, c, d, q)
    if n == m:
        return abs(val - hn) / abs(hn)
    hm = aw_norm(m, a, b, c, d, q)
    return abs(val) / math.sqrt(abs(hn * hm))


def aw_B(z, a, b, c, d, q):
    """``B(z) = (az, bz, cz, dz; q)_inf / (z^2; q)_inf``."""
    num = 1
    for p in (a, b, c, d):
        num = num * q_pochhammer(p * z, q)
    return num / q_pochhammer(z * z, q)


def aw_asymptote(m: int, z, a, b, c, d, q, dps: int | None = None):
    """Large-degree form ``z^m B(1/z) + z^-m B(z)`` of ``p_m(z)``; ``|z| != 1``."""
    if abs(z) == 1:
        raise ValueError("the two-term asymptote applies only off the unit circle")
    if dps is not None:
        with mpmath.workdps(dps):
            zz, aa, bb, cc, dd, qq = (mpmath.mpf(_mpq_to_mp(v)) for v in (z, a, b, c, d, q))
            return zz ** m * aw_B(1 / zz, aa, bb, cc, dd, qq) + zz ** (-m) * aw_B(zz, aa, bb, cc, dd, qq)
    zz, aa, bb, cc, dd, qq = (_num_or_mp(v) for v in (z, a, b, c, d, q))
    return zz ** m * aw_B(1 / zz, aa, bb, cc, dd, qq) + zz ** (-m) * aw_B(zz, aa, bb, cc, dd, qq)


def _mpq_to_mp(x):
    if _is_exact(x):
        x = mpq(x)
        return mpmath.mpf(int(x.numerator)) / int(x.denominator)
    return x


def aw_asymptote_errors(ms: Sequence[int], z, a, b, c, d, q, dps: int = 200) -> list:
    """Relative errors ``|p_m - asymptote| / |p_m|`` with exact ``p_m`` (rational inputs)."""
    out = []
    with mpmath.workdps(dps):
        for m in ms:
            exact = _mpq_to_mp(askey_wilson(m, Q(z), Q(a), Q(b), Q(c), Q(d), Q(q)))
            asym = aw_asymptote(m, z, a, b, c, d, q, dps=dps)
            out.append(float(abs(exact - asym) / abs(exact)))
    return out


# ---------------------------------------------------------------- contiguous relations


def _dd_params(F, c, d):
    return (F(c, d) - F(d, c)) / (c - d)


def _dd_z(F, z):
    return (F(z) - F(1 / z)) / (z - 1 / z)


def contiguous_residuals(m: int, z, a, b, c, d, s, monic: bool = False) -> dict:
    """Residuals of the divided-difference relations for Askey-Wilson polynomials at base ``q = s^2``.

    Keys ending in ``_printed`` use the theta weights with the ``q^{-m/2}``
    prefactor; the unsuffixed theta keys use ``q^{m/2}``, the form that holds
    for ``p_n`` normalised by the 4phi3 definition.
    """
    q = s * s
    P = askey_wilson_monic if monic else askey_wilson
    out = {}

    def w_mm(C, D):
        return C * D * (z - C) * (z * C - 1) / ((1 - C * D * q ** m) * z * C)

    out["omega(m,m)"] = P(m, z, a, b, c, d, q) - _dd_params(lambda C, D: w_mm(C, D) * P(m, z, a, b, q * C, D, q), c, d)
    if m >= 1:
        w = 1 / ((1 - q ** m) * (1 - a * b * q ** (m - 1)))
        out["omega(m-1,m)"] = P(m - 1, z, a, b, q * c, q * d, q) - _dd_params(
            lambda C, D: w * P(m, z, a, b, q * C, D, q), c, d
        )

    def w_p1(C, D):
        return (1 - a * D * q ** m) * (1 - b * D * q ** m) * (z - C) * (z * C - 1) / z

    out["omega(m+1,m)"] = P(m + 1, z, a, b, c, d, q) - _dd_params(
        lambda C, D: w_p1(C, D) * P(m, z, a, b, q * C, D, q), c, d
    )

    def shifted(Z):
        return P(m, s * Z, s * a, s * b, s * c, s * d, q)

    def th_mm(Z):
        return (a * b * c * q ** m - Z) * (1 - a * Z) * (1 - b * Z) * (1 - c * Z) / (
            (1 - a * b * q ** m) * (1 - a * c * q ** m) * (1 - b * c * q ** m) * Z * Z
        )

    def th_p1(Z):
        return -(1 - a * Z) * (1 - b * Z) * (1 - c * Z) * (1 - d * Z) / (Z * Z)

    lhs_mm = P(m, z, a, b, c, q * d, q)
    lhs_p1 = P(m + 1, z, a, b, c, d, q)
    dd_mm = _dd_z(lambda Z: th_mm(Z) * shifted(Z), z)
    dd_p1 = _dd_z(lambda Z: th_p1(Z) * shifted(Z), z)
    out["theta(m,m)"] = lhs_mm - s ** m * dd_mm
    out["theta(m+1,m)"] = lhs_p1 - s ** m * dd_p1
    out["theta(m,m)_printed"] = lhs_mm - dd_mm / s ** m
    out["theta(m+1,m)_printed"] = lhs_p1 - dd_p1 / s ** m
    if m >= 1:
        t = q
        out["cont12-mt"] = (
            (1 - c * d * t ** m) * P(m, z, a, b, c, d, t)
            - (1 - c * d) * P(m, z, a, b, t * c, d, t)
            - c * d * (1 - t ** m) * (1 - a * b * t ** (m - 1)) * (z + 1 / z - d - 1 / d) * P(m - 1, z, a, b, t * c, t * d, t)
        )
    return out


def asc_contiguous_residuals(n: int, z, a, b, s) -> dict:
    """The two Al-Salam-Chihara relations obtained from the boundary recursions (base ``t = s^2``)."""
    t = s * s
    Qn = al_salam_chihara
    return {
        "asc-contiguous": a * Qn(n + 1, z, a, b, t)
        - (1 - a * b * t ** n) * Qn(n, z, a, b, t)
        - a * (z + 1 / z - a - 1 / a) * Qn(n, z, t * a, b, t),
        "asc-difference": Qn(n + 1, z, a, b, t)
        - z * (1 - a * b * t ** n) * Qn(n, z, a, b, t)
        - s ** n * (1 - a * z) * (1 - b * z) / z * Qn(n, s * z, s * a, s * b, t),
    }


def aw_by_contiguous_chain(n: int, z, a, b, c, d, q):
    """``p_n`` built only from ``p_0 = 1`` and the ``omega^{(m+1,m)}`` relation."""
    if n == 0:
        return ONE if _is_exact(z) else 1
    m = n - 1

    def F(C, D):
        return (1 - a * D * q ** m) * (1 - b * D * q ** m) * (z - C) * (z * C - 1) / z * aw_by_contiguous_chain(
            m, z, a, b, q * C, D, q
        )

    return _dd_params(F, c, d)


def contiguous_relation_suite(a, b, c, d, s, ms: Sequence[int], zs: Sequence) -> list:
    """Report over ``m in ms`` and ``z in zs`` (exact when all inputs are rational)."""
    report = []
    required = {"omega(m,m)", "omega(m-1,m)", "omega(m+1,m)", "theta(m,m)", "theta(m+1,m)", "cont12-mt",
                "asc-contiguous", "asc-difference"}
    for m in ms:
        agg: dict = {}
        for z in zs:
            res = contiguous_residuals(m, z, a, b, c, d, s)
            res.update(asc_contiguous_residuals(m, z, a, b, s))
            for k, v in res.items():
                agg[k] = agg.get(k, True) and v == 0
        for k, ok in agg.items():
            report.append({"relation": k, "m": m, "pass": ok, "required": k in required})
    return report
