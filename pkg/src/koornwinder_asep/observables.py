"""Partition functions, current, first-class density and the large-N phase diagram.

Exact quantities are computed from the stationary components built in
:mod:`koornwinder_asep.qkz`.  The contour-integral representation of the
partition function (single-column Koornwinder polynomial as an integral
against the Askey-Wilson weight) is evaluated numerically and is the route
to large systems.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import mpmath

from .exact import ZERO, InvariantViolation, LaurentPoly, Q, rational_to_str, reflect
from .model import Sector, SectorError
from .params import ParamPoint, ParameterError
from .qkz import StateVector, cached_state, count_particles, verify_fugacity_covariance
from .qseries import askey_wilson_at_pole, askey_wilson_recurrence, aw_kernel, aw_norm_ratio, circle_average, q_pochhammer


class ContourError(ValueError):
    """A pole of the integrand lies on (or too close to) the integration contour."""


# ---------------------------------------------------------------- exact partition data


@dataclass
class PartitionData:
    N: int
    m: int
    Zpoly: LaurentPoly
    # number of first-class particles -> sum of the components with that count
    Zweighted: Dict[int, LaurentPoly]
    Zhom: object

    def weighted_at(self, xi):
        """``Z_N(xi; z) = sum_w xi^{#x(w)} psi_w(z)`` as a Laurent polynomial."""
        out = LaurentPoly.zero(self.N)
        for k, p in self.Zweighted.items():
            out = out + p.scale(Q(xi) ** k)
        return out

    def weighted_hom(self, xi):
        """``Z_N(xi; 1)``; ``xi`` may be any scalar (rational, float, mpmath)."""
        total = 0
        for k, p in self.Zweighted.items():
            total = total + xi ** k * sum(p.terms.values(), ZERO)
        return total


def check_w_invariance(Z: LaurentPoly) -> List[int]:
    """Reflections ``s_0 .. s_N`` under which ``Z`` is not invariant (empty list means invariant)."""
    return [i for i in range(Z.nvars + 1) if reflect(Z, i) != Z]


def partition_function(state: StateVector, check: bool = True) -> PartitionData:
    """``Z_{N,m}(z) = sum_w psi_w(z)`` together with its first-class-particle grading.

    With ``check`` the symmetry under every reflection and the unit
    coefficient of ``z_1^-1 ... z_{N-m}^-1`` are asserted.
    """
    N, m = state.N, state.m
    graded: Dict[int, LaurentPoly] = {}
    for w, p in state.components.items():
        k = count_particles(w)
        graded[k] = graded[k] + p if k in graded else p
    Z = LaurentPoly.zero(N)
    for p in graded.values():
        Z = Z + p
    if check and N > 0:
        bad = check_w_invariance(Z)
        if bad:
            raise InvariantViolation(f"Z_{{{N},{m}}} is not invariant under s_{bad}")
        lead = Z.coeff([-1] * (N - m) + [0] * m)
        if lead != 1:
            raise InvariantViolation(f"coefficient of z_1^-1..z_{N - m}^-1 is {lead}, expected 1")
    Zhom = sum(Z.terms.values(), ZERO)
    return PartitionData(N, m, Z, graded, Zhom)


def exact_partition(N: int, m: int, params: ParamPoint, check: bool = False) -> PartitionData:
    if N == 0 and m == 0:
        return PartitionData(0, 0, LaurentPoly.const(0, 1), {0: LaurentPoly.const(0, 1)}, Q(1))
    return partition_function(cached_state(N, m, params), check=check)


def weighted_partition(state: StateVector, xi=None):
    """``Z_N(xi; z)``.  ``xi=None`` returns the grading ``{#particles: LaurentPoly}``."""
    data = partition_function(state, check=False)
    if xi is None:
        return dict(data.Zweighted)
    return data.weighted_at(xi)


def verify_generating_function(N: int, m: int, params: ParamPoint, xi) -> bool:
    """``Z(xi^2; z; a,b,c,d) = xi^{N-m} Z(xi z; xi a, xi b, c/xi, d/xi)``, exactly."""
    rep = verify_fugacity_covariance(N, m, params, xi)
    return all(e["pass"] for e in rep)


# ---------------------------------------------------------------- current and density


def _check_sector(N: int, m: int):
    if N < 0 or m < 0 or m > N:
        raise SectorError(f"no sector with N={N}, m={m}")


def steady_current(N: int, m: int, params: ParamPoint, method: str = "ratio"):
    """Exact stationary current ``<J_{N,m}>``.

    ``method='ratio'``: ``(t^{1/2} - t^{-1/2}) Z_{N-1,m}(1) / Z_{N,m}(1)``.
    ``method='flux'``: ``(alpha sum psi_{o w}(1) - gamma sum psi_{x w}(1)) / Z_{N,m}(1)``,
    the net rate at which first-class particles enter through the left boundary.
    With ``m = N`` both routes give 0 (no first-class particles).
    """
    _check_sector(N, m)
    if N == 0:
        raise SectorError("current needs N >= 1")
    Z = exact_partition(N, m, params).Zhom
    if method == "ratio":
        if m == N:
            return Q(0)
        Zm = exact_partition(N - 1, m, params).Zhom
        return (params.s - 1 / params.s) * Zm / Z
    if method == "flux":
        st = cached_state(N, m, params)
        total = ZERO
        for w, p in st.components.items():
            v = sum(p.terms.values(), ZERO)
            if w[0] == -1:
                total += params.alpha * v
            elif w[0] == 1:
                total -= params.gamma * v
        return total / Z
    raise ValueError(f"unknown method {method!r}")


def density_first_class(N: int, m: int, params: ParamPoint, method: str = "direct"):
    """Exact ``<rho_x> = (1/N) sum_w #x(w) psi_w(1) / Z(1)``.

    ``method='log-derivative'`` evaluates ``(1/N) d/dxi log Z_N(xi; 1)`` at
    ``xi = 1`` from the graded partition function; ``'printed-xi0'`` evaluates
    the same derivative at ``xi = 0`` (an alternative closed form; it is
    not the average density and is exposed only for comparison).
    """
    _check_sector(N, m)
    if N == 0:
        raise SectorError("density needs N >= 1")
    if method == "direct":
        st = cached_state(N, m, params)
        num = ZERO
        Z = ZERO
        for w, p in st.components.items():
            v = sum(p.terms.values(), ZERO)
            num += count_particles(w) * v
            Z += v
        return num / (N * Z)
    data = exact_partition(N, m, params)
    coeffs = {k: sum(p.terms.values(), ZERO) for k, p in data.Zweighted.items()}
    if method == "log-derivative":
        d1 = sum((k * c for k, c in coeffs.items()), ZERO)
        return d1 / (N * sum(coeffs.values(), ZERO))
    if method == "printed-xi0":
        c0 = coeffs.get(0, ZERO)
        if not c0:
            raise ZeroDivisionError("Z_N(0; 1) = 0")
        return coeffs.get(1, ZERO) / (N * c0)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------- contour integral


@dataclass
class ContourPlan:
    """Kernel poles on the wrong side of the unit circle.

    ``added`` holds required poles ``p t^k`` outside the circle, ``removed``
    the excluded poles ``1/(p t^k)`` inside it; entries are
    ``(location, parameter index, k)``.
    """

    added: List[tuple] = field(default_factory=list)
    removed: List[tuple] = field(default_factory=list)
    radii: Dict[complex, float] = field(default_factory=dict)
    simple: bool = True


def contour_plan(params: Sequence[float], t: float, margin: float = 1e-9, kmax: int = 10000) -> ContourPlan:
    """Split the poles ``p t^k`` (required) and ``1/(p t^k)`` (excluded) by the unit circle."""
    plan = ContourPlan()
    for i, p in enumerate(params):
        if p == 0:
            continue
        for k in range(kmax):
            x = p * t ** k
            if abs(abs(x) - 1) < margin:
                raise ContourError(f"pole {x} (parameter {p}, k={k}) lies on the unit circle")
            if abs(x) < 1:
                break
            plan.added.append((x, i, k))
            plan.removed.append((1 / x, i, k))
    everything = []
    for p in params:
        if p == 0:
            continue
        for k in range(60):
            x = p * t ** k
            everything += [x, 1 / x]
            if abs(x) < 1e-3:
                break
    for x, _, _ in plan.added:
        for p in params:
            for k in range(60):
                if p and abs(x - 1 / (p * t ** k)) < margin * max(1, abs(x)):
                    raise ContourError(f"required pole {x} coincides with an excluded pole")
    for bucket in (plan.added, plan.removed):
        for x, _, _ in bucket:
            close = [abs(x - y) for y in everything if abs(x - y) >= margin * max(1, abs(x))]
            if len(close) < len(everything) - 1:
                plan.simple = False  # a repeated parameter makes a double pole
            plan.radii[x] = 0.5 * min(close + [abs(x)])
    return plan


def _kernel_without(x, params, t, which: int, k: int, inverted: bool):
    """Askey-Wilson weight at ``x`` with the factor ``1 - p t^k / x`` (or ``1 - p t^k x`` when
    ``inverted``) of parameter ``which`` removed: the finite part at that simple pole."""
    num = q_pochhammer(x * x, t) * q_pochhammer(1 / (x * x), t)
    den = 1
    for i, p in enumerate(params):
        if p == 0:
            continue
        up, down = q_pochhammer(p * x, t), q_pochhammer(p / x, t)
        if i == which:
            if inverted:
                up = q_pochhammer(p * x, t, k) * q_pochhammer(p * t ** (k + 1) * x, t)
            else:
                down = q_pochhammer(p / x, t, k) * q_pochhammer(p * t ** (k + 1) / x, t)
        den = den * up * down
    return num / den


def _as_float(v):
    return float(v) if not isinstance(v, (complex, mpmath.mpc)) else complex(v)


def mimachi_partition(
    N: int,
    m: int,
    params: ParamPoint,
    xi=1,
    z: Optional[Sequence] = None,
    tol: float = 1e-12,
    residues: str = "analytic",
    with_plan: bool = False,
):
    """``Z_{N,m}(xi^2; z)`` from the contour integral against the Askey-Wilson weight.

    ``(-1)^m xi^{N-m} r_m(a_xi, b_xi, c_xi, d_xi | t)^-1
    oint dx/(4 pi i x) prod_i (xi z_i + 1/(xi z_i) - x - 1/x) w(x; ...) p_m(x; ...)``
    with ``a_xi = xi a``, ``b_xi = xi b``, ``c_xi = c/xi``, ``d_xi = d/xi``.
    The contour encloses the poles ``p t^k`` and excludes ``1/(p t^k)``: it is
    realised as the unit circle plus the residues of required poles outside
    it, minus those of excluded poles inside it.  ``residues='analytic'``
    evaluates simple-pole residues in closed form; ``'circle'`` integrates
    over small circles instead (needed for double poles, and a cross-check).
    ``z=None`` is the homogeneous point.  Requires ``0 < t < 1``.
    """
    _check_sector(N, m)
    t = float(params.t)
    if not 0 < t < 1:
        raise ParameterError("the integral representation needs 0 < t < 1")
    xi_f = float(xi)
    if xi_f <= 0:
        raise ParameterError("xi must be positive")
    pars = (float(params.a) * xi_f, float(params.b) * xi_f, float(params.c) / xi_f, float(params.d) / xi_f)
    zs = [1.0] * N if z is None else [_as_float(v) for v in z]
    if len(zs) != N:
        raise ValueError("spectral point has the wrong length")
    sym = [xi_f * v + 1 / (xi_f * v) for v in zs]

    def symmetric_factor(x):
        xs = x + 1 / x
        prod = 1
        for u in sym:
            prod *= u - xs
        return prod

    def F(x):
        return symmetric_factor(x) * aw_kernel(x, *pars, t) * askey_wilson_recurrence(m, x, *pars, t)

    def at_pole(x0, i, k):
        # p_m is symmetric in its parameters and in x <-> 1/x
        rest = [p for j, p in enumerate(pars) if j != i]
        return symmetric_factor(x0) * askey_wilson_at_pole(m, k, pars[i], *rest, t)

    plan = contour_plan(pars, t)
    if residues == "analytic" and not plan.simple:
        residues = "circle"
    total = circle_average(F, tol=tol, scale="l1") / 2
    visited = set()
    for sign, bucket in ((1, plan.added), (-1, plan.removed)):
        inverted = sign < 0
        for x0, i, k in bucket:
            if residues == "circle":
                # coinciding parameters list the same (double) pole more than once
                if x0 in visited:
                    continue
                visited.add(x0)
            if residues == "analytic":
                # Res F(x)/x at the pole: +finite part for p t^k, -finite part for 1/(p t^k)
                res = at_pole(x0, i, k) * _kernel_without(x0, pars, t, i, k, inverted)
                total += sign * (-res if inverted else res) / 2
            elif residues == "circle":
                r = plan.radii[x0]
                total += sign * circle_average(
                    lambda x, p=x0: F(x) * (x - p) / x, tol=tol, center=x0, radius=r, scale="l1"
                ) / 2
            else:
                raise ValueError(f"unknown residue method {residues!r}")
    pref = (-1) ** m * xi_f ** (N - m) / aw_norm_ratio(m, *pars, t)
    val = complex(pref * total)
    if abs(val.imag) > 1e-6 * max(1.0, abs(val.real)):
        warnings.warn(f"contour integral has imaginary part {val.imag:.3g}")
    return (val.real, plan) if with_plan else val.real


def mimachi_current(N: int, m: int, params: ParamPoint, tol: float = 1e-12) -> float:
    """``(t^{1/2} - t^{-1/2}) Z_{N-1,m}(1) / Z_{N,m}(1)`` with both partition functions from the integral."""
    if m == N:
        return 0.0
    s = float(params.s)
    return (s - 1 / s) * mimachi_partition(N - 1, m, params, tol=tol) / mimachi_partition(N, m, params, tol=tol)


def mimachi_density(N: int, m: int, params: ParamPoint, h: float = 1e-2, tol: float = 1e-14) -> float:
    """``<rho_x> = (1/2N) d/dxi log Z_{N,m}(xi^2; 1)`` at ``xi = 1``, by a 4-point central difference."""
    f = lambda x: math.log(abs(mimachi_partition(N, m, params, xi=x, tol=tol)))  # noqa: E731
    d = (8 * (f(1 + h) - f(1 - h)) - (f(1 + 2 * h) - f(1 - 2 * h))) / (12 * h)
    return d / (2 * N)


# ---------------------------------------------------------------- phase diagram


PHASES = ("maximal-current", "a-dominated", "c-dominated")


@dataclass
class PhaseResult:
    rho_star: object
    x0: object
    phase: str
    J: float
    rho_bullet: float
    # at a phase boundary: the values from each adjacent phase
    alternatives: Dict[str, tuple] = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "rho_star": _fmt(self.rho_star),
            "x0": _fmt(self.x0),
            "phase": self.phase,
            "J": self.J,
            "rho_bullet": self.rho_bullet,
        }
        if self.alternatives:
            out["alternatives"] = {k: {"J": v[0], "rho_bullet": v[1]} for k, v in self.alternatives.items()}
        return out


def _fmt(x):
    try:
        return rational_to_str(Q(x))
    except (TypeError, ValueError):
        return float(x)


def saddle_point(rho_star):
    """``x_0 = (1 + rho) / (rho - 1)`` (``<= -1``)."""
    return (1 + rho_star) / (rho_star - 1)


def phase_values(phase: str, rho_star, s, a, c):
    """``(J, rho_x)`` of the given phase, as floats."""
    rho, s, a, c = float(rho_star), float(s), float(a), float(c)
    if phase == "maximal-current":
        return (s - 1 / s) * (1 - rho * rho) / 4, (1 - rho) / 2
    if phase == "a-dominated":
        return a * (1 / s - s) / (1 - a) ** 2, a / (a - 1) - rho
    if phase == "c-dominated":
        return c * (1 / s - s) / (1 - c) ** 2, 1 / (1 - c)
    raise ValueError(phase)


def phase_diagram(rho_star, params: ParamPoint) -> PhaseResult:
    """Large-N current and first-class density at second-class density ``rho_star``.

    The dominant contribution is the saddle point ``x_0`` unless ``a`` or ``c``
    lies below it, in which case the smaller of the two poles wins.
    """
    if not 0 <= rho_star < 1:
        raise ValueError("rho_star must lie in [0, 1)")
    a, c = params.a, params.c
    if not (a < 0 and c < 0):
        raise ParameterError("the phase diagram assumes a, c < 0")
    x0 = saddle_point(Q(rho_star) if not isinstance(rho_star, float) else rho_star)
    candidates = {"maximal-current": x0, "a-dominated": a, "c-dominated": c}
    low = min(candidates.values())
    winners = [k for k in PHASES if candidates[k] == low]
    phase = winners[0]
    res = PhaseResult(rho_star, x0, phase, *phase_values(phase, rho_star, params.s, a, c))
    if len(winners) > 1:
        warnings.warn(f"rho_star={rho_star} lies on the boundary between {' and '.join(winners)}")
        res.alternatives = {k: phase_values(k, rho_star, params.s, a, c) for k in winners}
    return res


# ---------------------------------------------------------------- output


CSV_COLUMNS = ("N", "m", "rho_star", "t", "a", "b", "c", "d", "xi", "Z", "J", "rho_bullet", "phase", "method")


def sweep_rows(params: ParamPoint, sizes: Sequence[int], rho_star, method: str = "mimachi", xi=1) -> List[dict]:
    """One row per system size at fixed second-class density ``rho_star`` (``m = round(rho N)``)."""
    ph = phase_diagram(rho_star, params)
    rows = []
    for N in sizes:
        m = int(round(float(rho_star) * N))
        if method == "exact":
            Z = exact_partition(N, m, params).Zhom
            J = steady_current(N, m, params)
            rho = density_first_class(N, m, params)
            Zs, Js, rhos = rational_to_str(Z), rational_to_str(J), rational_to_str(rho)
        elif method == "mimachi":
            Zs = repr(mimachi_partition(N, m, params, xi=xi))
            Js = repr(mimachi_current(N, m, params))
            rhos = repr(mimachi_density(N, m, params))
        else:
            raise ValueError(f"unknown method {method!r}")
        rows.append(
            {
                "N": N,
                "m": m,
                "rho_star": _fmt(rho_star),
                "t": rational_to_str(params.t),
                "a": rational_to_str(params.a),
                "b": rational_to_str(params.b),
                "c": rational_to_str(params.c),
                "d": rational_to_str(params.d),
                "xi": _fmt(xi),
                "Z": Zs,
                "J": Js,
                "rho_bullet": rhos,
                "phase": ph.phase,
                "method": method,
            }
        )
    return rows


def rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def rows_to_json(rows: Sequence[dict]) -> str:
    return json.dumps(list(rows), indent=2)
