"""Model parameters: ``s = t^{1/2}``, boundary parameters ``a, b, c, d`` and rates."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from typing import Optional

from gmpy2 import mpq

from .exact import Q, rational_to_str


class ParameterError(ValueError):
    pass


class ResonanceError(ZeroDivisionError):
    """A denominator of the form ``1 - abcd t^j`` (or similar) vanished."""


@dataclass(frozen=True)
class ParamPoint:
    """A point ``(s, a, b, c, d)`` with ``t = s**2``.

    Boundary rates follow the parametrisation

        alpha = (s - 1/s) ab / ((a-1)(b-1)),   gamma = (1/s - s) / ((a-1)(b-1)),
        beta  = (s - 1/s) cd / ((c-1)(d-1)),   delta = (1/s - s) / ((c-1)(d-1)).

    alpha/delta inject first-class particles at the left/right end, gamma/beta
    remove them.
    """

    s: mpq
    a: mpq
    b: mpq
    c: mpq
    d: mpq
    xi: Optional[mpq] = None
    t: mpq = field(init=False)
    alpha: mpq = field(init=False)
    beta: mpq = field(init=False)
    gamma: mpq = field(init=False)
    delta: mpq = field(init=False)

    def __post_init__(self):
        for name in ("s", "a", "b", "c", "d"):
            object.__setattr__(self, name, Q(getattr(self, name)))
        if self.xi is not None:
            object.__setattr__(self, "xi", Q(self.xi))
        s, a, b, c, d = self.s, self.a, self.b, self.c, self.d
        if s == 0 or s == 1 or s == -1:
            raise ParameterError(f"s = t^(1/2) must avoid 0 and +-1 (got s={s}); t = 1 is excluded")
        for name in ("a", "b", "c", "d"):
            v = getattr(self, name)
            if v == 1:
                raise ParameterError(f"{name} = 1 makes the boundary rates singular")
            if v == 0:
                raise ParameterError(f"{name} = 0 is not allowed (1/{name} appears in the solution)")
        if a * b == 1 or c * d == 1:
            raise ParameterError("ab = 1 or cd = 1 is not allowed")
        if self.xi is not None and self.xi == 0:
            raise ParameterError("fugacity xi must be nonzero")
        ds = s - 1 / s
        object.__setattr__(self, "t", s * s)
        object.__setattr__(self, "alpha", ds * a * b / ((a - 1) * (b - 1)))
        object.__setattr__(self, "gamma", -ds / ((a - 1) * (b - 1)))
        object.__setattr__(self, "beta", ds * c * d / ((c - 1) * (d - 1)))
        object.__setattr__(self, "delta", -ds / ((c - 1) * (d - 1)))

    # hecke parameters t_0 = -ab, t_N = -cd (q = 1)
    @property
    def t0(self) -> mpq:
        return -self.a * self.b

    @property
    def tN(self) -> mpq:
        return -self.c * self.d

    @property
    def has_positive_rates(self) -> bool:
        return self.s > 0 and min(self.alpha, self.beta, self.gamma, self.delta) > 0

    @property
    def in_standard_regime(self) -> bool:
        """``0 < t < 1`` with ``a, c < 0 < b, d < 1`` (or ``t > 1`` with ``b, d > 1``)."""
        if not (self.s > 0 and self.a < 0 and self.c < 0):
            return False
        if self.t < 1:
            return 0 < self.b < 1 and 0 < self.d < 1
        return self.b > 1 and self.d > 1

    @property
    def is_physical(self) -> bool:
        return self.has_positive_rates

    def with_(self, **kw) -> "ParamPoint":
        return replace(self, **{k: Q(v) for k, v in kw.items()})

    def shifted(self, a=1, b=1, c=1, d=1) -> "ParamPoint":
        """Multiply the boundary parameters by the given factors."""
        return ParamPoint(self.s, self.a * Q(a), self.b * Q(b), self.c * Q(c), self.d * Q(d), self.xi)

    def fugacity_shift(self, xi) -> "ParamPoint":
        """``(xi a, xi b, c/xi, d/xi)``."""
        xi = Q(xi)
        return ParamPoint(self.s, xi * self.a, xi * self.b, self.c / xi, self.d / xi, self.xi)

    def resonance_free(self, jmax: int) -> bool:
        p = self.a * self.b * self.c * self.d
        return all(p * self.t ** j != 1 for j in range(-1, jmax + 1))

    def to_dict(self) -> dict:
        out = {k: rational_to_str(getattr(self, k)) for k in ("s", "a", "b", "c", "d")}
        if self.xi is not None:
            out["xi"] = rational_to_str(self.xi)
        for k in ("t", "alpha", "beta", "gamma", "delta"):
            out[k] = rational_to_str(getattr(self, k))
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "ParamPoint":
        missing = [k for k in ("s", "a", "b", "c", "d") if k not in d]
        if missing:
            raise ParameterError(f"missing parameters: {', '.join(missing)}")
        for k in ("s", "a", "b", "c", "d", "xi"):
            if isinstance(d.get(k), float):
                raise ParameterError(f"parameter {k} given as a float; write it as 'p/q'")
        return cls(*(Q(d[k]) for k in ("s", "a", "b", "c", "d")), xi=Q(d["xi"]) if "xi" in d else None)


def _rand_rational(rng: random.Random, lo, hi, maxden: int) -> mpq:
    den = rng.randint(1, maxden)
    lo, hi = Q(lo), Q(hi)
    # uniform numerator in the open interval (lo*den, hi*den)
    nlo = math.floor(lo * den) + 1
    nhi = math.ceil(hi * den) - 1
    if nlo > nhi:
        return _rand_rational(rng, lo, hi, maxden)
    return mpq(rng.randint(nlo, nhi), den)


def random_params(
    rng: random.Random,
    physical: bool = True,
    maxden: int = 12,
    resonance_window: int = 16,
) -> ParamPoint:
    """Sample a parameter point with small-height rationals.

    ``physical=True`` samples ``0 < t < 1``, ``a, c < 0 < b, d < 1`` so that
    all rates are positive.  Otherwise the parameters are generic nonzero
    rationals.  Points with ``abcd t^j = 1`` for ``|j| <= resonance_window``
    or other degeneracies are rejected.
    """
    while True:
        if physical:
            s = _rand_rational(rng, 0, 1, maxden)
            a = _rand_rational(rng, -3, 0, maxden)
            c = _rand_rational(rng, -3, 0, maxden)
            b = _rand_rational(rng, 0, 1, maxden)
            d = _rand_rational(rng, 0, 1, maxden)
        else:
            vals = []
            for _ in range(5):
                v = _rand_rational(rng, -3, 3, maxden)
                vals.append(v)
            s, a, b, c, d = vals
        try:
            p = ParamPoint(s, a, b, c, d)
        except ParameterError:
            continue
        t = p.t
        prod = a * b * c * d
        bad = any(prod * t ** j == 1 for j in range(-resonance_window, resonance_window + 1))
        # pairwise products entering K_R / K_L / AW norms
        pairs = [a * c, a * d, b * c, b * d, a * b, c * d]
        bad = bad or any(x * t ** j == 1 for x in pairs for j in range(-resonance_window, resonance_window + 1))
        bad = bad or len({a, b, c, d}) < 4 or any(abs(v) == 1 for v in (a, b, c, d))
        if not bad:
            return p
