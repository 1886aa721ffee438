"""Exact scalars and sparse multivariate Laurent polynomials.

All scalars are :class:`gmpy2.mpq` rationals.  A :class:`LaurentPoly` is an
immutable map from integer exponent vectors to nonzero rational
coefficients.  The reflections used throughout the package act on it as

* ``s_i``  (1 <= i <= N-1): swap ``z_i`` and ``z_{i+1}``,
* ``s_0``: ``z_1 -> z_1^{-1}`` (the ``q = 1`` specialisation),
* ``s_N``: ``z_N -> z_N^{-1}``.

Variables are indexed from 0 in code (``z_1`` is variable 0).
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

from gmpy2 import mpq

Exp = Tuple[int, ...]
Scalar = Union[int, Fraction, "mpq"]

ZERO = mpq(0)
ONE = mpq(1)


class DimensionError(ValueError):
    pass


class PoleError(ZeroDivisionError):
    pass


class InvariantViolation(ArithmeticError):
    """An internal exactness guarantee failed (signals a bug)."""


def Q(x) -> mpq:
    """Coerce ``x`` (int, str like ``"3/7"``, Fraction, mpq) to an exact rational."""
    if isinstance(x, float):
        raise TypeError("floats are not accepted where exact rationals are required")
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return mpq(x.strip())
    return mpq(x)


def rational_to_str(x) -> str:
    x = Q(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class LaurentPoly:
    """Sparse Laurent polynomial in ``nvars`` variables with rational coefficients."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exp, Scalar] | None = None, *, _trusted=False):
        self.nvars = nvars
        if _trusted:
            self.terms = terms
        else:
            clean: Dict[Exp, mpq] = {}
            for e, c in (terms or {}).items():
                e = tuple(int(v) for v in e)
                if len(e) != nvars:
                    raise DimensionError(f"exponent {e} has wrong length for nvars={nvars}")
                c = Q(c)
                if c:
                    clean[e] = clean.get(e, ZERO) + c
                    if not clean[e]:
                        del clean[e]
            self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "LaurentPoly":
        return cls(nvars, {}, _trusted=True)

    @classmethod
    def const(cls, nvars: int, c: Scalar) -> "LaurentPoly":
        c = Q(c)
        return cls(nvars, {(0,) * nvars: c} if c else {}, _trusted=True)

    @classmethod
    def monomial(cls, nvars: int, exp: Sequence[int], c: Scalar = 1) -> "LaurentPoly":
        return cls(nvars, {tuple(exp): c})

    @classmethod
    def var(cls, nvars: int, i: int, power: int = 1) -> "LaurentPoly":
        e = [0] * nvars
        e[i] = power
        return cls(nvars, {tuple(e): ONE}, _trusted=True)

    # -- basic protocol -----------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)) or type(other) is type(ONE):
            return self.terms == LaurentPoly.const(self.nvars, other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"LaurentPoly({self.nvars}, {self.pretty()})"

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            c = self.terms[e]
            mono = "*".join(
                (f"z{i + 1}" if p == 1 else f"z{i + 1}^{p}") for i, p in enumerate(e) if p
            )
            cs = rational_to_str(c)
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"({cs})*{mono}")
        return " + ".join(parts)

    def _check(self, other: "LaurentPoly"):
        if self.nvars != other.nvars:
            raise DimensionError(f"nvars mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        return LaurentPoly.const(self.nvars, other)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return LaurentPoly(self.nvars, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.nvars, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "LaurentPoly":
        c = Q(c)
        if not c:
            return LaurentPoly.zero(self.nvars)
        return LaurentPoly(self.nvars, {e: v * c for e, v in self.terms.items()}, _trusted=True)

    def shift(self, exp: Sequence[int], c=ONE) -> "LaurentPoly":
        """Multiply by the monomial ``c * z^exp``."""
        c = Q(c)
        if not c:
            return LaurentPoly.zero(self.nvars)
        return LaurentPoly(
            self.nvars,
            {tuple(a + b for a, b in zip(e, exp)): v * c for e, v in self.terms.items()},
            _trusted=True,
        )

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return self.scale(other)
        self._check(other)
        if len(other.terms) < len(self.terms):
            small, big = other, self
        else:
            small, big = self, other
        out: Dict[Exp, mpq] = {}
        for e1, c1 in small.terms.items():
            for e2, c2 in big.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, ZERO) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return LaurentPoly(self.nvars, out, _trusted=True)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        if n < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials can be raised to negative powers")
            (e, c), = self.terms.items()
            return LaurentPoly(self.nvars, {tuple(v * n for v in e): c ** n}, _trusted=True)
        out = LaurentPoly.const(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- inspection ---------------------------------------------------
    def coeff(self, exp: Sequence[int]) -> mpq:
        return self.terms.get(tuple(exp), ZERO)

    def degree_range(self, i: int) -> Tuple[int, int]:
        if not self.terms:
            return (0, 0)
        vals = [e[i] for e in self.terms]
        return (min(vals), max(vals))

    def depends_on(self, i: int) -> bool:
        return any(e[i] for e in self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> mpq:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * self.nvars, ZERO)

    # -- substitutions ------------------------------------------------
    def evaluate(self, point: Sequence) -> object:
        """Full evaluation at a point; works for any scalar type supporting ``*``/``**``."""
        if len(point) != self.nvars:
            raise DimensionError("point has wrong length")
        for p in point:
            if p == 0:
                raise PoleError("cannot evaluate a Laurent polynomial at 0")
        cache = [dict() for _ in range(self.nvars)]
        total = None
        for e, c in self.terms.items():
            term = c
            for i, p in enumerate(e):
                if p:
                    v = cache[i].get(p)
                    if v is None:
                        v = point[i] ** p
                        cache[i][p] = v
                    term = term * v
            total = term if total is None else total + term
        return ZERO if total is None else total

    def specialize(self, assignment: Mapping[int, object]):
        """Substitute variables.

        ``assignment`` maps a variable index to either a nonzero rational or a
        pair ``(coeff, exp)`` meaning ``z_i -> coeff * z^exp``.  Returns a
        rational when every variable receives a rational value.
        """
        point_vals = {}
        mono_vals = {}
        for i, v in assignment.items():
            if not 0 <= i < self.nvars:
                raise DimensionError(f"variable {i} out of range")
            if isinstance(v, tuple):
                c, exp = v
                c = Q(c)
                if not c:
                    raise PoleError("monomial substitution with zero coefficient")
                mono_vals[i] = (c, tuple(exp))
            else:
                v = Q(v)
                if not v:
                    raise PoleError(f"substituting 0 for z{i + 1}")
                point_vals[i] = v
        out: Dict[Exp, mpq] = {}
        for e, c in self.terms.items():
            ne = list(e)
            for i, v in point_vals.items():
                if e[i]:
                    c = c * v ** e[i]
                ne[i] = 0
            for i in mono_vals:
                ne[i] = 0
            for i, (mc, mexp) in mono_vals.items():
                p = e[i]
                if p:
                    c = c * mc ** p
                    for j, x in enumerate(mexp):
                        ne[j] += p * x
            ne = tuple(ne)
            v = out.get(ne, ZERO) + c
            if v:
                out[ne] = v
            else:
                out.pop(ne, None)
        res = LaurentPoly(self.nvars, out, _trusted=True)
        if len(point_vals) == self.nvars:
            return res.terms.get((0,) * self.nvars, ZERO)
        return res

    def swap(self, i: int, j: int) -> "LaurentPoly":
        def sw(e):
            e = list(e)
            e[i], e[j] = e[j], e[i]
            return tuple(e)

        return LaurentPoly(self.nvars, {sw(e): c for e, c in self.terms.items()}, _trusted=True)

    def invert_var(self, i: int) -> "LaurentPoly":
        def inv(e):
            e = list(e)
            e[i] = -e[i]
            return tuple(e)

        return LaurentPoly(self.nvars, {inv(e): c for e, c in self.terms.items()}, _trusted=True)

    def scale_vars(self, xi) -> "LaurentPoly":
        """``p(xi * z_1, ..., xi * z_N)``."""
        xi = Q(xi)
        return LaurentPoly(
            self.nvars, {e: c * xi ** sum(e) for e, c in self.terms.items()}, _trusted=True
        )

    def drop_var(self, i: int) -> "LaurentPoly":
        """Remove variable ``i``; it must not occur."""
        if self.depends_on(i):
            raise ValueError(f"polynomial depends on z{i + 1}")
        return LaurentPoly(
            self.nvars - 1, {e[:i] + e[i + 1:]: c for e, c in self.terms.items()}, _trusted=True
        )

    def insert_var(self, i: int) -> "LaurentPoly":
        """Embed into one more variable, inserted at position ``i``."""
        return LaurentPoly(
            self.nvars + 1, {e[:i] + (0,) + e[i:]: c for e, c in self.terms.items()}, _trusted=True
        )

    # -- serialization ------------------------------------------------
    def to_json_obj(self) -> dict:
        return {
            "nvars": self.nvars,
            "terms": [
                {
                    "exp": list(e),
                    "num": str(self.terms[e].numerator),
                    "den": str(self.terms[e].denominator),
                }
                for e in sorted(self.terms)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> "LaurentPoly":
        n = int(obj["nvars"])
        return cls(n, {tuple(t["exp"]): mpq(int(t["num"]), int(t["den"])) for t in obj["terms"]})

    @classmethod
    def from_json(cls, text: str) -> "LaurentPoly":
        return cls.from_json_obj(json.loads(text))


# ---------------------------------------------------------------------------
# divided differences


def _dd_pair(a: int, b: int):
    """Exponent pairs of (x^a y^b - x^b y^a)/(x - y) with their signs."""
    if a == b:
        return ()
    if a > b:
        return tuple((a - 1 - j, b + j, 1) for j in range(a - b))
    return tuple((b - 1 - j, a + j, -1) for j in range(b - a))


def _dd_inv(a: int):
    """(z^a - z^{-a})/(z - z^{-1}) as a list of (exponent, sign)."""
    if a == 0:
        return ()
    sgn = 1 if a > 0 else -1
    k = abs(a)
    return tuple((k - 1 - 2 * j, sgn) for j in range(k))


def divided_difference_swap(p: LaurentPoly, i: int) -> LaurentPoly:
    """``(p - s_i p)/(z_i - z_{i+1})`` with variables ``i, i+1`` (0-based)."""
    out: Dict[Exp, mpq] = {}
    for e, c in p.terms.items():
        for x, y, sg in _dd_pair(e[i], e[i + 1]):
            ne = e[:i] + (x, y) + e[i + 2:]
            v = out.get(ne, ZERO) + (c if sg > 0 else -c)
            if v:
                out[ne] = v
            else:
                out.pop(ne, None)
    return LaurentPoly(p.nvars, out, _trusted=True)


def divided_difference_inversion(p: LaurentPoly, i: int) -> LaurentPoly:
    """``(p - p|_{z_i -> 1/z_i})/(z_i - z_i^{-1})``."""
    out: Dict[Exp, mpq] = {}
    for e, c in p.terms.items():
        for x, sg in _dd_inv(e[i]):
            ne = e[:i] + (x,) + e[i + 1:]
            v = out.get(ne, ZERO) + (c if sg > 0 else -c)
            if v:
                out[ne] = v
            else:
                out.pop(ne, None)
    return LaurentPoly(p.nvars, out, _trusted=True)


def divided_difference(p: LaurentPoly, which: int) -> LaurentPoly:
    """Noumi divided difference at ``q = 1``.

    ``which`` follows the reflection labels 0..N: 0 inverts ``z_1``, N
    inverts ``z_N`` and 1..N-1 swap neighbouring variables.
    """
    N = p.nvars
    if which == 0:
        return divided_difference_inversion(p, 0)
    if which == N:
        return divided_difference_inversion(p, N - 1)
    if 1 <= which <= N - 1:
        return divided_difference_swap(p, which - 1)
    raise IndexError(f"no reflection s_{which} for N={N}")


def reflect(p: LaurentPoly, which: int) -> LaurentPoly:
    """Apply the reflection ``s_which`` (0..N) to ``p``."""
    N = p.nvars
    if which == 0:
        return p.invert_var(0)
    if which == N:
        return p.invert_var(N - 1)
    if 1 <= which <= N - 1:
        return p.swap(which - 1, which)
    raise IndexError(f"no reflection s_{which} for N={N}")


def elementary_symmetric(k: int, monomials: Sequence[LaurentPoly]) -> LaurentPoly:
    if not monomials:
        raise ValueError("need at least one monomial to fix nvars")
    n = len(monomials)
    if not 0 <= k <= n:
        raise IndexError(f"e_{k} undefined for {n} inputs")
    nv = monomials[0].nvars
    # e_j via the generating product prod(1 + u x_i), truncated at degree k
    es = [LaurentPoly.const(nv, 1)] + [LaurentPoly.zero(nv)] * k
    for x in monomials:
        for j in range(k, 0, -1):
            es[j] = es[j] + es[j - 1] * x
    return es[k]


def exact_derivative(p: LaurentPoly, var: int) -> LaurentPoly:
    out = {}
    for e, c in p.terms.items():
        if e[var]:
            ne = e[:var] + (e[var] - 1,) + e[var + 1:]
            out[ne] = c * e[var]
    return LaurentPoly(p.nvars, out, _trusted=True)


class Dual:
    """Exact dual number ``a + b*eps`` with ``eps**2 = 0``; used for exact first derivatives."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        self.a = a
        self.b = b

    @staticmethod
    def _lift(x):
        return x if isinstance(x, Dual) else Dual(x, ZERO)

    def __add__(self, o):
        o = Dual._lift(o)
        return Dual(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.a, -self.b)

    def __sub__(self, o):
        o = Dual._lift(o)
        return Dual(self.a - o.a, self.b - o.b)

    def __rsub__(self, o):
        return Dual._lift(o) - self

    def __mul__(self, o):
        o = Dual._lift(o)
        return Dual(self.a * o.a, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = Dual._lift(o)
        if not o.a:
            raise PoleError("dual division by an infinitesimal")
        return Dual(self.a / o.a, (self.b * o.a - self.a * o.b) / (o.a * o.a))

    def __rtruediv__(self, o):
        return Dual._lift(o) / self

    def __pow__(self, n: int):
        if n < 0:
            return Dual(ONE) / (self ** (-n))
        return Dual(self.a ** n, n * self.a ** (n - 1) * self.b if n else ZERO)

    def __eq__(self, o):
        o = Dual._lift(o)
        return self.a == o.a and self.b == o.b

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __repr__(self):
        return f"Dual({self.a}, {self.b})"


def monomials_up_to(nvars: int, degree: int) -> Iterable[Exp]:
    """Exponent vectors with ``sum |e_i| <= degree``."""

    def rec(i, left):
        if i == nvars:
            yield ()
            return
        for v in range(-left, left + 1):
            for rest in rec(i + 1, left - abs(v)):
                yield (v,) + rest

    return rec(0, degree)
