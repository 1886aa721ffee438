"""Sectors, the Markov generator, R/K/scattering operators and an exact nullspace.

Conventions
-----------
Sites carry ``-1`` (empty, ``o``), ``0`` (second class, ``*``) or ``+1``
(first class, ``x``).  Matrices act on column vectors of probabilities:
``dP/dt = M P``, so every column of ``M`` sums to zero and ``M[w', w]`` is the
rate of ``w -> w'``.

In the bulk the pair ``(x, y)`` on sites ``(i, i+1)`` becomes ``(y, x)`` at
rate ``s`` when ``x > y`` and ``1/s`` when ``x < y``.  At site 1 a first-class
particle enters at rate ``alpha`` and leaves at ``gamma``; at site N it
enters at ``delta`` and leaves at ``beta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .exact import ONE, ZERO, Dual, InvariantViolation, LaurentPoly, PoleError, Q, rational_to_str
from .params import ParamPoint, ParameterError

Config = Tuple[int, ...]

SYMBOLS = {-1: "o", 0: "*", 1: "x"}
PRETTY = {-1: "◦", 0: "∗", 1: "•"}
_FROM_SYMBOL = {"o": -1, "*": 0, "x": 1, "◦": -1, "∗": 0, "•": 1, ".": 1}


def word_to_str(w: Config) -> str:
    return "".join(SYMBOLS[x] for x in w)


def word_from_str(s: str) -> Config:
    try:
        return tuple(_FROM_SYMBOL[ch] for ch in s)
    except KeyError as exc:
        raise ValueError(f"bad configuration string {s!r}") from exc


class SectorError(ValueError):
    pass


class Sector:
    """All words of length ``N`` with exactly ``m`` second-class particles, in lexicographic order."""

    def __init__(self, N: int, m: int):
        if N < 0 or not 0 <= m <= N:
            raise SectorError(f"invalid sector N={N}, m={m}")
        self.N = N
        self.m = m
        self.configs: List[Config] = sorted(
            w for w in product((-1, 0, 1), repeat=N) if sum(1 for x in w if x == 0) == m
        )
        self.index: Dict[Config, int] = {w: k for k, w in enumerate(self.configs)}
        assert len(self.configs) == math.comb(N, m) * 2 ** (N - m)

    def __len__(self):
        return len(self.configs)

    def __iter__(self):
        return iter(self.configs)

    def __repr__(self):
        return f"Sector(N={self.N}, m={self.m}, size={len(self)})"

    def __eq__(self, other):
        return isinstance(other, Sector) and (self.N, self.m) == (other.N, other.m)

    def __hash__(self):
        return hash((self.N, self.m))


def _is_zero(v) -> bool:
    return not v


class SparseExactMatrix:
    """Sparse matrix over exact scalars (mpq, :class:`~koornwinder_asep.exact.Dual`, LaurentPoly)."""

    __slots__ = ("dims", "entries")

    def __init__(self, dims: Tuple[int, int], entries: Optional[Dict[Tuple[int, int], object]] = None):
        self.dims = (int(dims[0]), int(dims[1]))
        self.entries: Dict[Tuple[int, int], object] = {}
        if entries:
            for (i, j), v in entries.items():
                if not (0 <= i < self.dims[0] and 0 <= j < self.dims[1]):
                    raise IndexError(f"entry ({i},{j}) outside {self.dims}")
                if not _is_zero(v):
                    self.entries[(i, j)] = v

    @classmethod
    def identity(cls, n: int, one=ONE) -> "SparseExactMatrix":
        return cls((n, n), {(i, i): one for i in range(n)})

    @classmethod
    def zeros(cls, r: int, c: int) -> "SparseExactMatrix":
        return cls((r, c))

    def get(self, i: int, j: int, default=ZERO):
        return self.entries.get((i, j), default)

    def _acc(self, out, key, v):
        cur = out.get(key)
        nv = v if cur is None else cur + v
        if _is_zero(nv):
            out.pop(key, None)
        else:
            out[key] = nv

    def __add__(self, other: "SparseExactMatrix") -> "SparseExactMatrix":
        if self.dims != other.dims:
            raise ValueError("shape mismatch")
        out = dict(self.entries)
        for k, v in other.entries.items():
            self._acc(out, k, v)
        return SparseExactMatrix(self.dims, out)

    def __neg__(self):
        return SparseExactMatrix(self.dims, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SparseExactMatrix":
        return SparseExactMatrix(self.dims, {k: v * c for k, v in self.entries.items()})

    def __matmul__(self, other: "SparseExactMatrix") -> "SparseExactMatrix":
        if self.dims[1] != other.dims[0]:
            raise ValueError(f"shape mismatch {self.dims} @ {other.dims}")
        rows_b: Dict[int, List[Tuple[int, object]]] = {}
        for (k, j), v in other.entries.items():
            rows_b.setdefault(k, []).append((j, v))
        out: Dict[Tuple[int, int], object] = {}
        for (i, k), v in self.entries.items():
            for j, w in rows_b.get(k, ()):
                self._acc(out, (i, j), v * w)
        return SparseExactMatrix((self.dims[0], other.dims[1]), out)

    def matvec(self, vec: Sequence) -> list:
        if len(vec) != self.dims[1]:
            raise ValueError("vector length mismatch")
        out = [None] * self.dims[0]
        for (i, j), v in self.entries.items():
            x = vec[j]
            if _is_zero(x):
                continue
            out[i] = v * x if out[i] is None else out[i] + v * x
        zero = _zero_like(vec)
        return [zero if x is None else x for x in out]

    def transpose(self) -> "SparseExactMatrix":
        return SparseExactMatrix((self.dims[1], self.dims[0]), {(j, i): v for (i, j), v in self.entries.items()})

    def map(self, fn: Callable) -> "SparseExactMatrix":
        return SparseExactMatrix(self.dims, {k: fn(v) for k, v in self.entries.items()})

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        return isinstance(other, SparseExactMatrix) and self.dims == other.dims and (self - other).is_zero()

    def column_sums(self) -> list:
        sums = [ZERO] * self.dims[1]
        for (_, j), v in self.entries.items():
            sums[j] = sums[j] + v
        return sums

    def to_dense(self) -> list:
        rows = [[ZERO] * self.dims[1] for _ in range(self.dims[0])]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def to_json_obj(self) -> dict:
        def enc(v):
            if isinstance(v, LaurentPoly):
                return v.to_json_obj()
            return rational_to_str(v)

        return {
            "dims": list(self.dims),
            "entries": [[i, j, enc(v)] for (i, j), v in sorted(self.entries.items())],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "SparseExactMatrix":
        ents = {}
        for i, j, v in obj["entries"]:
            ents[(i, j)] = LaurentPoly.from_json_obj(v) if isinstance(v, dict) else Q(v)
        return cls(tuple(obj["dims"]), ents)

    def __repr__(self):
        return f"SparseExactMatrix(dims={self.dims}, nnz={len(self.entries)})"


def _zero_like(vec):
    for x in vec:
        if isinstance(x, LaurentPoly):
            return LaurentPoly.zero(x.nvars)
    return ZERO


# ---------------------------------------------------------------- local generators


def _generator(sector: Sector, moves: Callable[[Config], List[Tuple[Config, object]]]) -> SparseExactMatrix:
    """Column generator from a list of (target, rate) moves per configuration."""
    ents: Dict[Tuple[int, int], mpq] = {}
    for j, w in enumerate(sector.configs):
        for w2, rate in moves(w):
            i = sector.index[w2]
            ents[(i, j)] = ents.get((i, j), ZERO) + rate
            ents[(j, j)] = ents.get((j, j), ZERO) - rate
    return SparseExactMatrix((len(sector), len(sector)), ents)


def bulk_generator(sector: Sector, i: int, params: ParamPoint) -> SparseExactMatrix:
    """Bond generator on sites ``(i, i+1)``, 1-based."""
    if not 1 <= i <= sector.N - 1:
        raise IndexError(f"bond {i} out of range for N={sector.N}")
    s = params.s
    up, down = s, 1 / s

    def moves(w):
        x, y = w[i - 1], w[i]
        if x == y:
            return []
        w2 = w[: i - 1] + (y, x) + w[i + 1:]
        return [(w2, up if x > y else down)]

    return _generator(sector, moves)


def left_generator(sector: Sector, params: ParamPoint, inject=None, extract=None) -> SparseExactMatrix:
    """Site-1 generator: ``o -> x`` at ``inject`` (default alpha), ``x -> o`` at ``extract`` (default gamma)."""
    inject = params.alpha if inject is None else inject
    extract = params.gamma if extract is None else extract

    def moves(w):
        if w[0] == -1:
            return [((1,) + w[1:], inject)]
        if w[0] == 1:
            return [((-1,) + w[1:], extract)]
        return []

    return _generator(sector, moves)


def right_generator(sector: Sector, params: ParamPoint, inject=None, extract=None) -> SparseExactMatrix:
    """Site-N generator: ``o -> x`` at ``inject`` (default delta), ``x -> o`` at ``extract`` (default beta)."""
    inject = params.delta if inject is None else inject
    extract = params.beta if extract is None else extract

    def moves(w):
        if w[-1] == -1:
            return [(w[:-1] + (1,), inject)]
        if w[-1] == 1:
            return [(w[:-1] + (-1,), extract)]
        return []

    return _generator(sector, moves)


def markov_matrix(sector: Sector, params: ParamPoint, formal: bool = False) -> SparseExactMatrix:
    """Continuous-time generator restricted to the sector (columns sum to zero)."""
    if not formal and not params.has_positive_rates:
        raise ParameterError(
            "rates must be positive (s > 0, alpha, beta, gamma, delta > 0); pass formal=True for formal parameters"
        )
    n = len(sector)
    M = SparseExactMatrix.zeros(n, n)
    if sector.N == 0:
        return M
    for i in range(1, sector.N):
        M = M + bulk_generator(sector, i, params)
    M = M + left_generator(sector, params) + right_generator(sector, params)
    return M


# ---------------------------------------------------------------- R / K operators


@dataclass
class ClearedOperator:
    """``matrix / denominator`` with polynomial entries; used for symbolic arguments."""

    matrix: SparseExactMatrix
    denominator: object


def _r_coeff(z, s):
    den = s * z - 1 / s
    if _is_zero(den):
        raise PoleError("R-matrix pole: argument equals 1/t")
    return (z - 1) / den


def r_operator(i: int, z, sector: Sector, params: ParamPoint):
    """``R_i(z) = 1 + (z-1)/(s z - 1/s) e_i``.

    ``z`` may be a rational, a :class:`Dual`, or a LaurentPoly; in the last
    case the denominator is cleared and a :class:`ClearedOperator` returned.
    """
    e = bulk_generator(sector, i, params)
    n = len(sector)
    s = params.s
    if isinstance(z, LaurentPoly):
        den = z * s - 1 / s
        num = e.map(lambda v: (z - 1) * v) + SparseExactMatrix.identity(n, den)
        return ClearedOperator(num, den)
    coeff = _r_coeff(z, s)
    return SparseExactMatrix.identity(n) + e.map(lambda v: coeff * v)


def boundary_unit_generator(side: str, sector: Sector, params: ParamPoint) -> SparseExactMatrix:
    """The normalised boundary generator entering ``K``.

    Left: ``gamma^{-1} G_1`` (rate 1 for ``x -> o``, ``-ab`` for ``o -> x``).
    Right: ``delta^{-1} G_N`` (rate 1 for ``o -> x``, ``-cd`` for ``x -> o``).
    """
    if side == "left":
        return left_generator(sector, params, inject=-params.a * params.b, extract=ONE)
    if side == "right":
        return right_generator(sector, params, inject=ONE, extract=-params.c * params.d)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def _k_parts(side, z, params):
    """Numerator and denominator of the K coefficient."""
    if side == "left":
        return z * z - 1, (z - params.a) * (z - params.b)
    return 1 - z * z, (z * params.c - 1) * (z * params.d - 1)


def k_operator(side: str, z, sector: Sector, params: ParamPoint):
    """Boundary matrix ``K_1(z)`` (``side='left'``) or ``K_N(z)`` (``side='right'``)."""
    if sector.N == 0:
        raise SectorError("boundary operators need N >= 1")
    X = boundary_unit_generator(side, sector, params)
    n = len(sector)
    num, den = _k_parts(side, z, params)
    if isinstance(z, LaurentPoly):
        return ClearedOperator(X.map(lambda v: num * v) + SparseExactMatrix.identity(n, den), den)
    if _is_zero(den):
        where = "z in {a, b}" if side == "left" else "z in {1/c, 1/d}"
        raise PoleError(f"K-matrix pole ({side}): {where}")
    coeff = num / den
    return SparseExactMatrix.identity(n) + X.map(lambda v: coeff * v)


def scattering_operator(i: int, zpoint: Sequence, sector: Sector, params: ParamPoint) -> SparseExactMatrix:
    """The scattering matrix ``S_i`` evaluated at a full assignment ``z_1..z_N``.

    ``S_i = R_{i-1}(z_i/z_{i-1}) .. R_1(z_i/z_1) K_1(1/z_i) R_1(z_i z_1) .. R_{i-1}(z_i z_{i-1})
            R_i(z_i z_{i+1}) .. R_{N-1}(z_i z_N) K_N(z_i) R_{N-1}(z_i/z_N) .. R_i(z_i/z_{i+1})``
    """
    N = sector.N
    if len(zpoint) != N:
        raise ValueError("zpoint must assign every spectral parameter")
    if not 1 <= i <= N:
        raise IndexError(f"S_{i} undefined for N={N}")
    z = list(zpoint)
    zi = z[i - 1]
    factors: List[Tuple[str, Callable[[], SparseExactMatrix]]] = []
    # written left to right as in the product definition
    for j in range(i - 1, 0, -1):
        factors.append((f"R_{j}(z_{i}/z_{j})", lambda j=j: r_operator(j, zi / z[j - 1], sector, params)))
    factors.append((f"K_1(1/z_{i})", lambda: k_operator("left", 1 / zi, sector, params)))
    for j in range(1, i):
        factors.append((f"R_{j}(z_{i} z_{j})", lambda j=j: r_operator(j, zi * z[j - 1], sector, params)))
    for j in range(i, N):
        factors.append((f"R_{j}(z_{i} z_{j + 1})", lambda j=j: r_operator(j, zi * z[j], sector, params)))
    factors.append((f"K_N(z_{i})", lambda: k_operator("right", zi, sector, params)))
    for j in range(N - 1, i - 1, -1):
        factors.append((f"R_{j}(z_{i}/z_{j + 1})", lambda j=j: r_operator(j, zi / z[j], sector, params)))
    out = None
    for name, make in factors:
        try:
            F = make()
        except PoleError as exc:
            raise PoleError(f"pole in factor {name}: {exc}") from exc
        out = F if out is None else out @ F
    return out


# ---------------------------------------------------------------- exact nullspace


def _integer_row(row: Dict[int, mpq]) -> Dict[int, int]:
    den = 1
    for v in row.values():
        den = den * v.denominator // math.gcd(den, v.denominator)
    out = {j: int(v * den) for j, v in row.items()}
    return _primitive(out)


def _primitive(row: Dict[int, int]) -> Dict[int, int]:
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
    if g > 1:
        out = {}
        for j, v in row.items():
            q, r = divmod(v, g)
            if r:
                raise InvariantViolation("inexact division in row normalisation")
            out[j] = q
        return out
    return row


def exact_nullspace(mat: SparseExactMatrix) -> List[List[mpq]]:
    """Kernel basis of a rational matrix.

    Fraction-free elimination on integer rows: each elimination step is
    ``r <- p*r - f*pivot_row`` followed by exact division by the row content,
    so no intermediate fractions appear.  Each basis vector is scaled so its
    first nonzero entry is 1.
    """
    nrows, ncols = mat.dims
    rows: List[Dict[int, mpq]] = [dict() for _ in range(nrows)]
    for (i, j), v in mat.entries.items():
        rows[i][j] = Q(v)
    work = [_integer_row(r) for r in rows if r]
    pivots: Dict[int, Dict[int, int]] = {}  # pivot column -> row
    for r in work:
        # reduce r against existing pivots
        while r:
            col = min(r)
            prow = pivots.get(col)
            if prow is None:
                pivots[col] = r
                break
            p, f = prow[col], r[col]
            g = math.gcd(p, f)
            p, f = p // g, f // g
            new = {j: p * v for j, v in r.items()}
            for j, v in prow.items():
                nv = new.get(j, 0) - f * v
                if nv:
                    new[j] = nv
                else:
                    new.pop(j, None)
            r = _primitive(new)
    pivot_cols = sorted(pivots)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for fcol in free:
        x: Dict[int, mpq] = {fcol: ONE}
        for col in reversed(pivot_cols):
            prow = pivots[col]
            acc = ZERO
            for j, v in prow.items():
                if j != col and j in x:
                    acc += v * x[j]
            if acc:
                x[col] = -acc / prow[col]
        vec = [x.get(j, ZERO) for j in range(ncols)]
        lead = next(v for v in vec if v)
        basis.append([v / lead for v in vec])
    for vec in basis:
        if any(v for v in mat.matvec(vec)):
            raise InvariantViolation("nullspace vector fails M v = 0")
    return basis


# ---------------------------------------------------------------- integrability checks


def _random_point(rng, avoid, maxden: int = 30):
    """A random nonzero rational in (-4, 4) outside ``avoid`` (and not +-1)."""
    while True:
        z = mpq(rng.randint(-4 * maxden, 4 * maxden), rng.randint(1, maxden))
        if z and z not in (ONE, -ONE) and z not in avoid:
            return z


def verify_integrability(N: int, m: int, params: ParamPoint, npoints: int = 10, rng=None) -> List[dict]:
    """Unitarity, Yang-Baxter and reflection equations, commutation of the
    scattering matrices and ``S_i'(1) = 2/(s - 1/s) M``, all exactly at random
    rational points.  One report entry per identity."""
    import random

    rng = rng or random.Random(1)
    sector = Sector(N, m)
    n = len(sector)
    one = SparseExactMatrix.identity(n)
    s, t = params.s, params.t
    poles = {params.a, params.b, 1 / params.c, 1 / params.d, 1 / params.a, 1 / params.b, params.c, params.d,
             1 / t, t}

    def R(i, z):
        return r_operator(i, z, sector, params)

    def K(side, z):
        return k_operator(side, z, sector, params)

    def safe(z_list):
        # every R argument must avoid 1/t and every K argument the boundary poles
        for z in z_list:
            if z in poles or 1 / z in poles or z * t == 1:
                return False
        return True

    checks: Dict[str, bool] = {}

    def record(name, ok):
        checks[name] = checks.get(name, True) and ok

    for _ in range(npoints):
        while True:
            x, y, z = (_random_point(rng, poles) for _ in range(3))
            args = [x, y, z, x / y, y / z, x / z, x * y, 1 / (x * y)]
            if safe(args) and len({x, y, z}) == 3:
                break
        for i in range(1, N):
            record("unitarity R", R(i, x) @ R(i, 1 / x) == one)
            record("R(1) = 1", R(i, ONE) == one)
        for i in range(1, N - 1):
            lhs = R(i, y / z) @ R(i + 1, x / z) @ R(i, x / y)
            rhs = R(i + 1, x / y) @ R(i, x / z) @ R(i + 1, y / z)
            record("Yang-Baxter", lhs == rhs)
        if N >= 1:
            record("unitarity K_1", K("left", x) @ K("left", 1 / x) == one)
            record("unitarity K_N", K("right", x) @ K("right", 1 / x) == one)
            record("K(1) = 1", K("left", ONE) == one and K("right", ONE) == one)
        if N >= 2:
            lhs = R(1, x / y) @ K("left", y) @ R(1, 1 / (x * y)) @ K("left", x)
            rhs = K("left", x) @ R(1, 1 / (x * y)) @ K("left", y) @ R(1, x / y)
            record("reflection equation (left)", lhs == rhs)
            lhs = R(N - 1, x / y) @ K("right", x) @ R(N - 1, x * y) @ K("right", y)
            rhs = K("right", y) @ R(N - 1, x * y) @ K("right", x) @ R(N - 1, x / y)
            record("reflection equation (right)", lhs == rhs)
        if N >= 1:
            while True:
                zp = [_random_point(rng, poles, maxden=12) for _ in range(N)]
                try:
                    S = [scattering_operator(i, zp, sector, params) for i in range(1, N + 1)]
                    break
                except PoleError:
                    continue
            ok = all(S[i] @ S[j] == S[j] @ S[i] for i in range(N) for j in range(i + 1, N))
            record("scattering matrices commute", ok)
    if N >= 1:
        ones = [ONE] * N
        record("S_i(1) = 1", all(scattering_operator(i, ones, sector, params) == one for i in range(1, N + 1)))
        M = markov_matrix(sector, params, formal=True)
        target = M.map(lambda v: 2 / (s - 1 / s) * v)
        for i in range(1, N + 1):
            pt = [Dual(ONE, ONE) if j == i - 1 else Dual(ONE) for j in range(N)]
            S = scattering_operator(i, pt, sector, params)
            deriv = S.map(lambda v: v.b if isinstance(v, Dual) else ZERO)
            record("S_i'(1) = 2 M/(s - 1/s)", deriv == target)
    return [{"identity": k, "N": N, "m": m, "pass": v} for k, v in checks.items()]
