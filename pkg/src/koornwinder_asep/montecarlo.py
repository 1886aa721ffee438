"""Event-driven (Gillespie) simulation of the open two-species exclusion process.

Sites hold -1 (empty), 0 (second-class) or +1 (first-class).  Event channels
are the left boundary (0), the bonds (1..N-1, bond i joins sites i-1 and i)
and the right boundary (N); their rates live in a Fenwick tree so that an
event is selected in O(log N).  Uniforms come from numpy's counter-based
Philox generator in fixed-size blocks, so a seed fixes the trajectory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict

import numba
import numpy as np

from .model import Sector, word_to_str
from .params import ParamPoint

RNG_NAME = "numpy.random.Philox"
_BLOCK = 1 << 20


class SimConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SimConfig:
    N: int
    m: int
    params: ParamPoint
    events: int = 10_000_000
    burn_in: int = 100_000
    seed: int = 0
    stride: int = 1  # events between particle-number checks
    batches: int = 50

    def validate(self):
        if self.N < 1 or not 0 <= self.m <= self.N:
            raise SimConfigError(f"bad sector N={self.N}, m={self.m}")
        if self.events < self.batches or self.batches < 2:
            raise SimConfigError("need at least two batches and one event per batch")
        if self.burn_in < 0 or self.stride < 1:
            raise SimConfigError("burn_in must be >= 0 and stride >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise SimConfigError("seed must be a 64-bit unsigned integer")
        rates = rate_table(self.params)
        bad = [k for k, v in rates.items() if not v > 0]
        if bad:
            raise SimConfigError(f"non-positive rates: {', '.join(bad)}")


def rate_table(params: ParamPoint) -> Dict[str, float]:
    """Jump rates: a larger species overtakes a smaller one to its right at ``t^{1/2}``,
    to its left at ``t^{-1/2}``; boundary rates as in the Markov matrix."""
    s = float(params.s)
    return {
        "swap_down": s,  # (x, y) -> (y, x) with x > y
        "swap_up": 1 / s,  # (x, y) -> (y, x) with x < y
        "alpha": float(params.alpha),
        "beta": float(params.beta),
        "gamma": float(params.gamma),
        "delta": float(params.delta),
    }


# ---------------------------------------------------------------- compiled kernel


@numba.njit(cache=True)
def _channel_rate(sites, ch, N, r_down, r_up, alpha, beta, gamma, delta):
    if ch == 0:
        x = sites[0]
        if x == -1:
            return alpha
        if x == 1:
            return gamma
        return 0.0
    if ch == N:
        x = sites[N - 1]
        if x == -1:
            return delta
        if x == 1:
            return beta
        return 0.0
    x = sites[ch - 1]
    y = sites[ch]
    if x > y:
        return r_down
    if x < y:
        return r_up
    return 0.0


@numba.njit(cache=True)
def _fenwick_build(rates, tree):
    n = rates.shape[0]
    for i in range(n + 1):
        tree[i] = 0.0
    for i in range(n):
        j = i + 1
        while j <= n:
            tree[j] += rates[i]
            j += j & (-j)


@numba.njit(cache=True)
def _fenwick_add(tree, i, delta):
    n = tree.shape[0] - 1
    j = i + 1
    while j <= n:
        tree[j] += delta
        j += j & (-j)


@numba.njit(cache=True)
def _fenwick_find(tree, target):
    """Smallest index whose prefix sum exceeds ``target``."""
    n = tree.shape[0] - 1
    pos = 0
    step = 1
    while step * 2 <= n:
        step *= 2
    while step > 0:
        nxt = pos + step
        if nxt <= n and tree[nxt] <= target:
            pos = nxt
            target -= tree[nxt]
        step //= 2
    if pos > n - 1:
        pos = n - 1
    return pos


@numba.njit(cache=True)
def _run(sites, uniforms, n_events, record, offset, code_index, powers, dwell, flux, duration, batch_len,
         r_down, r_up, alpha, beta, gamma, delta, stride, m_expected):
    """Advance ``n_events`` events.  With ``record`` the dwell time of every visited
    configuration, the left-boundary flux and the elapsed time of global event
    ``offset + k`` go to batch ``(offset + k) // batch_len``.  Returns the
    number of failed particle-number checks."""
    N = sites.shape[0]
    rates = np.empty(N + 1)
    for ch in range(N + 1):
        rates[ch] = _channel_rate(sites, ch, N, r_down, r_up, alpha, beta, gamma, delta)
    tree = np.zeros(N + 2)
    _fenwick_build(rates, tree)
    code = 0
    for i in range(N):
        code += (sites[i] + 1) * powers[i]
    violations = 0
    nb = dwell.shape[0]
    total = 0.0
    for k in range(n_events):
        if k % 65536 == 0:
            # refresh the tree and the total against accumulated rounding
            _fenwick_build(rates, tree)
            total = 0.0
            for ch in range(N + 1):
                total += rates[ch]
        u1 = uniforms[2 * k]
        u2 = uniforms[2 * k + 1]
        dt = -math.log(1.0 - u1) / total
        b = (offset + k) // batch_len
        if b >= nb:
            b = nb - 1
        if record:
            dwell[b, code_index[code]] += dt
            duration[b] += dt
        ch = _fenwick_find(tree, u2 * total)
        while rates[ch] == 0.0 and ch < N:
            ch += 1
        if ch == 0:
            old = sites[0]
            new = -old
            sites[0] = new
            code += (new - old) * powers[0]
            if record:
                flux[b] += 1.0 if old == -1 else -1.0
            touched0, touched1 = 0, 1
        elif ch == N:
            old = sites[N - 1]
            new = -old
            sites[N - 1] = new
            code += (new - old) * powers[N - 1]
            touched0, touched1 = N - 1, N
        else:
            x = sites[ch - 1]
            y = sites[ch]
            sites[ch - 1] = y
            sites[ch] = x
            code += (y - x) * powers[ch - 1] + (x - y) * powers[ch]
            touched0, touched1 = ch - 1, ch + 1
        for c2 in range(touched0, touched1 + 1):
            if c2 <= N:
                nr = _channel_rate(sites, c2, N, r_down, r_up, alpha, beta, gamma, delta)
                if nr != rates[c2]:
                    _fenwick_add(tree, c2, nr - rates[c2])
                    total += nr - rates[c2]
                    rates[c2] = nr
        if k % stride == 0:
            cnt = 0
            for i in range(N):
                if sites[i] == 0:
                    cnt += 1
            if cnt != m_expected:
                violations += 1
    return violations


# ---------------------------------------------------------------- driver


@dataclass
class SimResult:
    config: dict
    occupation: Dict[str, float]
    current_mean: float
    current_stderr: float
    events: int
    elapsed_time: float
    occupation_stderr: Dict[str, float] = field(default_factory=dict)
    rng: str = RNG_NAME

    def to_json_obj(self) -> dict:
        return {
            "config": self.config,
            "occupation": self.occupation,
            "occupation_stderr": self.occupation_stderr,
            "current": {"mean": self.current_mean, "stderr": self.current_stderr, "convention": "paper"},
            "events": self.events,
            "elapsed_time": self.elapsed_time,
            "rng": self.rng,
        }


def _uniform_blocks(rng: np.random.Generator, n_events: int):
    left = n_events
    while left > 0:
        k = min(left, _BLOCK)
        yield k, rng.random(2 * k)
        left -= k


def simulate(config: SimConfig) -> SimResult:
    """Run one trajectory; occupation fractions are time-weighted, the current is the net
    number of first-class injections at the left boundary per unit time."""
    config.validate()
    N, m = config.N, config.m
    sector = Sector(N, m)
    rates = rate_table(config.params)
    powers = np.array([3 ** i for i in range(N)], dtype=np.int64)
    code_index = np.full(3 ** N, -1, dtype=np.int64)
    for idx, w in enumerate(sector.configs):
        code_index[sum((x + 1) * 3 ** i for i, x in enumerate(w))] = idx
    sites = np.array(sector.configs[0], dtype=np.int64)
    cfg = {"N": N, "m": m, "params": config.params.to_dict(), "events": config.events, "burn_in": config.burn_in,
           "seed": config.seed, "stride": config.stride, "batches": config.batches}
    if m == N:
        # only second-class particles: no event can fire
        w = word_to_str(sector.configs[0])
        return SimResult(cfg, {w: 1.0}, 0.0, 0.0, 0, math.inf, {w: 0.0})
    rng = np.random.Generator(np.random.Philox(config.seed))
    nb = config.batches
    dwell = np.zeros((nb, len(sector)))
    flux = np.zeros(nb)
    duration = np.zeros(nb)
    args = (rates["swap_down"], rates["swap_up"], rates["alpha"], rates["beta"], rates["gamma"], rates["delta"],
            config.stride, m)
    violations = 0
    for k, u in _uniform_blocks(rng, config.burn_in):
        violations += _run(sites, u, k, False, 0, code_index, powers, dwell, flux, duration, 1, *args)
    batch_len = config.events // nb
    done = 0
    for k, u in _uniform_blocks(rng, config.events):
        violations += _run(sites, u, k, True, done, code_index, powers, dwell, flux, duration, batch_len, *args)
        done += k
    if violations:
        raise AssertionError(f"second-class particle number changed in {violations} checks")
    T = duration.sum()
    occ = dwell.sum(axis=0) / T
    batch_occ = dwell / duration[:, None]
    occ_se = batch_occ.std(axis=0, ddof=1) / math.sqrt(nb)
    batch_J = flux / duration
    return SimResult(
        config=cfg,
        occupation={word_to_str(w): float(occ[i]) for i, w in enumerate(sector.configs)},
        occupation_stderr={word_to_str(w): float(occ_se[i]) for i, w in enumerate(sector.configs)},
        current_mean=float(flux.sum() / T),
        current_stderr=float(batch_J.std(ddof=1) / math.sqrt(nb)),
        events=config.events,
        elapsed_time=float(T),
    )


# ---------------------------------------------------------------- comparison


def compare(result: SimResult, state, tv_threshold: float = 0.01) -> dict:
    """Total-variation distance, per-configuration z-scores and the current z-score
    against an exact :class:`~koornwinder_asep.qkz.StateVector`."""
    from .observables import steady_current

    if result.config["N"] != state.N or result.config["m"] != state.m:
        raise SimConfigError("simulation and exact state are in different sectors")
    probs = state.probabilities()
    exact = {word_to_str(w): float(p) for w, p in zip(state.sector.configs, probs)}
    tv = 0.5 * sum(abs(result.occupation.get(k, 0.0) - v) for k, v in exact.items())
    z = {}
    for k, v in exact.items():
        se = result.occupation_stderr.get(k, 0.0)
        diff = result.occupation.get(k, 0.0) - v
        z[k] = diff / se if se > 0 else (0.0 if diff == 0 else math.inf)
    J = float(steady_current(state.N, state.m, state.params)) if state.N >= 1 else 0.0
    if result.current_stderr > 0:
        zJ = (result.current_mean - J) / result.current_stderr
    else:
        zJ = 0.0 if result.current_mean == J else math.inf
    return {
        "tv": tv,
        "tv_pass": tv < tv_threshold,
        "z_scores": z,
        "max_abs_z": max((abs(v) for v in z.values()), default=0.0),
        "current_exact": J,
        "current_sim": result.current_mean,
        "current_z": zJ,
    }
